#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "hope/types.hpp"

namespace hope {

/// Lateral Fourier grid: retained wavenumbers alpha_p = alpha + (2*pi/d_x)*p,
/// beta_q = beta + (2*pi/d_y)*q for p in [-Nx/2, Nx/2-1], q in [-Ny/2, Ny/2-1].
/// Storage follows DFT index order: slot i maps to p = i for i < N/2, else i - N.
struct LateralGrid {
    int Nx = 0, Ny = 0;
    double dx = 0.0, dy = 0.0;
    double alpha = 0.0, beta = 0.0;
    std::vector<double> alphas; // alpha_p by storage slot
    std::vector<double> betas;  // beta_q by storage slot

    LateralGrid() = default;

    LateralGrid(int nx, int ny, double dx_, double dy_, double alpha_, double beta_)
        : Nx(nx), Ny(ny), dx(dx_), dy(dy_), alpha(alpha_), beta(beta_) {
        if (nx < 2 || ny < 2 || nx % 2 || ny % 2)
            throw Error(ErrorCategory::Config, "lateral grid sizes must be even and >= 2");
        alphas.resize(nx);
        betas.resize(ny);
        for (int i = 0; i < nx; ++i) alphas[i] = alpha + (2.0 * pi / dx) * mode_of(i, nx);
        for (int j = 0; j < ny; ++j) betas[j] = beta + (2.0 * pi / dy) * mode_of(j, ny);
    }

    static int mode_of(int slot, int n) { return slot < n / 2 ? slot : slot - n; }
    static int slot_of(int mode, int n) { return mode >= 0 ? mode : mode + n; }

    int px(int slot) const { return mode_of(slot, Nx); }
    int qy(int slot) const { return mode_of(slot, Ny); }

    double node_x(int i) const { return dx * double(i) / double(Nx); }
    double node_y(int j) const { return dy * double(j) / double(Ny); }

    /// Sobolev weight <(p,q)>^2 = 1 + p^2 + q^2 for the mode in slots (i,j).
    double weight2(int i, int j) const {
        double p = px(i), q = qy(j);
        return 1.0 + p * p + q * q;
    }
};

/// Chebyshev-Gauss-Lobatto grid on [-h, h], z_0 = h down to z_{Nz-1} = -h,
/// with collocation differentiation matrices and Clenshaw-Curtis weights.
class VerticalGrid {
public:
    VerticalGrid() = default;

    VerticalGrid(int nz, double h) : Nz_(nz), h_(h) {
        if (nz < 4) throw Error(ErrorCategory::Config, "Nz must be >= 4");
        const int n = nz - 1;
        z_.resize(nz);
        for (int j = 0; j < nz; ++j) z_[j] = h * std::cos(pi * double(j) / double(n));
        z_[0] = h;
        z_[nz - 1] = -h;

        // Differentiation matrix (Trefethen) with negative-sum-trick diagonal.
        D1_.resize(nz, nz);
        std::vector<double> c(nz, 1.0);
        c[0] = c[nz - 1] = 2.0;
        for (int i = 0; i < nz; ++i) {
            for (int j = 0; j < nz; ++j) {
                if (i == j) continue;
                double sign = ((i + j) % 2) ? -1.0 : 1.0;
                D1_(i, j) = (c[i] / c[j]) * sign / (z_[i] - z_[j]);
            }
        }
        for (int i = 0; i < nz; ++i) {
            double s = 0.0;
            for (int j = 0; j < nz; ++j)
                if (j != i) s += D1_(i, j);
            D1_(i, i) = -s;
        }
        D2_ = D1_ * D1_;

        // Clenshaw-Curtis weights (exact for polynomials of degree <= Nz-1).
        w_.resize(nz);
        for (int j = 0; j < nz; ++j) {
            double theta = pi * double(j) / double(n);
            double s = 1.0;
            for (int k = 1; k <= n / 2; ++k) {
                double b = (2 * k == n) ? 1.0 : 2.0;
                s -= b * std::cos(2.0 * k * theta) / double(4 * k * k - 1);
            }
            double wj = 2.0 * s / double(n);
            if (j == 0 || j == n) wj *= 0.5;
            w_[j] = wj * h; // scale [-1,1] -> [-h,h]
        }

        // Barycentric weights for CGL nodes.
        bary_.resize(nz);
        for (int j = 0; j < nz; ++j) {
            double bw = (j % 2) ? -1.0 : 1.0;
            if (j == 0 || j == nz - 1) bw *= 0.5;
            bary_[j] = bw;
        }
    }

    int size() const { return Nz_; }
    double h() const { return h_; }
    double node(int j) const { return z_[j]; }
    const std::vector<double>& nodes() const { return z_; }
    const Eigen::MatrixXd& D1() const { return D1_; }
    const Eigen::MatrixXd& D2() const { return D2_; }
    const std::vector<double>& quad_weights() const { return w_; }

    /// Integral over [-h, h] of nodal values via Clenshaw-Curtis.
    template <typename Scalar>
    Scalar integrate(const std::vector<Scalar>& f) const {
        Scalar s{};
        for (int j = 0; j < Nz_; ++j) s += w_[j] * f[j];
        return s;
    }

    /// Barycentric Lagrange evaluation of nodal data at arbitrary z.
    template <typename Scalar>
    Scalar interpolate(const Scalar* f, double z) const {
        Scalar num{};
        double den = 0.0;
        for (int j = 0; j < Nz_; ++j) {
            double d = z - z_[j];
            if (std::abs(d) < 1e-14 * (std::abs(z) + h_)) return f[j];
            double t = bary_[j] / d;
            num += t * f[j];
            den += t;
        }
        return num / den;
    }

    const std::vector<double>& barycentric_weights() const { return bary_; }

private:
    int Nz_ = 0;
    double h_ = 0.0;
    std::vector<double> z_;
    Eigen::MatrixXd D1_, D2_;
    std::vector<double> w_;
    std::vector<double> bary_;
};

} // namespace hope
