#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "hope/field.hpp"

namespace hope {
namespace spectral {

/// Dense DFT "plan" for one axis length. Forward carries the 1/N factor, so
/// round trips are exact and Parseval reads (1/N) sum |f_i|^2 = sum |c_p|^2,
/// matching Fourier coefficients defined with the 1/(d_x d_y) measure.
struct DftPlan {
    int N = 0;
    Eigen::MatrixXcd fwd, inv;

    explicit DftPlan(int n) : N(n), fwd(n, n), inv(n, n) {
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i) {
                double ang = 2.0 * pi * double(k) * double(i) / double(n);
                fwd(k, i) = std::polar(1.0 / double(n), -ang);
                inv(i, k) = std::polar(1.0, ang);
            }
    }
};

inline Eigen::MatrixXcd slice_of(const ScalarField& f, int k) {
    Eigen::MatrixXcd s(f.Nx(), f.Ny());
    for (int i = 0; i < f.Nx(); ++i)
        for (int j = 0; j < f.Ny(); ++j) s(i, j) = f.at(i, j, k);
    return s;
}

inline void set_slice(ScalarField& f, int k, const Eigen::MatrixXcd& s) {
    for (int i = 0; i < f.Nx(); ++i)
        for (int j = 0; j < f.Ny(); ++j) f.at(i, j, k) = s(i, j);
}

/// Nodal lateral samples (periodic part) -> modal coefficients, level by level.
inline ScalarField to_modal(const ScalarField& nodal) {
    ScalarField out(nodal.Nx(), nodal.Ny(), nodal.Nz());
    DftPlan px(nodal.Nx()), py(nodal.Ny());
    for (int k = 0; k < nodal.Nz(); ++k)
        set_slice(out, k, px.fwd * slice_of(nodal, k) * py.fwd.transpose());
    return out;
}

/// Modal coefficients -> nodal samples of the periodic part.
inline ScalarField to_nodal(const ScalarField& modal) {
    ScalarField out(modal.Nx(), modal.Ny(), modal.Nz());
    DftPlan px(modal.Nx()), py(modal.Ny());
    for (int k = 0; k < modal.Nz(); ++k)
        set_slice(out, k, px.inv * slice_of(modal, k) * py.inv.transpose());
    return out;
}

inline VectorField to_modal(const VectorField& nodal) {
    VectorField out(nodal.Nx(), nodal.Ny(), nodal.Nz());
    for (int m = 0; m < 3; ++m) out[m] = to_modal(nodal[m]);
    return out;
}

inline VectorField to_nodal(const VectorField& modal) {
    VectorField out(modal.Nx(), modal.Ny(), modal.Nz());
    for (int m = 0; m < 3; ++m) out[m] = to_nodal(modal[m]);
    return out;
}

/// Quasiperiodic phase exp(i alpha x_i + i beta y_j) turning periodic-part
/// samples into true field samples.
inline cdouble quasiperiodic_phase(const LateralGrid& lat, int i, int j) {
    return std::polar(1.0, lat.alpha * lat.node_x(i) + lat.beta * lat.node_y(j));
}

namespace detail {

// Zero-pad a modal slice from N to M (M >= N) in DFT index order.
inline Eigen::MatrixXcd pad_modal(const Eigen::MatrixXcd& c, int Mx, int My) {
    const int nx = int(c.rows()), ny = int(c.cols());
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(Mx, My);
    for (int i = 0; i < nx; ++i) {
        int pi = LateralGrid::mode_of(i, nx);
        int ii = LateralGrid::slot_of(pi, Mx);
        for (int j = 0; j < ny; ++j) {
            int qj = LateralGrid::mode_of(j, ny);
            out(ii, LateralGrid::slot_of(qj, My)) = c(i, j);
        }
    }
    return out;
}

inline Eigen::MatrixXcd truncate_modal(const Eigen::MatrixXcd& c, int nx, int ny) {
    const int Mx = int(c.rows()), My = int(c.cols());
    Eigen::MatrixXcd out(nx, ny);
    for (int i = 0; i < nx; ++i) {
        int pi = LateralGrid::mode_of(i, nx);
        int ii = LateralGrid::slot_of(pi, Mx);
        for (int j = 0; j < ny; ++j) {
            int qj = LateralGrid::mode_of(j, ny);
            out(i, j) = c(ii, LateralGrid::slot_of(qj, My));
        }
    }
    return out;
}

inline int padded_size(int n) {
    int m = (3 * n + 1) / 2;
    return m + (m % 2);
}

} // namespace detail

/// Pointwise product of two laterally-modal scalar levels, optionally on a
/// 3/2-rule zero-padded grid so quadratic aliasing cannot fold back into the
/// retained band.
inline Eigen::MatrixXcd product_slice(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b,
                                      bool dealias) {
    const int nx = int(a.rows()), ny = int(a.cols());
    if (dealias) {
        const int mx = detail::padded_size(nx), my = detail::padded_size(ny);
        DftPlan px(mx), py(my);
        Eigen::MatrixXcd an = px.inv * detail::pad_modal(a, mx, my) * py.inv.transpose();
        Eigen::MatrixXcd bn = px.inv * detail::pad_modal(b, mx, my) * py.inv.transpose();
        an = an.cwiseProduct(bn);
        return detail::truncate_modal(px.fwd * an * py.fwd.transpose(), nx, ny);
    }
    DftPlan px(nx), py(ny);
    Eigen::MatrixXcd an = px.inv * a * py.inv.transpose();
    Eigen::MatrixXcd bn = px.inv * b * py.inv.transpose();
    an = an.cwiseProduct(bn);
    return px.fwd * an * py.fwd.transpose();
}

/// Pointwise product e(x,y,z) * u of a modal scalar envelope with a modal
/// field, level by level in z. Exact for band-limited inputs whose product
/// stays in band; with dealias on, alias-free for any quadratic product.
inline VectorField lateral_product(const ScalarField& env_modal, const VectorField& u,
                                   bool dealias) {
    if (env_modal.Nx() != u.Nx() || env_modal.Ny() != u.Ny() || env_modal.Nz() != u.Nz())
        throw Error(ErrorCategory::Config, "lateral_product: shape mismatch");
    VectorField out(u.Nx(), u.Ny(), u.Nz());
    for (int k = 0; k < u.Nz(); ++k) {
        Eigen::MatrixXcd e = slice_of(env_modal, k);
        for (int m = 0; m < 3; ++m)
            set_slice(out[m], k, product_slice(e, slice_of(u[m], k), dealias));
    }
    return out;
}

inline ScalarField lateral_product(const ScalarField& env_modal, const ScalarField& u,
                                   bool dealias) {
    if (!env_modal.same_shape(u))
        throw Error(ErrorCategory::Config, "lateral_product: shape mismatch");
    ScalarField out(u.Nx(), u.Ny(), u.Nz());
    for (int k = 0; k < u.Nz(); ++k)
        set_slice(out, k, product_slice(slice_of(env_modal, k), slice_of(u, k), dealias));
    return out;
}

/// Apply the vertical collocation derivative to every modal profile.
inline ScalarField d_z(const ScalarField& u, const VerticalGrid& vert) {
    const int nz = u.Nz();
    ScalarField out(u.Nx(), u.Ny(), nz);
    const Eigen::MatrixXd& D = vert.D1();
    for (int i = 0; i < u.Nx(); ++i)
        for (int j = 0; j < u.Ny(); ++j) {
            Eigen::Map<const Eigen::VectorXcd> f(u.profile(i, j), nz);
            Eigen::Map<Eigen::VectorXcd> g(out.profile(i, j), nz);
            g = D * f;
        }
    return out;
}

/// Volumetric quasiperiodic Sobolev norm
///   ||u||_{H^s}^2 = sum_j sum_{p,q} <(p,q)>^{2(s-j)} int |d_z^j u_{p,q}|^2 dz,
/// with the z-integral by Clenshaw-Curtis and the lateral measure normalized
/// by 1/(d_x d_y). Components of a vector field add in quadrature.
inline double sobolev_norm(const ScalarField& u, int s, const Discretization& disc) {
    if (s < 0 || s > 4) throw Error(ErrorCategory::Config, "sobolev_norm: s must be in [0,4]");
    const auto& w = disc.vert.quad_weights();
    const int nz = disc.vert.size();
    double total = 0.0;
    ScalarField der = u;
    for (int j = 0; j <= s; ++j) {
        if (j > 0) der = d_z(der, disc.vert);
        for (int i = 0; i < u.Nx(); ++i)
            for (int jj = 0; jj < u.Ny(); ++jj) {
                const cdouble* prof = der.profile(i, jj);
                double integ = 0.0;
                for (int k = 0; k < nz; ++k) integ += w[k] * std::norm(prof[k]);
                total += std::pow(disc.lat.weight2(i, jj), double(s - j)) * integ;
            }
    }
    return std::sqrt(total);
}

inline double sobolev_norm(const VectorField& u, int s, const Discretization& disc) {
    double t = 0.0;
    for (int m = 0; m < 3; ++m) {
        double n = sobolev_norm(u[m], s, disc);
        t += n * n;
    }
    return std::sqrt(t);
}

/// Interfacial quasiperiodic Sobolev norm of a modal trace; s may be a
/// half-integer (weights <(p,q)>^{2s}).
inline double interfacial_norm(const Trace& t, double s, const LateralGrid& lat) {
    double total = 0.0;
    for (int i = 0; i < t.Nx; ++i)
        for (int j = 0; j < t.Ny; ++j)
            total += std::pow(lat.weight2(i, j), s) * t.vec(i, j).norm2();
    return std::sqrt(total);
}

/// Modal divergence: i alpha_p u^x + i beta_q u^y + D_z u^z per mode.
inline ScalarField divergence(const VectorField& u, const Discretization& disc) {
    ScalarField dzuz = d_z(u[2], disc.vert);
    ScalarField out(u.Nx(), u.Ny(), u.Nz());
    for (int i = 0; i < u.Nx(); ++i) {
        cdouble ia = iu * disc.lat.alphas[i];
        for (int j = 0; j < u.Ny(); ++j) {
            cdouble ib = iu * disc.lat.betas[j];
            for (int k = 0; k < u.Nz(); ++k)
                out.at(i, j, k) = ia * u[0].at(i, j, k) + ib * u[1].at(i, j, k) + dzuz.at(i, j, k);
        }
    }
    return out;
}

/// Modal curl curl = -Laplacian + grad div, mode by mode:
///   x: beta^2 u^x - d_z^2 u^x - alpha beta u^y + i alpha d_z u^z
///   y: alpha^2 u^y - d_z^2 u^y - alpha beta u^x + i beta d_z u^z
///   z: (alpha^2 + beta^2) u^z + i alpha d_z u^x + i beta d_z u^y
inline VectorField curl_curl(const VectorField& u, const Discretization& disc) {
    const auto& vert = disc.vert;
    ScalarField dzx = d_z(u[0], vert), dzy = d_z(u[1], vert), dzz = d_z(u[2], vert);
    ScalarField dzzx = d_z(dzx, vert), dzzy = d_z(dzy, vert);
    VectorField out(u.Nx(), u.Ny(), u.Nz());
    for (int i = 0; i < u.Nx(); ++i) {
        double a = disc.lat.alphas[i];
        for (int j = 0; j < u.Ny(); ++j) {
            double b = disc.lat.betas[j];
            for (int k = 0; k < u.Nz(); ++k) {
                out[0].at(i, j, k) = b * b * u[0].at(i, j, k) - dzzx.at(i, j, k) -
                                     a * b * u[1].at(i, j, k) + iu * a * dzz.at(i, j, k);
                out[1].at(i, j, k) = a * a * u[1].at(i, j, k) - dzzy.at(i, j, k) -
                                     a * b * u[0].at(i, j, k) + iu * b * dzz.at(i, j, k);
                out[2].at(i, j, k) = (a * a + b * b) * u[2].at(i, j, k) +
                                     iu * a * dzx.at(i, j, k) + iu * b * dzy.at(i, j, k);
            }
        }
    }
    return out;
}

} // namespace spectral
} // namespace hope
