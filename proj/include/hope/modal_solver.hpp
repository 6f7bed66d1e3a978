#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "hope/boundary.hpp"
#include "hope/field.hpp"
#include "hope/spectral.hpp"

namespace hope {

enum class SolverBackend { Collocation, Greens };

inline const char* to_string(SolverBackend b) {
    return b == SolverBackend::Collocation ? "collocation" : "greens";
}

/// Reduced right-hand sides for one lateral mode: the Helmholtz forcings
///   H = [alpha beta F^y + (alpha^2 - k0^2 ebar) F^x - i alpha d_z F^z] / (k0^2 ebar)
///   L = [alpha beta F^x + (beta^2  - k0^2 ebar) F^y - i beta  d_z F^z] / (k0^2 ebar)
/// plus the raw F^z profile and the Robin boundary data.
struct ModalRHS {
    Eigen::VectorXcd H, L, Fz;
    Vec3c Q, R;
};

/// Modal solution profiles on the vertical grid.
struct ModalSolution {
    Eigen::VectorXcd vx, vy, vz;
};

inline ModalRHS assemble_modal_rhs(const VectorField& F, const Trace& Q, const Trace& R, int i,
                                   int j, const Discretization& disc, double k0sq_ebar) {
    const int nz = disc.vert.size();
    ModalRHS rhs;
    Eigen::Map<const Eigen::VectorXcd> Fx(F[0].profile(i, j), nz);
    Eigen::Map<const Eigen::VectorXcd> Fy(F[1].profile(i, j), nz);
    Eigen::Map<const Eigen::VectorXcd> Fz(F[2].profile(i, j), nz);
    Eigen::VectorXcd dzFz = disc.vert.D1() * Fz;

    const double a = disc.lat.alphas[i], b = disc.lat.betas[j];
    rhs.H = (a * b * Fy + (a * a - k0sq_ebar) * Fx - iu * a * dzFz) / k0sq_ebar;
    rhs.L = (a * b * Fx + (b * b - k0sq_ebar) * Fy - iu * b * dzFz) / k0sq_ebar;
    rhs.Fz = Fz;
    rhs.Q = Q.vec(i, j);
    rhs.R = R.vec(i, j);
    return rhs;
}

inline void require_off_cutoff(const ModeEntry& e, double wood_tol) {
    if (std::abs(e.gamma_eps) < wood_tol)
        throw Error(ErrorCategory::WoodAnomaly,
                    "mode (" + std::to_string(e.p) + "," + std::to_string(e.q) +
                        ") at slab cutoff: |gamma_eps| < wood_tol");
}

/// Collocation production backend. Dense solve of
///   d_z^2 v + gamma_eps^2 v = H (or L) on interior nodes,
///   d_z v(h) - i gamma_u v(h) = -Q,   d_z v(-h) + i gamma_w v(-h) = R,
/// then v^z reconstructed as (-F^z + i alpha d_z v^x + i beta d_z v^y) / gamma_eps^2.
inline ModalSolution solve_mode_collocation(const ModalRHS& rhs, const ModeEntry& e,
                                            const VerticalGrid& vert, double wood_tol) {
    require_off_cutoff(e, wood_tol);
    const int nz = vert.size();
    const cdouble geps2 = e.gamma_eps * e.gamma_eps;

    Eigen::MatrixXcd A = vert.D2().cast<cdouble>();
    A.diagonal().array() += geps2;
    A.row(0) = vert.D1().row(0).cast<cdouble>();
    A(0, 0) -= iu * e.gamma_u;
    A.row(nz - 1) = vert.D1().row(nz - 1).cast<cdouble>();
    A(nz - 1, nz - 1) += iu * e.gamma_w;

    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    double rcond_proxy = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (!(rcond_proxy > 0.0) || !std::isfinite(rcond_proxy))
        throw Error(ErrorCategory::NearSingularMode,
                    "singular collocation matrix at mode (" + std::to_string(e.p) + "," +
                        std::to_string(e.q) + ")");

    Eigen::VectorXcd bx = rhs.H, by = rhs.L;
    bx(0) = -rhs.Q.x;
    bx(nz - 1) = rhs.R.x;
    by(0) = -rhs.Q.y;
    by(nz - 1) = rhs.R.y;

    ModalSolution sol;
    sol.vx = lu.solve(bx);
    sol.vy = lu.solve(by);
    sol.vz = (-rhs.Fz + iu * e.alpha * (vert.D1() * sol.vx) + iu * e.beta * (vert.D1() * sol.vy)) /
             geps2;
    return sol;
}

/// Per-panel Gauss-Legendre machinery for the Green's-function backend.
/// Panels are the intervals between consecutive collocation nodes; the
/// interpolation matrix maps nodal values to values at all panel quadrature
/// points (barycentric Lagrange, exact for grid-representable polynomials).
class GreensQuadrature {
public:
    static constexpr int G = 12;

    explicit GreensQuadrature(const VerticalGrid& vert) : vert_(&vert) {
        static const double xg[G] = {
            -0.9815606342467192, -0.9041172563704749, -0.7699026741943047,
            -0.5873179542866175, -0.3678314989981802, -0.1252334085114689,
            0.1252334085114689,  0.3678314989981802,  0.5873179542866175,
            0.7699026741943047,  0.9041172563704749,  0.9815606342467192};
        static const double wg[G] = {
            0.0471753363865118, 0.1069393259953184, 0.1600783285433462,
            0.2031674267230659, 0.2334925365383548, 0.2491470458134028,
            0.2491470458134028, 0.2334925365383548, 0.2031674267230659,
            0.1600783285433462, 0.1069393259953184, 0.0471753363865118};

        const int nz = vert.size();
        const auto& z = vert.nodes();
        const int npts = (nz - 1) * G;
        s_.resize(npts);
        w_.resize(npts);
        for (int panel = 1; panel < nz; ++panel) {
            double lo = z[panel], hi = z[panel - 1];
            double mid = 0.5 * (hi + lo), half = 0.5 * (hi - lo);
            for (int g = 0; g < G; ++g) {
                s_[(panel - 1) * G + g] = mid + half * xg[g];
                w_[(panel - 1) * G + g] = half * wg[g];
            }
        }
        P_.resize(npts, nz);
        for (int r = 0; r < npts; ++r) {
            // Row of barycentric Lagrange basis values at s_[r].
            const auto& bw = vert.barycentric_weights();
            double den = 0.0;
            int hit = -1;
            for (int jn = 0; jn < nz; ++jn) {
                double d = s_[r] - z[jn];
                if (std::abs(d) < 1e-15 * vert.h()) { hit = jn; break; }
                den += bw[jn] / d;
            }
            for (int jn = 0; jn < nz; ++jn)
                P_(r, jn) = (hit >= 0) ? double(jn == hit)
                                       : (bw[jn] / (s_[r] - z[jn])) / den;
        }
    }

    const VerticalGrid& vert() const { return *vert_; }
    double s(int panel, int g) const { return s_[(panel - 1) * G + g]; }
    double w(int panel, int g) const { return w_[(panel - 1) * G + g]; }
    Eigen::VectorXcd at_quad_points(const Eigen::VectorXcd& nodal) const { return P_ * nodal; }

private:
    const VerticalGrid* vert_;
    std::vector<double> s_, w_;
    Eigen::MatrixXd P_;
};

/// Constants of the closed-form modal solution, in the rescaled form where
/// every stored exponential has a nonpositive real-part exponent. gbar is the
/// analytic continuation -i gamma_eps (real and positive for evanescent
/// modes), and Drs = a d - b c exp(-4 gbar h) carries the determinant after
/// factoring out exp(2 gbar h).
struct GreensKernel {
    cdouble gbar, gbar_u, gbar_w;
    cdouble a, b, c, d;
    cdouble Drs;

    GreensKernel(const ModeEntry& e, double h) {
        gbar = -iu * e.gamma_eps;
        gbar_u = -iu * e.gamma_u;
        gbar_w = -iu * e.gamma_w;
        a = gbar + gbar_w;
        b = gbar - gbar_w;
        c = gbar - gbar_u;
        d = gbar + gbar_u;
        Drs = a * d - b * c * std::exp(-4.0 * gbar * h);
    }
};

namespace detail {

struct GreensProfile {
    Eigen::VectorXcd value, deriv;
};

/// Evaluate the closed-form solution for one scalar BVP with forcing `f`
/// (H or L) and Robin data (Qm, Rm), on all grid nodes.
inline GreensProfile greens_scalar(const Eigen::VectorXcd& f, cdouble Qm, cdouble Rm,
                                   const GreensKernel& k, const GreensQuadrature& quad) {
    const VerticalGrid& vert = quad.vert();
    const int nz = vert.size();
    const double h = vert.h();
    const auto& z = vert.nodes();
    const cdouble g = k.gbar;

    Eigen::VectorXcd fq = quad.at_quad_points(f);

    // One-sided exponential convolutions and plain weighted antiderivatives;
    // all exponents have nonpositive real part.
    Eigen::VectorXcd Jm(nz), Jp(nz), Pp(nz), Pm(nz);
    Jm(0) = cdouble{};
    Pp(0) = cdouble{};
    for (int j = 1; j < nz; ++j) {
        cdouble step = std::exp(g * (z[j] - z[j - 1]));
        cdouble acc_j{}, acc_p{};
        for (int gq = 0; gq < GreensQuadrature::G; ++gq) {
            double s = quad.s(j, gq), w = quad.w(j, gq);
            cdouble fv = fq((j - 1) * GreensQuadrature::G + gq);
            acc_j += w * std::exp(g * (z[j] - s)) * fv;
            acc_p += w * std::exp(g * (s - h)) * fv;
        }
        Jm(j) = step * Jm(j - 1) + acc_j;
        Pp(j) = Pp(j - 1) + acc_p;
    }
    Jp(nz - 1) = cdouble{};
    Pm(nz - 1) = cdouble{};
    for (int j = nz - 2; j >= 0; --j) {
        cdouble step = std::exp(-g * (z[j] - z[j + 1]));
        cdouble acc_j{}, acc_p{};
        for (int gq = 0; gq < GreensQuadrature::G; ++gq) {
            double s = quad.s(j + 1, gq), w = quad.w(j + 1, gq);
            cdouble fv = fq(j * GreensQuadrature::G + gq);
            acc_j += w * std::exp(-g * (z[j] - s)) * fv;
            acc_p += w * std::exp(-g * (s + h)) * fv;
        }
        Jp(j) = step * Jp(j + 1) + acc_j;
        Pm(j) = Pm(j + 1) + acc_p;
    }
    const cdouble Pbar_plus = Pp(nz - 1); // int_{-h}^{h} e^{g(s-h)} f ds
    const cdouble Pbar_minus = Pm(0);     // int_{-h}^{h} e^{-g(s+h)} f ds

    const cdouble inv2g = 1.0 / (2.0 * g);
    const cdouble e2h = std::exp(-2.0 * g * h);

    GreensProfile out;
    out.value.resize(nz);
    out.deriv.resize(nz);
    for (int j = 0; j < nz; ++j) {
        cdouble eu = std::exp(g * (z[j] - h));      // e^{g(z-h)}
        cdouble ed = std::exp(-g * (z[j] + h));     // e^{-g(z+h)}
        cdouble plus = -Qm * k.a * eu - Rm * k.c * eu * e2h -
                       inv2g * (k.a * k.c * eu * Pbar_plus + k.a * k.d * Jm(j) +
                                k.b * k.c * e2h * eu * Pm(j));
        cdouble minus = -Qm * k.b * ed * e2h - Rm * k.d * ed -
                        inv2g * (k.b * k.d * ed * Pbar_minus + k.a * k.d * Jp(j) +
                                 k.b * k.c * e2h * ed * Pp(j));
        out.value(j) = (plus + minus) / k.Drs;
        out.deriv(j) = g * (plus - minus) / k.Drs;
    }
    return out;
}

} // namespace detail

/// Green's-function verification backend: evaluates the closed-form modal
/// solution with panel quadrature. Interchangeable with the collocation
/// backend; kept algebraically independent of it.
inline ModalSolution solve_mode_greens(const ModalRHS& rhs, const ModeEntry& e,
                                       const GreensQuadrature& quad, double wood_tol) {
    require_off_cutoff(e, wood_tol);
    GreensKernel kern(e, quad.vert().h());
    if (std::abs(kern.Drs) < wood_tol)
        throw Error(ErrorCategory::NearSingularMode,
                    "near-singular modal determinant at mode (" + std::to_string(e.p) + "," +
                        std::to_string(e.q) + ")");

    auto px = detail::greens_scalar(rhs.H, rhs.Q.x, rhs.R.x, kern, quad);
    auto py = detail::greens_scalar(rhs.L, rhs.Q.y, rhs.R.y, kern, quad);

    ModalSolution sol;
    sol.vx = px.value;
    sol.vy = py.value;
    const cdouble geps2 = e.gamma_eps * e.gamma_eps;
    sol.vz = (-rhs.Fz + iu * e.alpha * px.deriv + iu * e.beta * py.deriv) / geps2;
    return sol;
}

} // namespace hope
