#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hope/config.hpp"
#include "hope/field.hpp"

namespace hope {

/// Smoothed indicator of the interval (a, b):
///   Phi_{a,b}(z) = (tanh(w(z-a)) - tanh(w(z-b))) / 2,
/// close to 1 deep inside (a,b) and to 0 far outside.
inline double phi_ab(double z, double a, double b, double w) {
    return 0.5 * (std::tanh(w * (z - a)) - std::tanh(w * (z - b)));
}

/// d_x-periodization of Phi_{-g,g}(x): the argument is reduced to the base
/// cell and the two nearest periodic images are added. The defect is a tanh
/// tail, negligible for w*d_x >> 1.
inline double phi_gap_periodic(double x, double g, double w, double dx) {
    double r = x - dx * std::round(x / dx);
    return phi_ab(r, -g, g, w) + phi_ab(r - dx, -g, g, w) + phi_ab(r + dx, -g, g, w);
}

/// Permittivity envelope specification. TanhSlabGap is the slab-with-gap
/// profile Phi_{-d,d}(z) * (1 - Phi_{-g,g}(x)) with y-independent shape;
/// Sum/Product compose children pointwise; Tabulated carries raw samples and
/// no smoothness guarantee.
struct EnvelopeSpec {
    enum class Kind { Constant, TanhSlabGap, Tabulated, Sum, Product };

    Kind kind = Kind::Constant;
    double value = 0.0;               // Constant
    double d = 0.0, g = 0.0, w = 0.0; // TanhSlabGap
    std::vector<double> samples;      // Tabulated, z fastest then y then x
    int tNx = 0, tNy = 0, tNz = 0;
    std::string source;               // Tabulated provenance, for reports
    std::vector<EnvelopeSpec> terms;  // Sum / Product

    static EnvelopeSpec constant(double c) {
        EnvelopeSpec s;
        s.kind = Kind::Constant;
        s.value = c;
        return s;
    }

    static EnvelopeSpec tanh_slab_gap(double d_, double g_, double w_) {
        if (!(d_ > 0.0) || !(g_ > 0.0) || !(w_ > 0.0))
            throw Error(ErrorCategory::Config, "TanhSlabGap requires d > 0, g > 0, w > 0");
        EnvelopeSpec s;
        s.kind = Kind::TanhSlabGap;
        s.d = d_;
        s.g = g_;
        s.w = w_;
        return s;
    }

    /// True when every leaf is analytic (anything but Tabulated).
    bool smooth() const {
        if (kind == Kind::Tabulated) return false;
        for (const auto& t : terms)
            if (!t.smooth()) return false;
        return true;
    }

    double eval(double x, double y, double z, double dx) const {
        switch (kind) {
            case Kind::Constant: return value;
            case Kind::TanhSlabGap:
                return phi_ab(z, -d, d, w) * (1.0 - phi_gap_periodic(x, g, w, dx));
            case Kind::Tabulated:
                throw Error(ErrorCategory::Config, "tabulated envelopes sample by index");
            case Kind::Sum: {
                double s = 0.0;
                for (const auto& t : terms) s += t.eval(x, y, z, dx);
                return s;
            }
            case Kind::Product: {
                double s = 1.0;
                for (const auto& t : terms) s *= t.eval(x, y, z, dx);
                return s;
            }
        }
        return 0.0;
    }
};

/// Nodal samples of the envelope on the lateral x vertical grid.
inline ScalarField sample_envelope(const EnvelopeSpec& spec, const Discretization& disc) {
    const int nx = disc.lat.Nx, ny = disc.lat.Ny, nz = disc.vert.size();
    ScalarField out(nx, ny, nz);
    if (spec.kind == EnvelopeSpec::Kind::Tabulated) {
        if (spec.tNx != nx || spec.tNy != ny || spec.tNz != nz)
            throw Error(ErrorCategory::Config,
                        "tabulated envelope shape does not match the grid");
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j)
                for (int k = 0; k < nz; ++k)
                    out.at(i, j, k) = spec.samples[(size_t(i) * ny + j) * nz + k];
        return out;
    }
    for (int i = 0; i < nx; ++i) {
        double x = disc.lat.node_x(i);
        for (int j = 0; j < ny; ++j) {
            double y = disc.lat.node_y(j);
            for (int k = 0; k < nz; ++k)
                out.at(i, j, k) = spec.eval(x, y, disc.vert.node(k), disc.lat.dx);
        }
    }
    return out;
}

/// Worst grid point of the physical-permittivity requirement
/// eps_v = eps_bar (1 - delta E) > 0. Throws when violated.
inline void check_permittivity_positive(const ScalarField& env_nodal, double eps_bar,
                                        double delta) {
    double worst = 1e300;
    int wi = 0, wj = 0, wk = 0;
    for (int i = 0; i < env_nodal.Nx(); ++i)
        for (int j = 0; j < env_nodal.Ny(); ++j)
            for (int k = 0; k < env_nodal.Nz(); ++k) {
                double ev = eps_bar * (1.0 - delta * env_nodal.at(i, j, k).real());
                if (ev < worst) {
                    worst = ev;
                    wi = i; wj = j; wk = k;
                }
            }
    if (worst <= 0.0)
        throw Error(ErrorCategory::Config,
                    "eps_v = eps_bar(1 - delta E) is nonpositive (min " + std::to_string(worst) +
                        " at grid point (" + std::to_string(wi) + "," + std::to_string(wj) + "," +
                        std::to_string(wk) + "))");
}

/// How far eps_v at the slab faces is from the exterior permittivities. The
/// tanh envelopes satisfy the matching limits only up to their tails; this
/// reports the worst-case gap at z = +h and z = -h (warnings, not errors).
struct ContinuityReport {
    double mismatch_upper = 0.0;
    double mismatch_lower = 0.0;
};

inline ContinuityReport continuity_check(const ScalarField& env_nodal,
                                         const ScatteringConfig& cfg) {
    ContinuityReport rep;
    const int nz = env_nodal.Nz();
    for (int i = 0; i < env_nodal.Nx(); ++i)
        for (int j = 0; j < env_nodal.Ny(); ++j) {
            double ev_top = cfg.eps_bar * (1.0 - cfg.delta * env_nodal.at(i, j, 0).real());
            double ev_bot = cfg.eps_bar * (1.0 - cfg.delta * env_nodal.at(i, j, nz - 1).real());
            rep.mismatch_upper = std::max(rep.mismatch_upper, std::abs(ev_top - cfg.eps_u));
            rep.mismatch_lower = std::max(rep.mismatch_lower, std::abs(ev_bot - cfg.eps_w));
        }
    return rep;
}

} // namespace hope
