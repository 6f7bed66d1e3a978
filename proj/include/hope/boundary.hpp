#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "hope/config.hpp"
#include "hope/field.hpp"

namespace hope {

enum class Medium { Upper, Lower, Slab };

/// Vertical wavenumber for relative permittivity eps at lateral wavenumbers
/// (a, b): real nonnegative below cutoff (propagating), positive imaginary
/// above (evanescent).
inline cdouble gamma_branch(double eps, double k0, double a, double b) {
    double s = eps * k0 * k0 - a * a - b * b;
    return s >= 0.0 ? cdouble(std::sqrt(s), 0.0) : cdouble(0.0, std::sqrt(-s));
}

struct ModeEntry {
    int p = 0, q = 0;          // mode indices
    double alpha = 0.0, beta = 0.0;
    cdouble gamma_u, gamma_w, gamma_eps;
    bool prop_u = false, prop_w = false, prop_eps = false;
};

/// Per-(p,q) vertical wavenumbers for the three media, in field storage order.
class ModeTable {
public:
    ModeTable() = default;

    ModeTable(const ScatteringConfig& cfg, const LateralGrid& lat) : Nx_(lat.Nx), Ny_(lat.Ny) {
        entries_.reserve(size_t(Nx_) * Ny_);
        for (int i = 0; i < Nx_; ++i)
            for (int j = 0; j < Ny_; ++j) {
                ModeEntry e;
                e.p = lat.px(i);
                e.q = lat.qy(j);
                e.alpha = lat.alphas[i];
                e.beta = lat.betas[j];
                e.gamma_u = gamma_branch(cfg.eps_u, cfg.k0, e.alpha, e.beta);
                e.gamma_w = gamma_branch(cfg.eps_w, cfg.k0, e.alpha, e.beta);
                e.gamma_eps = gamma_branch(cfg.eps_bar, cfg.k0, e.alpha, e.beta);
                // Modes exactly at cutoff carry no power and are rejected by
                // the Wood guard; they count as neither propagating nor
                // evanescent here.
                e.prop_u = e.gamma_u.imag() == 0.0 && e.gamma_u.real() > 0.0;
                e.prop_w = e.gamma_w.imag() == 0.0 && e.gamma_w.real() > 0.0;
                e.prop_eps = e.gamma_eps.imag() == 0.0 && e.gamma_eps.real() > 0.0;
                entries_.push_back(e);
            }
    }

    int Nx() const { return Nx_; }
    int Ny() const { return Ny_; }

    const ModeEntry& at(int i, int j) const { return entries_[size_t(i) * Ny_ + j]; }
    const std::vector<ModeEntry>& entries() const { return entries_; }

    cdouble gamma(Medium m, int i, int j) const {
        const ModeEntry& e = at(i, j);
        switch (m) {
            case Medium::Upper: return e.gamma_u;
            case Medium::Lower: return e.gamma_w;
            case Medium::Slab: return e.gamma_eps;
        }
        return {};
    }

    int propagating_count(Medium m) const {
        int n = 0;
        for (const auto& e : entries_)
            n += (m == Medium::Upper ? e.prop_u : m == Medium::Lower ? e.prop_w : e.prop_eps);
        return n;
    }

private:
    int Nx_ = 0, Ny_ = 0;
    std::vector<ModeEntry> entries_;
};

/// Wood-anomaly guard: throws if any retained mode sits within wood_tol of
/// cutoff in any medium.
inline ModeTable build_mode_table(const ScatteringConfig& cfg, const LateralGrid& lat,
                                  double wood_tol) {
    ModeTable table(cfg, lat);
    for (const auto& e : table.entries()) {
        auto check = [&](cdouble g, const char* medium) {
            if (std::abs(g) < wood_tol)
                throw Error(ErrorCategory::WoodAnomaly,
                            "Wood anomaly: |gamma| < wood_tol at mode (" + std::to_string(e.p) +
                                "," + std::to_string(e.q) + ") in medium " + medium);
        };
        check(e.gamma_u, "u");
        check(e.gamma_w, "w");
        check(e.gamma_eps, "eps_bar");
    }
    return table;
}

/// Transparent-boundary Fourier multiplier: scales each modal coefficient of
/// the trace (componentwise on the three Cartesian components) by
/// -i gamma^(m)_{p,q}. Applied at Gamma_h for Upper, Gamma_{-h} for Lower.
inline Trace apply_T(const Trace& t, Medium medium, const ModeTable& table) {
    Trace out(t.Nx, t.Ny);
    for (int i = 0; i < t.Nx; ++i)
        for (int j = 0; j < t.Ny; ++j) {
            cdouble mult = -iu * table.gamma(medium, i, j);
            for (int m = 0; m < 3; ++m) out.at(m, i, j) = mult * t.at(m, i, j);
        }
    return out;
}

/// Incident-field forcing phi at Gamma_h: a single (0,0)-mode trace with
/// value 2 i gamma^(u) exp(-i gamma^(u) h) A.
inline Trace incident_forcing(const ScatteringConfig& cfg, const LateralGrid& lat) {
    Trace t(lat.Nx, lat.Ny);
    cdouble g = cfg.gamma_u();
    cdouble coef = 2.0 * iu * g * std::exp(-iu * g * cfg.h);
    t.at(0, 0, 0) = coef * cfg.A.x;
    t.at(1, 0, 0) = coef * cfg.A.y;
    t.at(2, 0, 0) = coef * cfg.A.z;
    return t;
}

/// Value of the incident plane wave at the upper boundary, A exp(-i gamma^(u) h).
inline Vec3c incident_trace_value(const ScatteringConfig& cfg) {
    return std::exp(-iu * cdouble(cfg.gamma_u()) * cfg.h) * cfg.A;
}

/// Rayleigh amplitudes of the outgoing expansions. At Gamma_h and Gamma_{-h}
/// the expansions evaluate to their coefficients, so the total trace *is* the
/// amplitude array; for the reflected series the incident contribution is
/// removed from the (0,0) mode (c_{0,0} = u_{0,0} - A exp(-i gamma^(u) h)).
inline Trace outgoing_expansion(const Trace& trace, Medium medium, const ScatteringConfig& cfg) {
    Trace amps = trace;
    if (medium == Medium::Upper) {
        Vec3c inc = incident_trace_value(cfg);
        amps.at(0, 0, 0) -= inc.x;
        amps.at(1, 0, 0) -= inc.y;
        amps.at(2, 0, 0) -= inc.z;
    }
    return amps;
}

} // namespace hope
