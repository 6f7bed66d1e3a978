#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "hope/boundary.hpp"
#include "hope/driver.hpp"

namespace hope {

struct EfficiencyRow {
    int p = 0, q = 0;
    Medium medium = Medium::Upper;
    cdouble gamma;
    Vec3c amp;
    double efficiency = 0.0;
};

struct SeriesReport {
    double K_fit = 0.0;      // prefactor of the geometric fit K B^l
    double B_fit = 0.0;      // fitted growth ratio
    double B_delta = 0.0;    // B_fit * |delta|
    double tail_ratio = 0.0; // ||E_L delta^L|| / ||E^L||
    bool terminating = false;
    bool supercritical = false; // |delta| >= 1 / B_fit
    int fit_lo = 0, fit_hi = 0;
};

struct ScatteringResult {
    Trace reflected;   // scattered amplitudes (incident removed at (0,0))
    Trace transmitted; // transmitted amplitudes
    std::vector<EfficiencyRow> rows;
    double sum_reflected = 0.0, sum_transmitted = 0.0;
    double energy_defect = 0.0;
    SeriesReport series;
};

/// Rayleigh amplitudes from the two boundary traces of the summed field.
inline std::pair<Trace, Trace> rayleigh_amplitudes(const Trace& at_h, const Trace& at_mh,
                                                   const ScatteringConfig& cfg) {
    return {outgoing_expansion(at_h, Medium::Upper, cfg),
            outgoing_expansion(at_mh, Medium::Lower, cfg)};
}

/// Diffraction efficiencies with the standard z-flux normalization
///   e^(m)_{p,q} = (gamma^(m)_{p,q} / gamma^(u)) |amp_{p,q}|^2,
/// summed over propagating modes only, so full transmission through a
/// matched stack gives e^T_{0,0} = 1 exactly. Requires lossless exteriors.
inline void efficiencies(ScatteringResult& result, const ModeTable& table,
                         const ScatteringConfig& cfg) {
    result.rows.clear();
    result.sum_reflected = result.sum_transmitted = 0.0;
    const double gu = cfg.gamma_u();
    for (int i = 0; i < table.Nx(); ++i)
        for (int j = 0; j < table.Ny(); ++j) {
            const ModeEntry& e = table.at(i, j);
            if (e.prop_u) {
                EfficiencyRow row;
                row.p = e.p;
                row.q = e.q;
                row.medium = Medium::Upper;
                row.gamma = e.gamma_u;
                row.amp = result.reflected.vec(i, j);
                row.efficiency = (e.gamma_u.real() / gu) * row.amp.norm2();
                result.sum_reflected += row.efficiency;
                result.rows.push_back(row);
            }
            if (e.prop_w) {
                EfficiencyRow row;
                row.p = e.p;
                row.q = e.q;
                row.medium = Medium::Lower;
                row.gamma = e.gamma_w;
                row.amp = result.transmitted.vec(i, j);
                row.efficiency = (e.gamma_w.real() / gu) * row.amp.norm2();
                result.sum_transmitted += row.efficiency;
                result.rows.push_back(row);
            }
        }
    result.energy_defect = 1.0 - result.sum_reflected - result.sum_transmitted;
}

/// Least-squares fit of log ||E_l|| ~ log K + l log B over orders
/// [fit_lo, L], excluding the l = 0,1 transient by default. Flags a
/// terminating series (envelope annihilates the field) and delta beyond the
/// fitted convergence radius.
inline SeriesReport analyticity_report(const std::vector<double>& norms, double delta,
                                       int fit_lo = 2) {
    SeriesReport rep;
    const int L = int(norms.size()) - 1;
    rep.fit_lo = std::min(fit_lo, std::max(0, L - 1));
    rep.fit_hi = L;

    double scale = 0.0;
    for (double n : norms) scale = std::max(scale, n);
    std::vector<double> xs, ys;
    for (int l = rep.fit_lo; l <= L; ++l)
        if (norms[l] > 1e-250 && norms[l] > 1e-18 * scale) {
            xs.push_back(double(l));
            ys.push_back(std::log(norms[l]));
        }
    if (xs.size() < 2) {
        rep.terminating = true;
        rep.tail_ratio = 0.0;
        return rep;
    }
    double n = double(xs.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t k = 0; k < xs.size(); ++k) {
        sx += xs[k];
        sy += ys[k];
        sxx += xs[k] * xs[k];
        sxy += xs[k] * ys[k];
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double inter = (sy - slope * sx) / n;
    rep.B_fit = std::exp(slope);
    rep.K_fit = std::exp(inter);
    rep.B_delta = rep.B_fit * std::abs(delta);
    rep.supercritical = rep.B_delta >= 1.0;

    // Tail estimate ||E_L delta^L|| / ||E^L|| with the partial-sum norm
    // bounded below by a triangle-inequality proxy.
    double sum = 0.0;
    for (int l = 0; l <= L; ++l) sum += norms[l] * std::pow(std::abs(delta), l);
    if (sum > 0.0) rep.tail_ratio = norms[L] * std::pow(std::abs(delta), L) / sum;
    return rep;
}

struct DecayProbe {
    double lateral_slope = 0.0; // d log(max modal magnitude) / d max(|p|,|q|)
    double cheb_slope = 0.0;    // d log(max Chebyshev coefficient) / d k
    bool slow_decay = false;    // lateral slope above the warning threshold
};

namespace detail {

inline double fit_log_slope(const std::vector<double>& mags) {
    std::vector<double> xs, ys;
    double top = 0.0;
    for (double m : mags) top = std::max(top, m);
    if (top <= 0.0) return 0.0;
    for (size_t r = 0; r < mags.size(); ++r)
        if (mags[r] > 1e-16 * top) {
            xs.push_back(double(r));
            ys.push_back(std::log(mags[r]));
        }
    if (xs.size() < 2) return -1e3; // everything beyond ring 0 at round-off
    double n = double(xs.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t k = 0; k < xs.size(); ++k) {
        sx += xs[k];
        sy += ys[k];
        sxx += xs[k] * xs[k];
        sxy += xs[k] * ys[k];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace detail

/// Spectral-decay footprint of joint spatial analyticity: exponential decay
/// rates of lateral modal magnitudes (by max(|p|,|q|) ring) and of vertical
/// Chebyshev coefficients. Slopes are reported, not asserted.
inline DecayProbe spatial_decay_probe(const VectorField& field, const Discretization& disc,
                                      double warn_slope = -0.2) {
    const int nx = field.Nx(), ny = field.Ny(), nz = field.Nz();
    const auto& w = disc.vert.quad_weights();

    int rings = std::max(nx, ny) / 2;
    std::vector<double> ring_mag(rings, 0.0);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            int r = std::max(std::abs(disc.lat.px(i)), std::abs(disc.lat.qy(j)));
            if (r >= rings) continue;
            double m2 = 0.0;
            for (int mcomp = 0; mcomp < 3; ++mcomp) {
                const cdouble* prof = field[mcomp].profile(i, j);
                for (int k = 0; k < nz; ++k) m2 += w[k] * std::norm(prof[k]);
            }
            ring_mag[r] = std::max(ring_mag[r], std::sqrt(m2));
        }

    // Chebyshev analysis: values at CGL nodes -> coefficients via the
    // discrete cosine relations (half weights at the ends).
    const int n = nz - 1;
    std::vector<double> cheb_mag(nz, 0.0);
    for (int k = 0; k <= n; ++k) {
        for (int mcomp = 0; mcomp < 3; ++mcomp)
            for (int i = 0; i < nx; ++i)
                for (int j = 0; j < ny; ++j) {
                    const cdouble* prof = field[mcomp].profile(i, j);
                    cdouble c{};
                    for (int jn = 0; jn <= n; ++jn) {
                        double wgt = (jn == 0 || jn == n) ? 0.5 : 1.0;
                        c += wgt * prof[jn] * std::cos(pi * double(jn) * double(k) / double(n));
                    }
                    c *= 2.0 / double(n);
                    if (k == 0 || k == n) c *= 0.5;
                    cheb_mag[k] = std::max(cheb_mag[k], std::abs(c));
                }
    }

    DecayProbe probe;
    probe.lateral_slope = detail::fit_log_slope(ring_mag);
    probe.cheb_slope = detail::fit_log_slope(cheb_mag);
    probe.slow_decay = probe.lateral_slope > warn_slope;
    return probe;
}

} // namespace hope
