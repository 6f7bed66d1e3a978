#pragma once

#include <string>
#include <vector>

#include "hope/boundary.hpp"
#include "hope/config.hpp"
#include "hope/modal_solver.hpp"

namespace hope {

struct FlaggedMode {
    int p = 0, q = 0;
    std::string reason; // "wood:u" / "wood:w" / "wood:eps_bar" / "near_singular"
    double magnitude = 0.0;
};

struct ValidationReport {
    bool pass = false;
    double alpha = 0.0, beta = 0.0, gamma_u = 0.0;
    int propagating_u = 0, propagating_w = 0, propagating_slab = 0;
    std::vector<FlaggedMode> flagged;
};

/// Deterministic pre-solve screen: derives the quasiperiodicity shifts,
/// computes every retained vertical wavenumber, and flags Wood anomalies
/// (|gamma| < wood_tol) and near-singular modal determinants (the runtime
/// proxy for a non-permissible (omega, eps_bar) pair). Structural problems
/// (shape, positivity, polarization) throw instead of being flagged.
inline ValidationReport validate(const ScatteringConfig& cfg, const NumericalParams& num) {
    check_basic(cfg, num);

    LateralGrid lat(num.Nx, num.Ny, cfg.dx, cfg.dy, cfg.alpha(), cfg.beta());
    ModeTable table(cfg, lat);

    ValidationReport rep;
    rep.alpha = cfg.alpha();
    rep.beta = cfg.beta();
    rep.gamma_u = cfg.gamma_u();
    rep.propagating_u = table.propagating_count(Medium::Upper);
    rep.propagating_w = table.propagating_count(Medium::Lower);
    rep.propagating_slab = table.propagating_count(Medium::Slab);

    for (const auto& e : table.entries()) {
        auto flag = [&](double mag, const char* reason) {
            rep.flagged.push_back({e.p, e.q, reason, mag});
        };
        if (std::abs(e.gamma_u) < num.wood_tol) flag(std::abs(e.gamma_u), "wood:u");
        if (std::abs(e.gamma_w) < num.wood_tol) flag(std::abs(e.gamma_w), "wood:w");
        if (std::abs(e.gamma_eps) < num.wood_tol) flag(std::abs(e.gamma_eps), "wood:eps_bar");
        if (std::abs(e.gamma_eps) >= num.wood_tol) {
            GreensKernel kern(e, cfg.h);
            if (std::abs(kern.Drs) < num.wood_tol) flag(std::abs(kern.Drs), "near_singular");
        }
    }
    rep.pass = rep.flagged.empty();
    return rep;
}

} // namespace hope
