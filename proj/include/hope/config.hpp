#pragma once

#include <cmath>
#include <optional>

#include "hope/types.hpp"

namespace hope {

/// Physical problem description. Immutable once validated; all derived
/// constants (k^(m), alpha, beta, gamma^(u), kappa) come from accessors.
struct ScatteringConfig {
    double k0 = 0.0;          // free-space wavenumber
    double eps_u = 1.0;       // upper half-space relative permittivity
    double eps_w = 1.0;       // lower half-space relative permittivity
    double eps_bar = 1.0;     // background slab permittivity
    double delta = 0.0;       // perturbation amplitude
    double dx = 1.0, dy = 1.0; // lateral periods
    double h = 1.0;           // slab half-height, slab is -h < z < h
    double theta = 0.0;       // polar incidence angle, radians
    double phi = 0.0;         // azimuthal incidence angle, radians
    Vec3c A;                  // incident electric polarization, |A| = 1

    double k_u() const { return std::sqrt(eps_u) * k0; }
    double k_w() const { return std::sqrt(eps_w) * k0; }
    double alpha() const { return k_u() * std::sin(theta) * std::cos(phi); }
    double beta() const { return k_u() * std::sin(theta) * std::sin(phi); }
    double gamma_u() const { return k_u() * std::cos(theta); }

    Vec3c kappa() const { return {alpha(), beta(), -gamma_u()}; }

    /// TE-like unit polarization orthogonal to kappa and the plane of
    /// incidence; the default when no A is given.
    Vec3c default_polarization() const {
        return {-std::sin(phi), std::cos(phi), 0.0};
    }
};

/// Discretization and truncation choices.
struct NumericalParams {
    int Nx = 8, Ny = 8;       // lateral Fourier modes per direction, even
    int Nz = 24;              // vertical collocation points
    int L = 4;                // truncation order of the delta series
    double wood_tol = 1e-8;   // minimum admissible |gamma| and |D|
    bool dealias = true;      // 3/2-rule padding in lateral products
};

/// Structural checks that need no mode table. Throws on violation.
inline void check_basic(const ScatteringConfig& cfg, const NumericalParams& num) {
    auto require = [](bool ok, ErrorCategory cat, const char* msg) {
        if (!ok) throw Error(cat, msg);
    };
    require(cfg.k0 > 0, ErrorCategory::Config, "k0 must be positive");
    require(cfg.eps_u > 0 && cfg.eps_w > 0 && cfg.eps_bar > 0, ErrorCategory::Config,
            "permittivities must be positive");
    require(cfg.dx > 0 && cfg.dy > 0 && cfg.h > 0, ErrorCategory::Config,
            "periods and half-height must be positive");
    require(std::cos(cfg.theta) > 1e-12, ErrorCategory::Config,
            "grazing or beyond-grazing incidence rejected (cos(theta) <= 0)");
    require(num.Nx >= 2 && num.Ny >= 2 && num.Nx % 2 == 0 && num.Ny % 2 == 0,
            ErrorCategory::Config, "Nx, Ny must be even and >= 2");
    require(num.Nz >= 4, ErrorCategory::Config, "Nz must be >= 4");
    require(num.L >= 0, ErrorCategory::Config, "L must be >= 0");
    require(num.wood_tol > 0, ErrorCategory::Config, "wood_tol must be positive");

    double amag = std::sqrt(cfg.A.norm2());
    require(std::abs(amag - 1.0) <= 1e-12 * std::max(1.0, amag), ErrorCategory::InvalidPolarization,
            "|A| must be 1");
    Vec3c k = cfg.kappa();
    cdouble dot = cfg.A.x * k.x + cfg.A.y * k.y + cfg.A.z * k.z;
    require(std::abs(dot) <= 1e-12 * cfg.k_u(), ErrorCategory::InvalidPolarization,
            "A . kappa must vanish (transverse polarization)");
}

} // namespace hope
