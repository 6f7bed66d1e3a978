#pragma once

#include <algorithm>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

#include "hope/boundary.hpp"
#include "hope/envelope.hpp"
#include "hope/modal_solver.hpp"
#include "hope/spectral.hpp"
#include "hope/validate.hpp"

namespace hope {

/// The computed perturbation orders E_0..E_L with their H^2 norms and
/// boundary traces. delta enters only at summation time, so one series
/// serves any number of delta values.
struct HopeSeries {
    std::vector<VectorField> orders;
    std::vector<double> h2_norms;
    std::vector<Trace> traces_h;  // at Gamma_h  (z = +h)
    std::vector<Trace> traces_mh; // at Gamma_{-h}
};

struct ResidualReport {
    double interior = 0.0; // max modal residual of curl curl E - eps_v k0^2 E, relative
    double upc = 0.0;      // -d_z E - T_u[E] - phi at Gamma_h, relative to |phi|
    double dpc = 0.0;      // d_z E - T_w[E] at Gamma_{-h}, relative
};

/// Runs the recursion: order zero is forced by the incident trace, every
/// later order by F_l = eps_bar k0^2 E * E_{l-1}. Modal solves within an
/// order are independent and can be mapped over worker threads.
class HopeDriver {
public:
    HopeDriver(const ScatteringConfig& cfg, const NumericalParams& num,
               const EnvelopeSpec& envelope, SolverBackend backend = SolverBackend::Collocation,
               int threads = 1)
        : cfg_(cfg), num_(num), backend_(backend), threads_(std::max(1, threads)) {
        ValidationReport rep = validate(cfg, num);
        if (!rep.pass) {
            const auto& f = rep.flagged.front();
            throw Error(f.reason == "near_singular" ? ErrorCategory::NearSingularMode
                                                    : ErrorCategory::WoodAnomaly,
                        "validation failed at mode (" + std::to_string(f.p) + "," +
                            std::to_string(f.q) + "): " + f.reason);
        }
        disc_ = Discretization(LateralGrid(num.Nx, num.Ny, cfg.dx, cfg.dy, cfg.alpha(), cfg.beta()),
                               VerticalGrid(num.Nz, cfg.h));
        table_ = ModeTable(cfg, disc_.lat);
        quad_ = std::make_unique<GreensQuadrature>(disc_.vert);

        env_nodal_ = sample_envelope(envelope, disc_);
        check_permittivity_positive(env_nodal_, cfg.eps_bar, cfg.delta);
        env_modal_ = spectral::to_modal(env_nodal_);
        k0sq_ebar_ = cfg.k0 * cfg.k0 * cfg.eps_bar;
    }

    const Discretization& disc() const { return disc_; }
    const ModeTable& table() const { return table_; }
    const ScalarField& envelope_nodal() const { return env_nodal_; }
    const ScalarField& envelope_modal() const { return env_modal_; }
    const ScatteringConfig& config() const { return cfg_; }
    const NumericalParams& numerics() const { return num_; }
    SolverBackend backend() const { return backend_; }

    /// E_0: zero volumetric forcing, Q = phi at Gamma_h, R = 0.
    VectorField order_zero() const {
        VectorField zero(num_.Nx, num_.Ny, num_.Nz);
        Trace Q = incident_forcing(cfg_, disc_.lat);
        Trace R(num_.Nx, num_.Ny);
        return solve_all_modes(zero, Q, R);
    }

    /// Volumetric forcing of the order-l problem. Expanding
    /// curl curl E - eps_bar (1 - delta E) k0^2 E = 0 in powers of delta
    /// gives F_l = -eps_bar k0^2 E E_{l-1} on the right-hand side.
    VectorField volumetric_forcing(const VectorField& prev) const {
        VectorField F = spectral::lateral_product(env_modal_, prev, num_.dealias);
        F *= -k0sq_ebar_;
        return F;
    }

    /// E_l from E_{l-1}: volumetric forcing only, homogeneous boundary data.
    VectorField next_order(const HopeSeries& series) const {
        if (series.orders.empty())
            throw Error(ErrorCategory::Config, "next_order requires at least order zero");
        VectorField F = volumetric_forcing(series.orders.back());
        Trace Q(num_.Nx, num_.Ny), R(num_.Nx, num_.Ny);
        return solve_all_modes(F, Q, R);
    }

    void append(HopeSeries& series, VectorField&& field) const {
        double n = spectral::sobolev_norm(field, 2, disc_);
        if (!std::isfinite(n) || n > 1e120)
            throw Error(ErrorCategory::DivergentSeries,
                        "order " + std::to_string(series.orders.size()) +
                            " norm diverged: " + std::to_string(n));
        series.traces_h.push_back(trace_at(field, 0));
        series.traces_mh.push_back(trace_at(field, num_.Nz - 1));
        series.h2_norms.push_back(n);
        series.orders.push_back(std::move(field));
    }

    /// All orders 0..L.
    HopeSeries run() const {
        HopeSeries series;
        append(series, order_zero());
        for (int l = 1; l <= num_.L; ++l) append(series, next_order(series));
        return series;
    }

    /// Horner accumulation of E^{L_use} = sum_{l<=L_use} E_l delta^l.
    VectorField taylor_sum(const HopeSeries& series, double delta, int L_use) const {
        if (L_use < 0 || L_use >= int(series.orders.size()))
            throw Error(ErrorCategory::Config, "taylor_sum: L_use out of range");
        VectorField sum = series.orders[L_use];
        for (int l = L_use - 1; l >= 0; --l) {
            sum *= delta;
            sum += series.orders[l];
        }
        return sum;
    }

    /// Residuals of the summed field in the full variable-coefficient system.
    /// Interior: curl curl E - eps_v k0^2 E over interior nodes, relative to
    /// the larger of the two term magnitudes; boundary: UPC/DPC misfits
    /// relative to the forcing scale.
    ResidualReport residual_check(const VectorField& E, double delta) const {
        ResidualReport rep;
        const int nz = num_.Nz;

        // eps_v = eps_bar (1 - delta E) in modal form; the constant part lives
        // in the (0,0) mode.
        ScalarField epsv_modal = env_modal_;
        for (auto& v : epsv_modal.raw()) v *= -cfg_.eps_bar * delta;
        for (int k = 0; k < nz; ++k) epsv_modal.at(0, 0, k) += cfg_.eps_bar;

        VectorField cc = spectral::curl_curl(E, disc_);
        VectorField epsvE = spectral::lateral_product(epsv_modal, E, num_.dealias);
        double num_max = 0.0, den_a = 0.0, den_b = 0.0;
        const double k0sq = cfg_.k0 * cfg_.k0;
        for (int m = 0; m < 3; ++m)
            for (int i = 0; i < num_.Nx; ++i)
                for (int j = 0; j < num_.Ny; ++j)
                    for (int k = 1; k < nz - 1; ++k) {
                        cdouble r = cc[m].at(i, j, k) - k0sq * epsvE[m].at(i, j, k);
                        num_max = std::max(num_max, std::abs(r));
                        den_a = std::max(den_a, std::abs(cc[m].at(i, j, k)));
                        den_b = std::max(den_b, std::abs(k0sq * epsvE[m].at(i, j, k)));
                    }
        rep.interior = num_max / std::max({den_a, den_b, 1e-300});

        // Boundary misfits of the summed field.
        Trace th = trace_at(E, 0), tmh = trace_at(E, nz - 1);
        Trace dth = dz_trace_at(E, 0), dtmh = dz_trace_at(E, nz - 1);
        Trace Tu = apply_T(th, Medium::Upper, table_);
        Trace Tw = apply_T(tmh, Medium::Lower, table_);
        Trace phi = incident_forcing(cfg_, disc_.lat);
        double phimag = 2.0 * cfg_.gamma_u();
        double upc = 0.0, dpc = 0.0;
        for (int m = 0; m < 3; ++m)
            for (int i = 0; i < num_.Nx; ++i)
                for (int j = 0; j < num_.Ny; ++j) {
                    cdouble ru = -dth.at(m, i, j) - Tu.at(m, i, j) - phi.at(m, i, j);
                    cdouble rw = dtmh.at(m, i, j) - Tw.at(m, i, j);
                    upc = std::max(upc, std::abs(ru));
                    dpc = std::max(dpc, std::abs(rw));
                }
        rep.upc = upc / phimag;
        rep.dpc = dpc / phimag;
        return rep;
    }

    /// Max residual of div E_l + div F_l / (k0^2 eps_bar) over interior
    /// nodes, normalized by k0 * max|E_l| (F_0 = 0, so l = 0 checks the
    /// solenoidality of the order-zero field).
    double divergence_invariant(const HopeSeries& series, int ell) const {
        if (ell < 0 || ell >= int(series.orders.size()))
            throw Error(ErrorCategory::Config, "divergence_invariant: order out of range");
        ScalarField divE = spectral::divergence(series.orders[ell], disc_);
        ScalarField total = divE;
        if (ell > 0) {
            VectorField F = volumetric_forcing(series.orders[ell - 1]);
            ScalarField divF = spectral::divergence(F, disc_);
            auto& t = total.raw();
            const auto& d = divF.raw();
            for (size_t n = 0; n < t.size(); ++n) t[n] += d[n] / k0sq_ebar_;
        }
        double worst = 0.0;
        for (int i = 0; i < num_.Nx; ++i)
            for (int j = 0; j < num_.Ny; ++j)
                for (int k = 1; k < num_.Nz - 1; ++k)
                    worst = std::max(worst, std::abs(total.at(i, j, k)));
        double scale = cfg_.k0 * std::max(series.orders[ell].max_abs(), 1e-300);
        return worst / scale;
    }

    Trace trace_at(const VectorField& f, int k) const {
        Trace t(f.Nx(), f.Ny());
        for (int m = 0; m < 3; ++m)
            for (int i = 0; i < f.Nx(); ++i)
                for (int j = 0; j < f.Ny(); ++j) t.at(m, i, j) = f[m].at(i, j, k);
        return t;
    }

    Trace dz_trace_at(const VectorField& f, int row) const {
        const int nz = num_.Nz;
        Trace t(f.Nx(), f.Ny());
        const Eigen::MatrixXd& D = disc_.vert.D1();
        for (int m = 0; m < 3; ++m)
            for (int i = 0; i < f.Nx(); ++i)
                for (int j = 0; j < f.Ny(); ++j) {
                    const cdouble* prof = f[m].profile(i, j);
                    cdouble acc{};
                    for (int k = 0; k < nz; ++k) acc += D(row, k) * prof[k];
                    t.at(m, i, j) = acc;
                }
        return t;
    }

private:
    VectorField solve_all_modes(const VectorField& F, const Trace& Q, const Trace& R) const {
        VectorField out(num_.Nx, num_.Ny, num_.Nz);
        const int nmodes = num_.Nx * num_.Ny;
        auto solve_range = [&](int lo, int hi) {
            for (int idx = lo; idx < hi; ++idx) {
                int i = idx / num_.Ny, j = idx % num_.Ny;
                ModalRHS rhs = assemble_modal_rhs(F, Q, R, i, j, disc_, k0sq_ebar_);
                ModalSolution sol =
                    backend_ == SolverBackend::Collocation
                        ? solve_mode_collocation(rhs, table_.at(i, j), disc_.vert, num_.wood_tol)
                        : solve_mode_greens(rhs, table_.at(i, j), *quad_, num_.wood_tol);
                for (int k = 0; k < num_.Nz; ++k) {
                    out[0].at(i, j, k) = sol.vx(k);
                    out[1].at(i, j, k) = sol.vy(k);
                    out[2].at(i, j, k) = sol.vz(k);
                }
            }
        };
        if (threads_ <= 1) {
            solve_range(0, nmodes);
        } else {
            std::vector<std::thread> pool;
            int chunk = (nmodes + threads_ - 1) / threads_;
            std::exception_ptr first_error;
            std::mutex err_mutex;
            for (int t = 0; t < threads_; ++t) {
                int lo = t * chunk, hi = std::min(nmodes, lo + chunk);
                if (lo >= hi) break;
                pool.emplace_back([&, lo, hi] {
                    try {
                        solve_range(lo, hi);
                    } catch (...) {
                        std::lock_guard<std::mutex> lk(err_mutex);
                        if (!first_error) first_error = std::current_exception();
                    }
                });
            }
            for (auto& th : pool) th.join();
            if (first_error) std::rethrow_exception(first_error);
        }
        return out;
    }

    ScatteringConfig cfg_;
    NumericalParams num_;
    SolverBackend backend_;
    int threads_;
    Discretization disc_;
    ModeTable table_;
    std::unique_ptr<GreensQuadrature> quad_;
    ScalarField env_nodal_, env_modal_;
    double k0sq_ebar_ = 0.0;
};

} // namespace hope
