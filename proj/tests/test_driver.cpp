#include <catch2/catch_amalgamated.hpp>

#include "hope/diagnostics.hpp"
#include "hope/driver.hpp"
#include "hope/transfer_matrix.hpp"
#include "support/test_support.hpp"

using namespace hope;

namespace {

ScatteringConfig matched_config() {
    ScatteringConfig cfg;
    cfg.k0 = 2.0 * pi;
    cfg.eps_u = cfg.eps_w = cfg.eps_bar = 1.0;
    cfg.dx = cfg.dy = 2.0 / 3.0;
    cfg.h = 1.0;
    cfg.theta = cfg.phi = 0.0;
    cfg.delta = 0.05;
    cfg.A = cfg.default_polarization();
    return cfg;
}

NumericalParams small_params(int n = 8, int nz = 24, int L = 4) {
    NumericalParams num;
    num.Nx = num.Ny = n;
    num.Nz = nz;
    num.L = L;
    return num;
}

// Band-limited-in-x, polynomial-in-z envelope: exactly representable on any
// grid, so cross-backend comparisons are not polluted by truncation error.
EnvelopeSpec cosine_bump_envelope(const Discretization& disc) {
    EnvelopeSpec spec;
    spec.kind = EnvelopeSpec::Kind::Tabulated;
    spec.tNx = disc.lat.Nx;
    spec.tNy = disc.lat.Ny;
    spec.tNz = disc.vert.size();
    spec.source = "cosine-bump test envelope";
    spec.samples.resize(size_t(spec.tNx) * spec.tNy * spec.tNz);
    for (int i = 0; i < spec.tNx; ++i)
        for (int j = 0; j < spec.tNy; ++j)
            for (int k = 0; k < spec.tNz; ++k) {
                double x = disc.lat.node_x(i);
                double zr = disc.vert.node(k) / disc.vert.h();
                spec.samples[(size_t(i) * spec.tNy + j) * spec.tNz + k] =
                    0.5 * (1.0 + std::cos(2.0 * pi * x / disc.lat.dx)) * (1.0 - zr * zr);
            }
    return spec;
}

} // namespace

TEST_CASE("order zero is the incident plane wave for matched background") {
    ScatteringConfig cfg = matched_config();
    NumericalParams num = small_params();
    HopeDriver driver(cfg, num, EnvelopeSpec::constant(1.0));
    VectorField E0 = driver.order_zero();

    // Only the (0,0) mode is excited, with profile A exp(-i gamma z).
    double off_mode = 0.0;
    for (int m = 0; m < 3; ++m)
        for (int i = 0; i < num.Nx; ++i)
            for (int j = 0; j < num.Ny; ++j) {
                if (i == 0 && j == 0) continue;
                for (int k = 0; k < num.Nz; ++k)
                    off_mode = std::max(off_mode, std::abs(E0[m].at(i, j, k)));
            }
    REQUIRE(off_mode < 1e-12);

    cdouble gbar = driver.table().at(0, 0).gamma_eps;
    double worst = 0.0;
    for (int k = 0; k < num.Nz; ++k) {
        cdouble phase = std::exp(-iu * gbar * driver.disc().vert.node(k));
        worst = std::max(worst, (E0.at(0, 0, k) - phase * cfg.A).norm());
    }
    REQUIRE(worst < 1e-9);

    // Homogeneous equation residual on interior nodes.
    VectorField cc = spectral::curl_curl(E0, driver.disc());
    double resid = 0.0;
    double k0sq = cfg.k0 * cfg.k0;
    for (int m = 0; m < 3; ++m)
        for (int k = 1; k < num.Nz - 1; ++k)
            resid = std::max(resid,
                             std::abs(cc[m].at(0, 0, k) - k0sq * E0[m].at(0, 0, k)) / k0sq);
    REQUIRE(resid < 1e-9);

    // UPC / DPC residuals of the order-zero field.
    ResidualReport rep = driver.residual_check(E0, 0.0);
    REQUIRE(rep.upc < 1e-9);
    REQUIRE(rep.dpc < 1e-9);
    REQUIRE(rep.interior < 1e-9);
}

TEST_CASE("zero envelope terminates the series") {
    ScatteringConfig cfg = matched_config();
    NumericalParams num = small_params(4, 16, 3);
    HopeDriver driver(cfg, num, EnvelopeSpec::constant(0.0));
    HopeSeries series = driver.run();
    REQUIRE(series.orders.size() == 4);
    for (int l = 1; l <= 3; ++l)
        REQUIRE(series.orders[l].max_abs() < 1e-12 * series.orders[0].max_abs());
}

TEST_CASE("taylor_sum basics") {
    ScatteringConfig cfg = matched_config();
    NumericalParams num = small_params(4, 20, 3);
    HopeDriver driver(cfg, num, EnvelopeSpec::constant(1.0));
    HopeSeries series = driver.run();

    SECTION("delta = 0 returns E_0 exactly") {
        VectorField sum = driver.taylor_sum(series, 0.0, 3);
        REQUIRE(test_support::rel_diff(sum, series.orders[0]) < 1e-15);
    }

    SECTION("L_use = 0 returns E_0 regardless of delta") {
        VectorField sum = driver.taylor_sum(series, 0.7, 0);
        REQUIRE(test_support::rel_diff(sum, series.orders[0]) < 1e-15);
    }

    SECTION("successive partial sums differ by the top term") {
        double delta = 0.05;
        VectorField s3 = driver.taylor_sum(series, delta, 3);
        VectorField s2 = driver.taylor_sum(series, delta, 2);
        double diff = 0.0;
        for (int m = 0; m < 3; ++m)
            for (size_t n = 0; n < s3[m].raw().size(); ++n)
                diff = std::max(diff, std::abs(s3[m].raw()[n] - s2[m].raw()[n] -
                                               std::pow(delta, 3) *
                                                   series.orders[3][m].raw()[n]));
        REQUIRE(diff < 1e-12);
    }
}

TEST_CASE("constant envelope converges to the three-layer oracle") {
    ScatteringConfig cfg = matched_config();
    NumericalParams num = small_params(8, 32, 10);
    HopeDriver driver(cfg, num, EnvelopeSpec::constant(1.0));
    HopeSeries series = driver.run();
    VectorField sum = driver.taylor_sum(series, cfg.delta, num.L);

    auto [refl, trans] = rayleigh_amplitudes(driver.trace_at(sum, 0),
                                             driver.trace_at(sum, num.Nz - 1), cfg);
    ThreeLayerSolution oracle = solve_three_layer(cfg, cfg.eps_bar * (1.0 - cfg.delta));

    REQUIRE((refl.vec(0, 0) - oracle.c00).norm() < 1e-8);
    REQUIRE((trans.vec(0, 0) - oracle.w00).norm() < 1e-8);

    // Off-axis modes are never excited by a constant envelope.
    double off = 0.0;
    for (int i = 0; i < num.Nx; ++i)
        for (int j = 0; j < num.Ny; ++j)
            if (i || j) off = std::max(off, refl.vec(i, j).norm());
    REQUIRE(off < 1e-12);

    // Error against the oracle decreases geometrically in L.
    double prev = 1e300;
    for (int L : {2, 4, 6, 8}) {
        VectorField s = driver.taylor_sum(series, cfg.delta, L);
        auto [r, t] = rayleigh_amplitudes(driver.trace_at(s, 0),
                                          driver.trace_at(s, num.Nz - 1), cfg);
        double err = (r.vec(0, 0) - oracle.c00).norm() + (t.vec(0, 0) - oracle.w00).norm();
        REQUIRE(err < 0.5 * prev);
        prev = err;
    }
}

TEST_CASE("residual of the summed field and the oracle field") {
    ScatteringConfig cfg = matched_config();
    NumericalParams num = small_params(4, 32, 8);
    HopeDriver driver(cfg, num, EnvelopeSpec::constant(1.0));
    HopeSeries series = driver.run();

    SECTION("delta = 0 gives an order-zero-exact residual") {
        VectorField sum = driver.taylor_sum(series, 0.0, num.L);
        ResidualReport rep = driver.residual_check(sum, 0.0);
        REQUIRE(rep.interior < 1e-9);
        REQUIRE(rep.upc < 1e-9);
        REQUIRE(rep.dpc < 1e-9);
    }

    SECTION("the oracle field itself passes the residual evaluator") {
        // Assemble the exact three-layer slab field on the grid and feed it
        // to the evaluator; sanity of the evaluator, not of the series.
        double eps_slab = cfg.eps_bar * (1.0 - cfg.delta);
        cdouble g2 = gamma_branch(eps_slab, cfg.k0, 0.0, 0.0);
        cdouble gu = gamma_branch(cfg.eps_u, cfg.k0, 0.0, 0.0);
        cdouble gw = gamma_branch(cfg.eps_w, cfg.k0, 0.0, 0.0);
        ThreeLayerSolution oracle = solve_three_layer(cfg, eps_slab);
        // slab field: m(z) = t [cos(g2 (z+h)) - i (gw/g2) sin(g2 (z+h))]
        VectorField E(num.Nx, num.Ny, num.Nz);
        for (int k = 0; k < num.Nz; ++k) {
            double z = driver.disc().vert.node(k);
            cdouble c = std::cos(g2 * (z + cfg.h)), s = std::sin(g2 * (z + cfg.h));
            cdouble shape = c - iu * (gw / g2) * s;
            E[0].at(0, 0, k) = oracle.w00.x * shape;
            E[1].at(0, 0, k) = oracle.w00.y * shape;
        }
        ResidualReport rep = driver.residual_check(E, cfg.delta);
        REQUIRE(rep.interior < 1e-9);
        REQUIRE(rep.upc < 1e-9);
        REQUIRE(rep.dpc < 1e-9);
        (void)gu;
    }

    SECTION("residual decays with L at fixed delta") {
        double prev = 1e300;
        for (int L : {1, 3, 5, 7}) {
            VectorField s = driver.taylor_sum(series, cfg.delta, L);
            double r = driver.residual_check(s, cfg.delta).interior;
            REQUIRE(r < prev);
            prev = r;
        }
    }
}

TEST_CASE("divergence invariant per order") {
    ScatteringConfig cfg = matched_config();

    SECTION("orders 0 and 1 with a constant envelope are solenoidal") {
        NumericalParams num = small_params(4, 24, 2);
        HopeDriver driver(cfg, num, EnvelopeSpec::constant(1.0));
        HopeSeries series = driver.run();
        REQUIRE(driver.divergence_invariant(series, 0) < 1e-10);
        REQUIRE(driver.divergence_invariant(series, 1) < 1e-10);
    }

    SECTION("analytic envelope keeps the invariant at spectral accuracy") {
        ScatteringConfig tcfg = cfg;
        tcfg.k0 = 2.0;
        tcfg.dx = tcfg.dy = 2.0;
        tcfg.delta = 0.1;
        NumericalParams num;
        num.Nx = num.Ny = 16;
        num.Nz = 32;
        num.L = 4;
        HopeDriver driver(tcfg, num, EnvelopeSpec::tanh_slab_gap(0.25, 0.1, 50.0));
        HopeSeries series = driver.run();
        for (int l = 0; l <= 4; ++l) {
            double r = driver.divergence_invariant(series, l);
            INFO("order " << l << " divergence residual " << r);
            REQUIRE(r < 1e-7);
        }
    }
}

TEST_CASE("linearity in the incident amplitude") {
    ScatteringConfig cfg = matched_config();
    NumericalParams num = small_params(4, 20, 2);
    HopeDriver a(cfg, num, EnvelopeSpec::constant(1.0));
    HopeSeries sa = a.run();

    ScatteringConfig scaled = cfg;
    cdouble c(0.6, -0.8); // unit modulus keeps |A| = 1
    scaled.A = c * cfg.A;
    HopeDriver b(scaled, num, EnvelopeSpec::constant(1.0));
    HopeSeries sb = b.run();

    for (size_t l = 0; l < sa.orders.size(); ++l) {
        VectorField want = sa.orders[l];
        want *= c;
        REQUIRE(test_support::rel_diff(sb.orders[l], want) < 1e-12);
    }
}

TEST_CASE("quasiperiodicity of computed orders at shifted points") {
    ScatteringConfig cfg = matched_config();
    cfg.theta = 0.35;
    cfg.phi = 0.6;
    cfg.k0 = 2.0;
    cfg.dx = 1.1;
    cfg.dy = 0.9;
    cfg.A = cfg.default_polarization();
    NumericalParams num = small_params(8, 24, 2);
    HopeDriver driver(cfg, num, EnvelopeSpec::tanh_slab_gap(0.25, 0.1, 20.0));
    HopeSeries series = driver.run();

    test_rng::Rng rng(5);
    cdouble bloch =
        std::polar(1.0, cfg.alpha() * cfg.dx + cfg.beta() * cfg.dy);
    for (const auto& order : series.orders) {
        for (int trial = 0; trial < 4; ++trial) {
            double x = rng.uniform(0.0, cfg.dx), y = rng.uniform(0.0, cfg.dy);
            double z = rng.uniform(-cfg.h, cfg.h);
            Vec3c base = test_support::eval_field_at(order, driver.disc(), x, y, z);
            Vec3c shifted =
                test_support::eval_field_at(order, driver.disc(), x + cfg.dx, y + cfg.dy, z);
            REQUIRE((shifted - bloch * base).norm() < 1e-10 * std::max(1.0, base.norm()));
        }
    }
}

TEST_CASE("parity symmetry for even envelopes at normal incidence") {
    // x- and y-even envelope, real A: the scattered amplitudes obey
    // u(p,q) = u(-p,-q) (the lossless-symmetric reciprocity smoke check).
    ScatteringConfig cfg = matched_config();
    cfg.k0 = 2.0;
    cfg.dx = cfg.dy = 2.0;
    cfg.delta = 0.2;
    NumericalParams num = small_params(8, 24, 3);
    Discretization disc(LateralGrid(num.Nx, num.Ny, cfg.dx, cfg.dy, 0.0, 0.0),
                        VerticalGrid(num.Nz, cfg.h));
    HopeDriver driver(cfg, num, cosine_bump_envelope(disc));
    HopeSeries series = driver.run();
    VectorField sum = driver.taylor_sum(series, cfg.delta, num.L);
    auto [refl, trans] = rayleigh_amplitudes(driver.trace_at(sum, 0),
                                             driver.trace_at(sum, num.Nz - 1), cfg);

    double scale = 0.0;
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) scale = std::max(scale, refl.vec(i, j).norm());
    for (int p = -3; p <= 3; ++p)
        for (int q = -3; q <= 3; ++q) {
            Vec3c a = refl.vec(LateralGrid::slot_of(p, 8), LateralGrid::slot_of(q, 8));
            Vec3c b = refl.vec(LateralGrid::slot_of(-p, 8), LateralGrid::slot_of(-q, 8));
            REQUIRE((a - b).norm() < 1e-10 * scale);
        }
}

TEST_CASE("multithreaded runs agree with single-threaded and greens matches collocation") {
    ScatteringConfig cfg = matched_config();
    cfg.k0 = 2.0;
    cfg.dx = cfg.dy = 2.0;
    cfg.delta = 0.1;
    NumericalParams num = small_params(8, 28, 3);
    Discretization disc(LateralGrid(num.Nx, num.Ny, cfg.dx, cfg.dy, 0.0, 0.0),
                        VerticalGrid(num.Nz, cfg.h));
    EnvelopeSpec env = cosine_bump_envelope(disc);

    HopeDriver serial(cfg, num, env, SolverBackend::Collocation, 1);
    HopeDriver parallel(cfg, num, env, SolverBackend::Collocation, 4);
    HopeDriver greens(cfg, num, env, SolverBackend::Greens, 1);

    HopeSeries s1 = serial.run(), s4 = parallel.run(), sg = greens.run();
    for (size_t l = 0; l < s1.orders.size(); ++l) {
        REQUIRE(test_support::rel_diff(s4.orders[l], s1.orders[l]) < 1e-12);
        REQUIRE(test_support::rel_diff(sg.orders[l], s1.orders[l]) < 1e-7);
    }
}
