#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nlsdecay/kernels.hpp"
#include "nlsdecay/norms.hpp"
#include "nlsdecay/oracles.hpp"
#include "nlsdecay/propagators.hpp"

using namespace nlsdecay;

namespace {

double rel_l2_diff(const ComplexField& a, const ComplexField& b) {
    ComplexField d = a;
    kernels::axpy(d.values, cplx(-1.0, 0.0), b.values);
    return lp_norm(d, 2.0) / lp_norm(b, 2.0);
}

}  // namespace

TEST_CASE("closed-form Gaussian evolution: t = 0 sampling and unitarity") {
    const GridSpec grid = make_grid(2, 24.0, 128);
    GaussianDatum g;
    g.width = 1.5;
    g.amplitude = cplx(0.8, -0.2);
    g.center = {0.5, -0.5, 0.0};

    const ComplexField sampled = sample_gaussian(g, grid);
    const ComplexField evolved0 = gaussian_free_evolution(g, 0.0, grid);
    double worst = 0.0;
    for (std::size_t i = 0; i < sampled.size(); ++i)
        worst = std::max(worst, std::abs(sampled.values[i] - evolved0.values[i]));
    CHECK(worst < 1e-14);

    const double m0 = lp_norm(sampled, 2.0);
    for (double t : {0.5, 1.0, 2.0}) {
        const ComplexField ut = gaussian_free_evolution(g, t, grid);
        REQUIRE(std::abs(lp_norm(ut, 2.0) - m0) < 1e-10 * m0);
    }
}

TEST_CASE("closed-form sup norm approaches the dispersive envelope") {
    GaussianDatum g;
    g.width = 1.3;
    g.amplitude = cplx(0.5, 0.0);
    const int d = 3;
    const double l1 = std::abs(g.amplitude) *
                      std::pow(std::sqrt(2.0 * M_PI) * g.width, 3.0);
    const double t = 20.0 * g.width * g.width;
    const double ratio = gaussian_free_sup(g, t, d) * std::pow(t, 1.5) /
                         (l1 * std::pow(4.0 * M_PI, -1.5));
    CHECK(ratio == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("dispersive ratio: translation invariance and the Gaussian limit") {
    const GridSpec grid = make_grid(2, 48.0, 256);
    GaussianDatum centered;
    centered.width = 1.0;
    centered.amplitude = cplx(1.0, 0.0);
    GaussianDatum shifted = centered;
    shifted.center = {3.0, -4.5, 0.0};  // lattice-aligned shift (h = 0.375)

    const ComplexField u_c = sample_gaussian(centered, grid);
    const ComplexField u_s = sample_gaussian(shifted, grid);
    const double t = 6.0;
    CHECK(std::abs(dispersive_ratio(u_c, t, 2) - dispersive_ratio(u_s, t, 2)) < 1e-10);

    // large-time plateau at (4 pi)^{-1} in dimension 2
    const double plateau = dispersive_ratio(u_c, 10.0, 2);
    CHECK(plateau == doctest::Approx(dispersive_ratio_limit(2)).epsilon(0.02));

    CHECK(dispersive_ratio_limit(3) ==
          doctest::Approx(std::pow(4.0 * M_PI, -1.5)).epsilon(1e-15));

    ComplexField zero(grid);
    CHECK_THROWS_AS(dispersive_ratio(zero, 1.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(dispersive_ratio(u_c, 0.0, 2), std::invalid_argument);
}

TEST_CASE("pseudo-conformal at t = 1 applies the quadratic phase directly") {
    const GridSpec grid = make_grid(1, 10.0, 128);
    GaussianDatum g;
    g.width = 1.2;
    g.amplitude = cplx(0.7, 0.4);
    ComplexField v = sample_gaussian(g, grid);
    v.time_stamp = 1.0;

    TrajectoryHistory hist;
    hist.equation = EquationSpec{1, 5, true};
    hist.grid = grid;
    hist.initial_datum = v;
    hist.snapshots.emplace_back(1.0, v);
    const HistorySeries series(hist);

    const PseudoConformalResult r = pseudo_conformal(series, 1.0, grid);
    CHECK_FALSE(r.time_interpolated);
    double worst = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double x = grid.point(i)[0];
        const cplx expected =
            std::conj(v.values[i]) * std::exp(cplx(0.0, 0.25 * x * x));
        worst = std::max(worst, std::abs(r.u.values[i] - expected));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("pseudo-conformal mass identity and free-solution residual") {
    const GridSpec grid = make_grid(1, 40.0, 256);
    EquationSpec eq;
    eq.dimension = 1;
    eq.linear = true;
    GaussianDatum g;
    g.width = 2.0;
    g.amplitude = cplx(1.0, 0.0);
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 1.0;
    cfg.snapshot_cadence = 1;
    cfg.dealias = false;
    const TrajectoryHistory hist = evolve(sample_gaussian(g, grid), eq, cfg);
    const HistorySeries series(hist);

    const std::size_t mid = hist.size() / 2;
    const double tau1 = hist.time_at(mid);      // 0.5
    const double tau2 = hist.time_at(mid - 1);  // 0.499
    const double t1 = 1.0 / tau1;
    const double t2 = 1.0 / tau2;

    const PseudoConformalResult r1 = pseudo_conformal(series, t1, grid);
    CHECK_FALSE(r1.time_interpolated);
    const double mass_u = lp_norm(r1.u, 2.0);
    const double mass_v = lp_norm(hist.field_at(mid), 2.0);
    CHECK(std::abs(mass_u - mass_v) < 1e-8 * mass_v);

    const PseudoConformalResult r2 = pseudo_conformal(series, t2, grid);
    const ComplexField propagated = linear_propagate(r1.u, t2 - t1);
    CHECK(rel_l2_diff(r2.u, propagated) < 1e-4);

    // sup-norm bookkeeping: ||u(t)||_inf = t^{-d/2} ||v(1/t)||_inf exactly
    const double sup_u = kernels::max_abs(r1.u.values);
    const double sup_v = kernels::max_abs(hist.field_at(mid).values);
    CHECK(sup_u == doctest::Approx(std::pow(t1, -0.5) * sup_v).epsilon(1e-9));
}

TEST_CASE("pseudo-conformal time interpolation is flagged") {
    const GridSpec grid = make_grid(1, 20.0, 64);
    GaussianDatum g;
    g.width = 2.0;
    g.amplitude = cplx(1.0, 0.0);
    ComplexField v = sample_gaussian(g, grid);

    TrajectoryHistory hist;
    hist.equation = EquationSpec{1, 5, true};
    hist.grid = grid;
    hist.initial_datum = v;
    hist.snapshots.emplace_back(0.4, v);
    hist.snapshots.emplace_back(0.6, v);
    const HistorySeries series(hist);

    const PseudoConformalResult r = pseudo_conformal(series, 2.0, grid);  // 1/t = 0.5
    CHECK(r.time_interpolated);
    CHECK(r.bracket_gap == doctest::Approx(0.2));
}

TEST_CASE("pseudo-conformal rejects bad arguments") {
    const GridSpec grid = make_grid(1, 10.0, 64);
    ComplexField v(grid, cplx(1.0, 0.0));
    TrajectoryHistory hist;
    hist.equation = EquationSpec{1, 5, true};
    hist.grid = grid;
    hist.initial_datum = v;
    hist.snapshots.emplace_back(1.0, v);
    const HistorySeries series(hist);

    CHECK_THROWS_AS(pseudo_conformal(series, -1.0, grid), std::invalid_argument);
    CHECK_THROWS_AS(pseudo_conformal(series, 10.0, grid), std::invalid_argument);
    const GridSpec wide = make_grid(1, 100.0, 64);
    CHECK_THROWS_AS(pseudo_conformal(series, 1.0, wide), std::invalid_argument);
}
