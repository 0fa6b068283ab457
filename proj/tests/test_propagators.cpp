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

double rel_sup_diff(const ComplexField& a, const ComplexField& b) {
    ComplexField d = a;
    kernels::axpy(d.values, cplx(-1.0, 0.0), b.values);
    return kernels::max_abs(d.values) / kernels::max_abs(b.values);
}

ComplexField smooth_test_field(const GridSpec& grid, double amplitude) {
    GaussianDatum g;
    g.width = 1.5;
    g.amplitude = cplx(amplitude, 0.3 * amplitude);
    return sample_gaussian(g, grid);
}

}  // namespace

TEST_CASE("linear propagation: identity at t = 0 and plane-wave eigenfunctions") {
    const GridSpec grid = make_grid(2, 8.0, 32);
    const ComplexField f = smooth_test_field(grid, 1.0);
    CHECK(rel_l2_diff(linear_propagate(f, 0.0), f) < 1e-14);

    const FrequencyLattice lat(grid);
    const double kx = lat.wavenumber(3), ky = lat.wavenumber(30);
    const double k2 = kx * kx + ky * ky;
    const ComplexField wave = sample_function(grid, [&](const std::array<double, 3>& x) {
        return std::exp(cplx(0.0, kx * x[0] + ky * x[1]));
    });
    const double t = 0.83;
    const ComplexField evolved = linear_propagate(wave, t);
    const cplx expected_phase = std::exp(cplx(0.0, -k2 * t));
    double worst = 0.0;
    for (std::size_t i = 0; i < wave.size(); ++i)
        worst = std::max(worst,
                         std::abs(evolved.values[i] - expected_phase * wave.values[i]));
    CHECK(worst < 1e-12);
}

TEST_CASE("linear propagation: mass isometry and the group property") {
    const GridSpec grid = make_grid(2, 8.0, 32);
    const ComplexField f = smooth_test_field(grid, 0.7);
    const double m0 = lp_norm(f, 2.0);

    const ComplexField once = linear_propagate(f, 1.7);
    CHECK(std::abs(lp_norm(once, 2.0) - m0) < 1e-12 * m0);

    const ComplexField two_hops = linear_propagate(linear_propagate(f, 0.6), 1.1);
    CHECK(rel_l2_diff(two_hops, once) < 1e-11);

    // negative time inverts
    const ComplexField back = linear_propagate(once, -1.7);
    CHECK(rel_l2_diff(back, f) < 1e-11);
}

TEST_CASE("linear propagation matches the closed-form Gaussian oracle") {
    const GridSpec grid = make_grid(2, 36.0, 256);
    GaussianDatum g;
    g.width = 1.2;
    g.amplitude = cplx(1.0, 0.0);
    const ComplexField u0 = sample_gaussian(g, grid);
    // the recorded window guards ~1%-level sup diagnostics; the 1e-8
    // oracle crosscheck is limited by the box-edge value of the spreading
    // Gaussian (the nearest image contributes equally there), which stays
    // below 1e-9 only until t ~ 3.3 on this grid
    CHECK(validity_window(u0) > 3.3);
    for (double t : {0.5, 1.5, 3.0}) {
        const ComplexField numeric = linear_propagate(u0, t);
        const ComplexField oracle = gaussian_free_evolution(g, t, grid);
        CHECK(rel_sup_diff(numeric, oracle) < 1e-8);
    }
}

TEST_CASE("nonlinear phase step: identity at dt = 0, exact constant-field flow") {
    const GridSpec grid = make_grid(1, 4.0, 64);
    EquationSpec eq;
    eq.dimension = 1;
    eq.power_q = 5;
    const ComplexField f = smooth_test_field(grid, 0.9);

    const ComplexField same = nonlinear_phase_step(f, 0.0, eq);
    for (std::size_t i = 0; i < f.size(); ++i) REQUIRE(same.values[i] == f.values[i]);

    const cplx c(0.4, -0.2);
    ComplexField constant(grid, c);
    const double dt = 0.3;
    const ComplexField stepped = nonlinear_phase_step(constant, dt, eq);
    const cplx expected = c * std::exp(cplx(0.0, -std::pow(std::abs(c), 4.0) * dt));
    for (const auto& v : stepped.values) REQUIRE(std::abs(v - expected) < 1e-15);

    // modulus preserved pointwise for arbitrary fields
    const ComplexField rotated = nonlinear_phase_step(f, 0.17, eq);
    for (std::size_t i = 0; i < f.size(); ++i)
        REQUIRE(std::abs(std::abs(rotated.values[i]) - std::abs(f.values[i])) < 1e-15);
}

TEST_CASE("strang step: zero field, second-order self convergence, linear limit") {
    const GridSpec grid = make_grid(1, 12.0, 128);
    EquationSpec eq;
    eq.dimension = 1;
    eq.power_q = 3;

    ComplexField zero(grid);
    const ComplexField z2 = strang_step(zero, 0.01, eq);
    CHECK(lp_norm(z2, 2.0) == 0.0);

    // Richardson: err(dt) / err(dt/2) ~ 2^2 for a second-order method
    const ComplexField u = smooth_test_field(grid, 1.4);
    const double dt = 0.02;
    auto advance = [&](const ComplexField& f, double step, int reps) {
        ComplexField cur = f;
        for (int i = 0; i < reps; ++i) cur = strang_step(cur, step, eq);
        return cur;
    };
    const ComplexField reference = advance(u, dt / 64.0, 64);
    const double err_full = rel_l2_diff(advance(u, dt, 1), reference);
    const double err_half = rel_l2_diff(advance(u, dt / 2.0, 2), reference);
    const double ratio = err_full / err_half;
    CHECK(ratio > 3.5);
    CHECK(ratio < 4.5);

    // tiny data: the step reduces to the free propagator
    ComplexField small = u;
    kernels::scale(small.values, cplx(1e-6, 0.0));
    const ComplexField s1 = strang_step(small, 0.01, eq);
    const ComplexField s2 = linear_propagate(small, 0.01);
    CHECK(rel_l2_diff(s1, s2) < 1e-10);

    // mass conserved to roundoff
    CHECK(std::abs(lp_norm(strang_step(u, 0.05, eq), 2.0) - lp_norm(u, 2.0)) <
          1e-13 * lp_norm(u, 2.0));
}

TEST_CASE("evolve: linear runs track the exact propagator") {
    const GridSpec grid = make_grid(1, 20.0, 256);
    EquationSpec eq;
    eq.dimension = 1;
    eq.linear = true;
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 0.5;
    cfg.snapshot_cadence = 100;
    cfg.dealias = false;

    const ComplexField u0 = smooth_test_field(grid, 1.0);
    const TrajectoryHistory hist = evolve(u0, eq, cfg);
    REQUIRE(hist.size() == 6);  // t = 0, 0.1, ..., 0.5
    CHECK(hist.time_at(0) == 0.0);
    for (std::size_t i = 1; i < hist.size(); ++i) {
        const ComplexField exact = linear_propagate(u0, hist.time_at(i));
        REQUIRE(rel_l2_diff(hist.field_at(i), exact) < 1e-10);
    }
}

TEST_CASE("evolve: mass trace flat to 1e-10 and energy drift small") {
    const GridSpec grid = make_grid(1, 20.0, 256);
    EquationSpec eq;
    eq.dimension = 1;
    eq.power_q = 5;
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 1.0;
    cfg.snapshot_cadence = 50;
    cfg.dealias = true;

    const ComplexField u0 = smooth_test_field(grid, 0.5);
    std::vector<double> masses, energies;
    std::vector<StepObserver> observers;
    observers.push_back([&](double, const ComplexField& u) {
        const SpectralField uh = forward_transform(u);
        masses.push_back(spectral_l2_norm(uh));
        energies.push_back(energy(u, uh, eq));
    });
    evolve(u0, eq, cfg, observers);
    REQUIRE(masses.size() == 1000);

    const double m0 = lp_norm(u0, 2.0);
    const double e0 = energy(u0, forward_transform(u0), eq);
    for (double m : masses) REQUIRE(std::abs(m - m0) < 1e-10 * m0);
    for (double e : energies) REQUIRE(std::abs(e - e0) < 1e-6 * std::abs(e0));
}

TEST_CASE("time reversal: forward then backward recovers the datum") {
    const GridSpec grid = make_grid(1, 12.0, 128);
    EquationSpec eq;
    eq.dimension = 1;
    eq.power_q = 3;
    const ComplexField u0 = smooth_test_field(grid, 1.0);
    const double dt = 1e-3;
    ComplexField cur = u0;
    for (int i = 0; i < 500; ++i) cur = strang_step(cur, dt, eq);
    for (int i = 0; i < 500; ++i) cur = strang_step(cur, -dt, eq);
    CHECK(rel_l2_diff(cur, u0) < 1e-6);
}

TEST_CASE("evolve aborts on blowup with the step index preserved") {
    const GridSpec grid = make_grid(1, 2.0, 32);
    EquationSpec eq;
    eq.dimension = 1;
    eq.power_q = 5;
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 0.1;
    cfg.snapshot_cadence = 10;
    ComplexField u0(grid, cplx(std::numeric_limits<double>::max() / 4.0, 0.0));
    CHECK_THROWS_AS(evolve(u0, eq, cfg), SolverBlowup);
}

TEST_CASE("solver config validation") {
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 1.0;
    cfg.snapshot_cadence = 10;
    CHECK(cfg.steps() == 1000);
    cfg.dt = 3e-4;  // does not divide 1.0
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.dt = -1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
