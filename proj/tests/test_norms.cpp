#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nlsdecay/fft.hpp"
#include "nlsdecay/kernels.hpp"
#include "nlsdecay/norms.hpp"

using namespace nlsdecay;

namespace {

ComplexField random_field(const GridSpec& grid, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ComplexField f(grid);
    for (auto& v : f.values) v = cplx(u(rng), u(rng));
    return f;
}

// test-side oracle: fine-grid Simpson quadrature on [0, R]
double simpson_integral(const std::function<double(double)>& f, double a, double b,
                        int n_pairs) {
    const double h = (b - a) / (2.0 * n_pairs);
    double s = f(a) + f(b);
    for (int i = 1; i < 2 * n_pairs; ++i) s += f(a + i * h) * ((i % 2) ? 4.0 : 2.0);
    return s * h / 3.0;
}

}  // namespace

TEST_CASE("lp norms: constants, plane waves, the Gaussian L2 value") {
    const GridSpec g2 = make_grid(2, 3.0, 16);
    const cplx c(0.3, -0.4);  // |c| = 0.5
    ComplexField constant(g2, c);
    const double volume = g2.box_volume();
    for (double p : {1.0, 2.0, 4.0, 7.5}) {
        CHECK(lp_norm(constant, p) ==
              doctest::Approx(0.5 * std::pow(volume, 1.0 / p)).epsilon(1e-12));
    }
    CHECK(lp_norm(constant, std::numeric_limits<double>::infinity()) ==
          doctest::Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(lp_norm(constant, 0.5), std::invalid_argument);

    // ||e^{-|x|^2/2}||_2 = pi^{3/4} in dimension 3
    const GridSpec g3 = make_grid(3, 10.0, 64);
    const ComplexField gauss = sample_function(g3, [](const std::array<double, 3>& x) {
        return cplx(std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2])), 0.0);
    });
    CHECK(lp_norm(gauss, 2.0) == doctest::Approx(std::pow(M_PI, 0.75)).epsilon(1e-8));
}

TEST_CASE("sobolev norm: s = 0 equals L2, single modes exact, monotone in s") {
    const GridSpec g = make_grid(2, 4.0, 32);
    const ComplexField f = random_field(g, 3);
    CHECK(sobolev_norm(f, 0.0) == doctest::Approx(lp_norm(f, 2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(sobolev_norm(f, -1.0), std::invalid_argument);

    const FrequencyLattice lat(g);
    const double kx = lat.wavenumber(5), ky = lat.wavenumber(2);
    const double k2 = kx * kx + ky * ky;
    const ComplexField wave = sample_function(g, [&](const std::array<double, 3>& x) {
        return std::exp(cplx(0.0, kx * x[0] + ky * x[1]));
    });
    for (double s : {1.0, 2.0, 3.0}) {
        const double expected = std::pow(1.0 + k2, 0.5 * s) * lp_norm(wave, 2.0);
        CHECK(sobolev_norm(wave, s) == doctest::Approx(expected).epsilon(1e-12));
    }

    double prev = sobolev_norm(f, 0.0);
    for (double s : {0.5, 1.0, 2.0, 3.0, 4.0}) {
        const double cur = sobolev_norm(f, s);
        CHECK(cur >= prev);
        prev = cur;
    }
}

TEST_CASE("sobolev norm of the Gaussian matches radial quadrature") {
    // || e^{-|x|^2/2} ||_{H^3}^2 = 4 pi * int_0^inf (1+r^2)^3 e^{-r^2} r^2 dr
    const GridSpec g = make_grid(3, 8.0, 32);
    const ComplexField gauss = sample_function(g, [](const std::array<double, 3>& x) {
        return cplx(std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2])), 0.0);
    });
    const double oracle = std::sqrt(4.0 * M_PI * simpson_integral(
        [](double r) {
            const double r2 = r * r;
            return std::pow(1.0 + r2, 3.0) * std::exp(-r2) * r2;
        },
        0.0, 12.0, 4000));
    CHECK(sobolev_norm(gauss, 3.0) == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("gradient_sup: constants, plane waves, embedding against H3") {
    const GridSpec g = make_grid(3, M_PI, 16);
    ComplexField constant(g, cplx(2.0, 1.0));
    CHECK(gradient_sup(constant) < 1e-12);

    const FrequencyLattice lat(g);
    const double kx = lat.wavenumber(3), ky = lat.wavenumber(14), kz = lat.wavenumber(1);
    const ComplexField wave = sample_function(g, [&](const std::array<double, 3>& x) {
        return std::exp(cplx(0.0, kx * x[0] + ky * x[1] + kz * x[2]));
    });
    const double expected = std::sqrt(kx * kx + ky * ky + kz * kz);
    CHECK(gradient_sup(wave) == doctest::Approx(expected).epsilon(1e-10));

    // band-limited random fields: ||grad f||_inf <= ||f||_H3
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        SpectralField F(g);
        for (std::size_t i = 0; i < F.size(); ++i)
            if (lat.k_squared()[i] <= 16.0) F.values[i] = cplx(u(rng), u(rng));
        const ComplexField f = inverse_transform(F);
        REQUIRE(gradient_sup(f) <= 1.0 * sobolev_norm(f, 3.0) + 1e-9);
    }
}

TEST_CASE("Holder consistency of lp norms on random fields") {
    const GridSpec g = make_grid(1, 2.0, 128);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uexp(1.0, 8.0);
    std::uniform_real_distribution<double> utheta(0.05, 0.95);
    for (int trial = 0; trial < 1000; ++trial) {
        const ComplexField f = random_field(g, 5000 + trial);
        const double p = uexp(rng), q = uexp(rng), th = utheta(rng);
        const double r = 1.0 / (th / p + (1.0 - th) / q);
        const double lhs = lp_norm(f, r);
        const double rhs = std::pow(lp_norm(f, p), th) * std::pow(lp_norm(f, q), 1.0 - th);
        REQUIRE(lhs <= rhs * (1.0 + 1e-9));
    }
}

TEST_CASE("decay trace: weights, running max, exact power-law cancellation") {
    DecayTrace trace;
    trace.dimension = 3;
    append_trace_row(trace, 1.0, 0.5, 1.0, 1.0, 1.0);
    CHECK(trace.weighted.back() == doctest::Approx(0.5));
    CHECK(trace.a_running.back() == doctest::Approx(0.5));

    // weighted drops to 0.4; A keeps the old max
    append_trace_row(trace, 2.0, 0.4 / std::pow(2.0, 1.5), 1.0, 1.0, 1.0);
    CHECK(trace.weighted.back() == doctest::Approx(0.4));
    CHECK(trace.a_running.back() == doctest::Approx(0.5));

    CHECK_THROWS_AS(append_trace_row(trace, 2.0, 1.0, 1.0, 1.0, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(append_trace_row(trace, 1.5, 1.0, 1.0, 1.0, 1.0),
                    std::invalid_argument);

    DecayTrace exact;
    exact.dimension = 3;
    for (int i = 1; i <= 50; ++i) {
        const double t = 0.2 * i;
        append_trace_row(exact, t, std::pow(t, -1.5), 1.0, 1.0, 1.0);
    }
    for (double a : exact.a_running) REQUIRE(a == doctest::Approx(1.0).epsilon(1e-12));

    // dimension-2 weight is t^1
    DecayTrace two;
    two.dimension = 2;
    append_trace_row(two, 4.0, 0.25, 1.0, 1.0, 1.0);
    CHECK(two.weighted.back() == doctest::Approx(1.0));
}

TEST_CASE("strichartz meter: closed forms, monotone tail, additivity") {
    StrichartzMeter meter;
    meter.time_exponent = 10.0;
    meter.space_exponent = 10.0;

    CHECK_THROWS_AS(meter.tail(0.0), std::runtime_error);

    // constant integrand c^q over [0, 5]
    const double c = 0.7;
    for (int i = 0; i <= 50; ++i) meter.record_value(0.1 * i, c);
    CHECK(meter.tail(5.0) == doctest::Approx(0.0));
    CHECK(meter.tail(0.0) ==
          doctest::Approx(std::pow(5.0 * std::pow(c, 10.0), 0.1)).epsilon(1e-12));
    CHECK(meter.tail(2.0) ==
          doctest::Approx(std::pow(3.0 * std::pow(c, 10.0), 0.1)).epsilon(1e-12));

    StrichartzMeter decaying;
    decaying.time_exponent = 8.0;
    decaying.space_exponent = 8.0;
    for (int i = 0; i <= 200; ++i) {
        const double t = 0.05 * i;
        decaying.record_value(t, 1.0 / (1.0 + t));
    }
    double prev = decaying.tail(0.0);
    for (int i = 1; i <= 200; i += 7) {
        const double cur = decaying.tail(0.05 * i);
        REQUIRE(cur <= prev + 1e-12);
        prev = cur;
    }
    const double whole = decaying.integral(0.0, 10.0);
    const double split = decaying.integral(0.0, 3.1) + decaying.integral(3.1, 10.0);
    CHECK(std::abs(whole - split) < 1e-12 * whole);

    // start between samples interpolates and stays monotone
    CHECK(decaying.tail(0.071) <= decaying.tail(0.049) + 1e-12);
}

TEST_CASE("log-log fit: exact power laws, constants, error paths") {
    std::vector<double> t, v;
    for (int i = 1; i <= 40; ++i) {
        t.push_back(0.5 * i);
        v.push_back(2.0 * std::pow(0.5 * i, -1.5));
    }
    const LogLogFit fit = fit_loglog(t, v, 0.5, 20.0);
    CHECK(fit.slope == doctest::Approx(-1.5).epsilon(1e-12));
    CHECK(fit.stderr_slope < 1e-12);

    std::vector<double> flat(40, 3.0);
    const LogLogFit fit0 = fit_loglog(t, flat, 0.5, 20.0);
    CHECK(fit0.slope == doctest::Approx(0.0).epsilon(1e-12));

    CHECK_THROWS_AS(fit_loglog(t, v, 100.0, 200.0), std::invalid_argument);
    std::vector<double> with_zero = v;
    with_zero[10] = 0.0;
    CHECK_THROWS_AS(fit_loglog(t, with_zero, 0.5, 20.0), std::invalid_argument);

    // synthetic t^{-1} trace via the DecayTrace fit front end
    DecayTrace trace;
    trace.dimension = 2;
    for (int i = 1; i <= 30; ++i)
        append_trace_row(trace, 0.3 * i, 1.0 / (0.3 * i), 1.0, 1.0, 1.0);
    CHECK(fit_decay_exponent(trace, 0.3, 9.0).slope == doctest::Approx(-1.0).epsilon(1e-12));
}
