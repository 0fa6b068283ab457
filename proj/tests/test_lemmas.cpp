#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nlsdecay/fft.hpp"
#include "nlsdecay/kernels.hpp"
#include "nlsdecay/lemmas.hpp"
#include "nlsdecay/norms.hpp"

using namespace nlsdecay;

namespace {

RandomFieldSpec small_spec(std::uint64_t seed) {
    RandomFieldSpec spec;
    spec.grid = make_grid(3, M_PI, 16);
    spec.spectral_cutoff = 4.0;
    spec.spectral_decay = 3.0;
    spec.seed = seed;
    return spec;
}

// exact rational arithmetic for the exponent bookkeeping
struct Frac {
    long num, den;
    Frac operator+(const Frac& o) const { return {num * o.den + o.num * den, den * o.den}; }
    bool operator==(const Frac& o) const { return num * o.den == o.num * den; }
};

}  // namespace

TEST_CASE("denominator exponents sum to one in exact rational arithmetic") {
    // H3 ratio: (2 + 3)/5
    CHECK(Frac{2, 5} + Frac{3, 5} == Frac{1, 1});
    // H4 ratio: 2/5 + 6/25 + 9/25
    CHECK(Frac{2, 5} + Frac{6, 25} + Frac{9, 25} == Frac{1, 1});
}

TEST_CASE("random band-limited fields: constants at K = 0, determinism, band support") {
    RandomFieldSpec spec = small_spec(42);
    spec.spectral_cutoff = 0.0;
    const ComplexField constant = random_band_limited(spec);
    for (const auto& v : constant.values)
        REQUIRE(std::abs(v - constant.values[0]) < 1e-12 * std::abs(constant.values[0]));

    spec.spectral_cutoff = 4.0;
    const ComplexField a = random_band_limited(spec);
    const ComplexField b = random_band_limited(spec);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) REQUIRE(a.values[i] == b.values[i]);

    // spectrum vanishes beyond the cutoff
    const SpectralField F = forward_transform(a);
    const FrequencyLattice lat(a.grid);
    for (std::size_t i = 0; i < F.size(); ++i)
        if (lat.k_squared()[i] > 16.0 + 1e-9)
            REQUIRE(std::abs(F.values[i]) < 1e-9);

    RandomFieldSpec other = spec;
    other.seed = 43;
    const ComplexField c = random_band_limited(other);
    CHECK(kernels::max_abs(c.values) != kernels::max_abs(a.values));

    RandomFieldSpec too_wide = spec;
    too_wide.spectral_cutoff = 100.0;
    CHECK_THROWS_AS(random_band_limited(too_wide), std::invalid_argument);
}

TEST_CASE("same modes reappear on a refined grid (resolution independence)") {
    RandomFieldSpec coarse = small_spec(7);
    RandomFieldSpec fine = coarse;
    fine.grid = make_grid(3, M_PI, 32);
    const ComplexField fc = random_band_limited(coarse);
    const ComplexField ff = random_band_limited(fine);
    // band-limited: spectral norms are grid independent
    CHECK(lp_norm(fc, 2.0) == doctest::Approx(lp_norm(ff, 2.0)).epsilon(1e-12));
    CHECK(sobolev_norm(fc, 3.0) == doctest::Approx(sobolev_norm(ff, 3.0)).epsilon(1e-12));
}

TEST_CASE("ratios are invariant under scaling and lattice translation") {
    const ComplexField f = random_band_limited(small_spec(11));
    for (LemmaSuite which :
         {LemmaSuite::H3Interp, LemmaSuite::H4Interp, LemmaSuite::GradientEmbedding}) {
        const double base = lemma_ratio(which, f);

        ComplexField scaled = f;
        kernels::scale(scaled.values, cplx(-2.4, 0.7));
        REQUIRE(std::abs(lemma_ratio(which, scaled) - base) <= 1e-12 * base);

        // cyclic shift by one lattice site along the last axis
        ComplexField shifted = f;
        const int n = f.grid.points_per_axis;
        for (std::size_t row = 0; row < f.size(); row += n) {
            for (int i = 0; i < n; ++i)
                shifted.values[row + static_cast<std::size_t>(i)] =
                    f.values[row + static_cast<std::size_t>((i + 3) % n)];
        }
        REQUIRE(std::abs(lemma_ratio(which, shifted) - base) <= 1e-12 * base);
    }
}

TEST_CASE("plane-wave closed forms for both interpolation ratios") {
    const GridSpec g = make_grid(3, M_PI, 16);
    const FrequencyLattice lat(g);
    const double kx = lat.wavenumber(2), ky = lat.wavenumber(15), kz = lat.wavenumber(1);
    const double k2 = kx * kx + ky * ky + kz * kz;
    const double k = std::sqrt(k2);
    const ComplexField wave = sample_function(g, [&](const std::array<double, 3>& x) {
        return 1.7 * std::exp(cplx(0.0, kx * x[0] + ky * x[1] + kz * x[2]));
    });
    const double v = g.box_volume();

    const double expected_h3 = std::pow(v, -0.5) * std::pow(1.0 + k2, -0.9);
    CHECK(interpolation_ratio_h3(wave) == doctest::Approx(expected_h3).epsilon(1e-10));

    const double expected_h4 = std::pow(v, -0.5) * std::pow(k, -6.0 / 25.0) *
                               std::pow(1.0 + k2, -18.0 / 25.0);
    CHECK(interpolation_ratio_h4(wave) == doctest::Approx(expected_h4).epsilon(1e-10));
}

TEST_CASE("zero field and wrong dimension are rejected") {
    const GridSpec g3 = make_grid(3, M_PI, 8);
    ComplexField zero(g3);
    CHECK_THROWS_AS(interpolation_ratio_h3(zero), std::invalid_argument);
    const GridSpec g2 = make_grid(2, M_PI, 8);
    ComplexField flat(g2, cplx(1.0, 0.0));
    CHECK_THROWS_AS(interpolation_ratio_h4(flat), std::invalid_argument);
}

TEST_CASE("suite: single sample, determinism, witness reproduction") {
    const RandomFieldSpec spec = small_spec(100);
    const LemmaReport single = run_lemma_suite(LemmaSuite::H3Interp, spec, 1);
    CHECK(single.sample_count == 1);
    CHECK(single.max_ratio ==
          interpolation_ratio_h3(random_band_limited(spec)));
    CHECK(single.offending_seed == 100);

    const LemmaReport a = run_lemma_suite(LemmaSuite::H4Interp, spec, 64);
    const LemmaReport b = run_lemma_suite(LemmaSuite::H4Interp, spec, 64);
    CHECK(a.max_ratio == b.max_ratio);
    CHECK(a.offending_seed == b.offending_seed);
    CHECK(a.histogram == b.histogram);

    RandomFieldSpec witness = spec;
    witness.seed = a.offending_seed;
    CHECK(interpolation_ratio_h4(random_band_limited(witness)) == a.max_ratio);

    std::size_t total = 0;
    for (auto c : a.histogram) total += c;
    CHECK(total == 64);
}

TEST_CASE("suite max is stable under 2x grid refinement (fixed spectral content)") {
    RandomFieldSpec coarse = small_spec(555);
    RandomFieldSpec fine = coarse;
    fine.grid = make_grid(3, M_PI, 32);
    for (LemmaSuite which : {LemmaSuite::H3Interp, LemmaSuite::H4Interp}) {
        const LemmaReport rc = run_lemma_suite(which, coarse, 50);
        const LemmaReport rf = run_lemma_suite(which, fine, 50);
        REQUIRE(std::abs(rc.max_ratio - rf.max_ratio) < 0.01 * rc.max_ratio);
    }
}

TEST_CASE("gradient-embedding ratios stay below the H3 norm bound") {
    const RandomFieldSpec spec = small_spec(321);
    const LemmaReport rep = run_lemma_suite(LemmaSuite::GradientEmbedding, spec, 200);
    CHECK(rep.max_ratio < 1.0);
    CHECK(rep.max_ratio > 0.0);
}
