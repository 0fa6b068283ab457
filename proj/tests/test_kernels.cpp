#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <omp.h>

#include <cmath>
#include <random>
#include <vector>

#include "nlsdecay/kernels.hpp"

namespace kn = nlsdecay::kernels;
using kn::cplx;

namespace {

std::vector<cplx> random_values(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<cplx> v(n);
    for (auto& z : v) z = cplx(u(rng), u(rng));
    return v;
}

struct BackendGuard {
    kn::Backend saved = kn::backend();
    ~BackendGuard() { kn::set_backend(saved); }
};

}  // namespace

TEST_CASE("pointwise kernels match the serial reference bitwise") {
    BackendGuard guard;
    const auto base = random_values(100003, 11);  // odd size exercises the block tail
    const auto mult = random_values(100003, 12);

    auto a = base;
    kn::serial_ref::multiply_pointwise(a, mult);
    auto b = base;
    kn::set_backend(kn::Backend::OpenMP);
    kn::multiply_pointwise(b, mult);
    for (std::size_t i = 0; i < a.size(); ++i) REQUIRE(a[i] == b[i]);

    auto c = base;
    kn::serial_ref::nonlinear_phase(c, -1e-3, 4);
    auto d = base;
    kn::nonlinear_phase(d, -1e-3, 4);
    for (std::size_t i = 0; i < c.size(); ++i) REQUIRE(c[i] == d[i]);
}

TEST_CASE("nonlinear phase preserves pointwise modulus") {
    auto a = random_values(4096, 3);
    const auto before = a;
    kn::nonlinear_phase(a, -0.37, 2);
    for (std::size_t i = 0; i < a.size(); ++i)
        REQUIRE(std::abs(a[i]) == doctest::Approx(std::abs(before[i])).epsilon(1e-15));
}

TEST_CASE("reductions agree with the serial reference within 1e-13") {
    BackendGuard guard;
    kn::set_backend(kn::Backend::OpenMP);
    const auto a = random_values(250007, 23);
    CHECK(kn::sum_abs2(a) ==
          doctest::Approx(kn::serial_ref::sum_abs2(a)).epsilon(1e-13));
    CHECK(kn::sum_abs_pow(a, 6.0) ==
          doctest::Approx(kn::serial_ref::sum_abs_pow(a, 6.0)).epsilon(1e-13));
    CHECK(kn::sum_abs_pow(a, 1.0) ==
          doctest::Approx(kn::serial_ref::sum_abs_pow(a, 1.0)).epsilon(1e-13));
    CHECK(kn::max_abs(a) == kn::serial_ref::max_abs(a));
}

TEST_CASE("reductions are bit-identical for any worker count") {
    BackendGuard guard;
    kn::set_backend(kn::Backend::OpenMP);
    const auto a = random_values(250007, 37);

    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const double s1 = kn::sum_abs2(a);
    const double p1 = kn::sum_abs_pow(a, 10.0);
    const double m1 = kn::max_abs(a);
    omp_set_num_threads(4);
    const double s4 = kn::sum_abs2(a);
    const double p4 = kn::sum_abs_pow(a, 10.0);
    const double m4 = kn::max_abs(a);
    omp_set_num_threads(saved);

    CHECK(s1 == s4);
    CHECK(p1 == p4);
    CHECK(m1 == m4);

    // serial backend sees the same blocked arithmetic
    kn::set_backend(kn::Backend::Serial);
    CHECK(kn::sum_abs2(a) == s1);
}

TEST_CASE("axpy and scale behave") {
    auto y = random_values(1000, 5);
    const auto x = random_values(1000, 6);
    const auto y0 = y;
    kn::axpy(y, cplx(2.0, -1.0), x);
    for (std::size_t i = 0; i < y.size(); ++i)
        REQUIRE(std::abs(y[i] - (y0[i] + cplx(2.0, -1.0) * x[i])) < 1e-15);

    auto z = random_values(1000, 7);
    const auto z0 = z;
    kn::scale(z, cplx(0.0, 1.0));
    for (std::size_t i = 0; i < z.size(); ++i)
        REQUIRE(z[i] == cplx(0.0, 1.0) * z0[i]);
}

TEST_CASE("all_finite flags NaN and Inf anywhere in the array") {
    auto a = random_values(70000, 9);
    CHECK(kn::all_finite(a));
    a[69999] = cplx(std::numeric_limits<double>::quiet_NaN(), 0.0);
    CHECK_FALSE(kn::all_finite(a));
    a[69999] = cplx(0.0, std::numeric_limits<double>::infinity());
    CHECK_FALSE(kn::all_finite(a));
}

TEST_CASE("rotate_by_table is a pointwise isometry") {
    auto a = random_values(8192, 13);
    const auto before = a;
    std::vector<double> table(a.size());
    for (std::size_t i = 0; i < table.size(); ++i) table[i] = 0.01 * i;
    kn::rotate_by_table(a, table, -0.7);
    for (std::size_t i = 0; i < a.size(); ++i)
        REQUIRE(std::abs(a[i]) == doctest::Approx(std::abs(before[i])).epsilon(1e-14));
}
