// Timing comparison of the OpenMP kernels against the serial reference
// loops, plus the FFT cost on the production grid sizes.
#include <chrono>
#include <cstdio>
#include <cstring>
#include <vector>

#include <omp.h>

#include "nlsdecay/fft.hpp"
#include "nlsdecay/kernels.hpp"

using nlsdecay::cplx;
namespace kn = nlsdecay::kernels;

namespace {

double seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

template <class Fn>
double time_op(int reps, Fn&& fn) {
    fn();  // warm up
    const double t0 = seconds();
    for (int r = 0; r < reps; ++r) fn();
    return (seconds() - t0) / reps * 1e3;  // ms
}

}  // namespace

int main(int argc, char** argv) {
    std::size_t n = (argc > 1) ? std::strtoull(argv[1], nullptr, 10) : (1u << 18);
    int reps = (argc > 2) ? std::atoi(argv[2]) : 50;

    std::vector<cplx> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = cplx(std::sin(0.1 * i), std::cos(0.2 * i));
        b[i] = cplx(0.5, -0.25);
    }

    std::printf("kernel benchmark: n = %zu, reps = %d, omp threads = %d\n", n, reps,
                omp_get_max_threads());
    std::printf("%-24s %12s %12s %8s\n", "kernel", "serial (ms)", "openmp (ms)", "speedup");

    auto row = [&](const char* name, double ts, double tp) {
        std::printf("%-24s %12.3f %12.3f %7.2fx\n", name, ts, tp, ts / tp);
    };

    {
        std::vector<cplx> x = a, y = a;
        const double ts = time_op(reps, [&] { kn::serial_ref::multiply_pointwise(x, b); });
        kn::set_backend(kn::Backend::OpenMP);
        const double tp = time_op(reps, [&] { kn::multiply_pointwise(y, b); });
        row("multiply_pointwise", ts, tp);
    }
    {
        std::vector<cplx> x = a, y = a;
        const double ts =
            time_op(reps, [&] { kn::serial_ref::nonlinear_phase(x, -1e-3, 4); });
        const double tp = time_op(reps, [&] { kn::nonlinear_phase(y, -1e-3, 4); });
        row("nonlinear_phase q=5", ts, tp);
    }
    {
        volatile double sink = 0.0;
        const double ts = time_op(reps, [&] { sink = kn::serial_ref::sum_abs2(a); });
        const double tp = time_op(reps, [&] { sink = kn::sum_abs2(a); });
        row("sum_abs2", ts, tp);
        (void)sink;
    }
    {
        volatile double sink = 0.0;
        const double ts = time_op(reps, [&] { sink = kn::serial_ref::sum_abs_pow(a, 6.0); });
        const double tp = time_op(reps, [&] { sink = kn::sum_abs_pow(a, 6.0); });
        row("sum_abs_pow p=6", ts, tp);
        (void)sink;
    }
    {
        volatile double sink = 0.0;
        const double ts = time_op(reps, [&] { sink = kn::serial_ref::max_abs(a); });
        const double tp = time_op(reps, [&] { sink = kn::max_abs(a); });
        row("max_abs", ts, tp);
        (void)sink;
    }

    std::printf("\nFFT round trips (serial FFTW plans):\n");
    for (int dim : {2, 3}) {
        const int npow = dim == 2 ? 256 : 64;
        const auto grid = nlsdecay::make_grid(dim, 16.0 * M_PI, npow);
        nlsdecay::ComplexField f(grid);
        for (std::size_t i = 0; i < f.size(); ++i)
            f.values[i] = cplx(1.0 / (1.0 + i), 0.3);
        const double t = time_op(10, [&] {
            auto F = nlsdecay::forward_transform(f);
            f = nlsdecay::inverse_transform(F);
        });
        std::printf("  d=%d n=%d: %.3f ms per round trip\n", dim, npow, t);
    }
    return 0;
}
