#include "nlsdecay/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <vector>

namespace nlsdecay::kernels {

namespace {

std::atomic<Backend> g_backend{Backend::OpenMP};

// Fixed block size for reductions.  Partials are computed per block and
// combined in block order, so the result does not depend on the number of
// OpenMP workers.
constexpr std::size_t kBlock = 8192;

inline double abs2(cplx z) {
    return z.real() * z.real() + z.imag() * z.imag();
}

inline double abs_pow(cplx z, double p) {
    const double r2 = abs2(z);
    if (r2 == 0.0) return 0.0;
    if (p == 2.0) return r2;
    if (p == 1.0) return std::sqrt(r2);
    if (p == 4.0) return r2 * r2;
    if (p == 6.0) return r2 * r2 * r2;
    if (p == 8.0) return (r2 * r2) * (r2 * r2);
    if (p == 10.0) return (r2 * r2) * (r2 * r2) * r2;
    return std::pow(r2, 0.5 * p);
}

template <class BlockFn>
void for_blocks(std::size_t total, bool parallel, BlockFn&& fn) {
    const std::int64_t nblocks =
        static_cast<std::int64_t>((total + kBlock - 1) / kBlock);
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t b = 0; b < nblocks; ++b) {
            const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
            fn(static_cast<std::size_t>(b), lo, std::min(lo + kBlock, total));
        }
    } else {
        for (std::int64_t b = 0; b < nblocks; ++b) {
            const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
            fn(static_cast<std::size_t>(b), lo, std::min(lo + kBlock, total));
        }
    }
}

template <class PerElement>
void pointwise(std::size_t total, PerElement&& fn) {
    if (backend() == Backend::OpenMP) {
        const std::int64_t n = static_cast<std::int64_t>(total);
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < n; ++i) fn(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < total; ++i) fn(i);
    }
}

template <class BlockReduce>
std::vector<double> block_partials(std::size_t total, BlockReduce&& fn) {
    const std::size_t nblocks = (total + kBlock - 1) / kBlock;
    std::vector<double> partial(nblocks, 0.0);
    for_blocks(total, backend() == Backend::OpenMP,
               [&](std::size_t b, std::size_t lo, std::size_t hi) {
                   partial[b] = fn(lo, hi);
               });
    return partial;
}

}  // namespace

Backend backend() { return g_backend.load(std::memory_order_relaxed); }
void set_backend(Backend b) { g_backend.store(b, std::memory_order_relaxed); }

void multiply_pointwise(std::span<cplx> a, std::span<const cplx> b) {
    pointwise(a.size(), [&](std::size_t i) { a[i] *= b[i]; });
}

void multiply_real(std::span<cplx> a, std::span<const double> w) {
    pointwise(a.size(), [&](std::size_t i) { a[i] *= w[i]; });
}

void scale(std::span<cplx> a, cplx s) {
    pointwise(a.size(), [&](std::size_t i) { a[i] *= s; });
}

void axpy(std::span<cplx> y, cplx alpha, std::span<const cplx> x) {
    pointwise(y.size(), [&](std::size_t i) { y[i] += alpha * x[i]; });
}

void rotate_by_table(std::span<cplx> a, std::span<const double> table, double theta) {
    pointwise(a.size(), [&](std::size_t i) {
        const double phi = theta * table[i];
        a[i] *= cplx(std::cos(phi), std::sin(phi));
    });
}

void nonlinear_phase(std::span<cplx> a, double c, int qm1) {
    pointwise(a.size(), [&](std::size_t i) {
        const double r2 = abs2(a[i]);
        const double amp = (qm1 == 2) ? r2 : r2 * r2;
        const double phi = c * amp;
        a[i] *= cplx(std::cos(phi), std::sin(phi));
    });
}

double sum_abs2(std::span<const cplx> a) {
    auto partial = block_partials(a.size(), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += abs2(a[i]);
        return s;
    });
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

double sum_abs_pow(std::span<const cplx> a, double p) {
    auto partial = block_partials(a.size(), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += abs_pow(a[i], p);
        return s;
    });
    double total = 0.0;
    for (double q : partial) total += q;
    return total;
}

double sum_weighted_abs2(std::span<const cplx> a, std::span<const double> w) {
    auto partial = block_partials(a.size(), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += w[i] * abs2(a[i]);
        return s;
    });
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

double max_abs(std::span<const cplx> a) {
    auto partial = block_partials(a.size(), [&](std::size_t lo, std::size_t hi) {
        double m = 0.0;
        for (std::size_t i = lo; i < hi; ++i) m = std::max(m, abs2(a[i]));
        return m;
    });
    double m = 0.0;
    for (double p : partial) m = std::max(m, p);
    return std::sqrt(m);
}

bool all_finite(std::span<const cplx> a) {
    auto partial = block_partials(a.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            if (!std::isfinite(a[i].real()) || !std::isfinite(a[i].imag()))
                return 0.0;
        }
        return 1.0;
    });
    for (double p : partial)
        if (p == 0.0) return false;
    return true;
}

namespace serial_ref {

void multiply_pointwise(std::span<cplx> a, std::span<const cplx> b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
}

void nonlinear_phase(std::span<cplx> a, double c, int qm1) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double r2 = abs2(a[i]);
        const double amp = (qm1 == 2) ? r2 : r2 * r2;
        const double phi = c * amp;
        a[i] *= cplx(std::cos(phi), std::sin(phi));
    }
}

double sum_abs2(std::span<const cplx> a) {
    double s = 0.0;
    for (const cplx& z : a) s += abs2(z);
    return s;
}

double sum_abs_pow(std::span<const cplx> a, double p) {
    double s = 0.0;
    for (const cplx& z : a) s += abs_pow(z, p);
    return s;
}

double max_abs(std::span<const cplx> a) {
    double m = 0.0;
    for (const cplx& z : a) m = std::max(m, abs2(z));
    return std::sqrt(m);
}

}  // namespace serial_ref

}  // namespace nlsdecay::kernels
