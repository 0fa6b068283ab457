#ifndef NLSDECAY_KERNELS_HPP
#define NLSDECAY_KERNELS_HPP

#include <complex>
#include <span>

namespace nlsdecay::kernels {

using cplx = std::complex<double>;

/// Which implementation the dispatching kernels below run.  OpenMP is the
/// default; Serial is the plain-loop reference kept for tests and the
/// kernel benchmark.  Reductions are blocked with a fixed block size in
/// both backends, so results are bit-identical regardless of thread count.
enum class Backend { Serial, OpenMP };

Backend backend();
void set_backend(Backend b);

// ---- pointwise ----------------------------------------------------------

void multiply_pointwise(std::span<cplx> a, std::span<const cplx> b);   // a *= b
void multiply_real(std::span<cplx> a, std::span<const double> w);      // a *= w
void scale(std::span<cplx> a, cplx s);
void axpy(std::span<cplx> y, cplx alpha, std::span<const cplx> x);     // y += alpha*x

/// a_i *= exp(i * theta * table_i); the linear-propagator rotation with
/// table = |k|^2 and theta = -t.
void rotate_by_table(std::span<cplx> a, std::span<const double> table, double theta);

/// a_i *= exp(i * c * |a_i|^qm1), qm1 even (2 or 4); the nonlinear phase
/// step with c = -dt.  Preserves |a_i| exactly up to roundoff.
void nonlinear_phase(std::span<cplx> a, double c, int qm1);

// ---- reductions (deterministic, blocked) --------------------------------

double sum_abs2(std::span<const cplx> a);                              // sum |a|^2
double sum_abs_pow(std::span<const cplx> a, double p);                 // sum |a|^p
double sum_weighted_abs2(std::span<const cplx> a, std::span<const double> w);
double max_abs(std::span<const cplx> a);
bool all_finite(std::span<const cplx> a);

// ---- serial reference ----------------------------------------------------
// Naive single-pass loops; the benchmark and equivalence tests compare the
// dispatching kernels against these.

namespace serial_ref {
void multiply_pointwise(std::span<cplx> a, std::span<const cplx> b);
void nonlinear_phase(std::span<cplx> a, double c, int qm1);
double sum_abs2(std::span<const cplx> a);
double sum_abs_pow(std::span<const cplx> a, double p);
double max_abs(std::span<const cplx> a);
}  // namespace serial_ref

}  // namespace nlsdecay::kernels

#endif
