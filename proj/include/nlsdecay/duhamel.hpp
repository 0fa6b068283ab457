#ifndef NLSDECAY_DUHAMEL_HPP
#define NLSDECAY_DUHAMEL_HPP

#include <optional>

#include "nlsdecay/propagators.hpp"

namespace nlsdecay {

/// Read-only access to an ordered snapshot series; implemented by the
/// in-memory TrajectoryHistory and by on-disk trajectories.  load(i) must
/// return the field at time_at(i); the series is read-only during
/// analysis.
class SnapshotSeries {
  public:
    virtual ~SnapshotSeries() = default;
    virtual std::size_t size() const = 0;
    virtual double time_at(std::size_t i) const = 0;
    virtual ComplexField load(std::size_t i) const = 0;
    virtual const GridSpec& grid() const = 0;
    virtual const EquationSpec& equation() const = 0;
};

/// TrajectoryHistory viewed as a SnapshotSeries.
class HistorySeries final : public SnapshotSeries {
  public:
    explicit HistorySeries(const TrajectoryHistory& h) : h_(h) {}
    std::size_t size() const override { return h_.size(); }
    double time_at(std::size_t i) const override { return h_.time_at(i); }
    ComplexField load(std::size_t i) const override { return h_.field_at(i); }
    const GridSpec& grid() const override { return h_.grid; }
    const EquationSpec& equation() const override { return h_.equation; }

  private:
    const TrajectoryHistory& h_;
};

/// Splitting parameters: near-boundary width M, perturbative onset L, the
/// measured space-time tail delta past L/2, and the sign of the integral
/// term (determined empirically once, then frozen; see
/// determine_duhamel_sign).
struct DuhamelParams {
    double M = 0.1;
    double L = 10.0;
    double delta = 0.0;
    int sign = -1;

    /// The studied regime keeps L >= 100*M; callers may override with
    /// allow_small_L.
    void validate(bool allow_small_L = false) const;
};

/// One three-way splitting evaluated at time t: u(t) ~ u_linear + f1 + f2
/// + f3, the integral pieces covering [0,M], [M,t-M], [t-M,t].
struct DuhamelSplit {
    double t = 0.0;
    double M = 0.0;
    ComplexField u_linear;
    ComplexField f1;
    ComplexField f2;
    ComplexField f3;
    double quadrature_error_estimate = 0.0;
    double residual_rel = 0.0;  // || sum - u(t) ||_2 / || u(t) ||_2
};

/// Pointwise nonlinear term |f|^(q-1) f, optionally dealiased with the
/// 2/3-rule mask.
ComplexField nonlinear_term(const ComplexField& f, const EquationSpec& eq,
                            bool dealias = false);

/// sign * i * int_{t0}^{t1} e^{i(t-s) Lap} N(u(s)) ds by composite Simpson
/// over the stored snapshots (trapezoid fallback on a trailing odd
/// interval).  Each node is propagated with the exact spectral rotation;
/// the accumulation happens in frequency space and is inverted once.
/// t0 and t1 must coincide with snapshot times; a zero-length range gives
/// the zero field.  If quad_error_out is non-null and at least five
/// uniform nodes are available, a Richardson estimate from the half-node
/// accumulation is written there.
ComplexField duhamel_integral(const SnapshotSeries& series, double t, double t0, double t1,
                              int sign, bool dealias = false,
                              double* quad_error_out = nullptr);

/// Relative L2 residual || u(t) - e^{it Lap} u0 - I(t) || / || u(t) ||
/// with I the full-range integral above; t must be a snapshot time.
double duhamel_residual(const SnapshotSeries& series, double t, int sign,
                        bool dealias = false);

/// Both integral signs tried; returns the sign with the smaller residual
/// along with the two residuals (smaller first).
struct SignProbe {
    int sign = -1;
    double residual_chosen = 0.0;
    double residual_other = 0.0;
};
SignProbe determine_duhamel_sign(const SnapshotSeries& series, double t,
                                 bool dealias = false);

/// Three-way splitting at time t (requires t >= 2M and snapshot coverage
/// of [0, t]; M must land on snapshot times).
DuhamelSplit split_duhamel(const SnapshotSeries& series, double t,
                           const DuhamelParams& params, bool dealias = false);

/// Weighted sup-norms of the pieces: w = t^(d/2) (t for d = 2).
struct PieceReport {
    double t = 0.0;
    double weight = 0.0;
    double u_linear_weighted = 0.0;
    double f1_weighted = 0.0;
    double f2_weighted = 0.0;
    double f3_weighted = 0.0;
    double residual_rel = 0.0;
};
PieceReport weighted_piece_report(const DuhamelSplit& split, int dimension);

/// Smallest M on a log-spaced search grid with
///   M1^(q-1) * int_M^{t-M} (t-s)^(-d/2) s^(-d/2) ds  <=  (1/10) t^(-d/2),
/// the proof constant taken as 1 (empirical-constant mode).  Throws,
/// reporting the best achieved ratio, when no grid point qualifies.
double choose_M_bound(double M1, double t, int d, int q);

/// Adaptive-Simpson value of int_M^{t-M} (t-s)^(-d/2) s^(-d/2) ds.
double kernel_weight_integral(double M, double t, int d, double rel_tol = 1e-12);

}  // namespace nlsdecay

#endif
