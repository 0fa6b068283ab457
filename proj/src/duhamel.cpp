#include "nlsdecay/duhamel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nlsdecay/kernels.hpp"
#include "nlsdecay/norms.hpp"

namespace nlsdecay {

void DuhamelParams::validate(bool allow_small_L) const {
    if (!(M > 0.0)) throw std::invalid_argument("DuhamelParams: M must be positive");
    if (!(L > 0.0)) throw std::invalid_argument("DuhamelParams: L must be positive");
    if (delta < 0.0) throw std::invalid_argument("DuhamelParams: delta must be >= 0");
    if (sign != 1 && sign != -1)
        throw std::invalid_argument("DuhamelParams: sign must be +1 or -1");
    if (!allow_small_L && L < 100.0 * M)
        throw std::invalid_argument("DuhamelParams: L < 100*M (set the override to allow)");
}

ComplexField nonlinear_term(const ComplexField& f, const EquationSpec& eq, bool dealias) {
    eq.validate();
    ComplexField out = f;
    if (eq.linear) {
        std::fill(out.values.begin(), out.values.end(), cplx(0.0, 0.0));
        return out;
    }
    const int qm1 = eq.power_q - 1;
    const std::size_t total = out.size();
    for (std::size_t i = 0; i < total; ++i) {
        const double r2 = std::norm(out.values[i]);
        out.values[i] *= (qm1 == 2) ? r2 : r2 * r2;
    }
    if (dealias) {
        SpectralField F = forward_transform(out);
        const auto mask = dealias_mask(f.grid);
        kernels::multiply_real(F.values, mask);
        out = inverse_transform(F);
        out.time_stamp = f.time_stamp;
    }
    return out;
}

namespace {

std::size_t snapshot_index(const SnapshotSeries& series, double t, const char* what) {
    const double tol = 1e-9 * std::max(1.0, std::abs(t));
    for (std::size_t i = 0; i < series.size(); ++i)
        if (std::abs(series.time_at(i) - t) <= tol) return i;
    std::ostringstream os;
    os << what << ": time " << t << " is not a stored snapshot time";
    throw std::invalid_argument(os.str());
}

// Composite Simpson weights over snapshot nodes [i0..i1]; trapezoid on a
// trailing interval when the interval count is odd.  Handles the slightly
// non-uniform last interval via the unequal-spacing Simpson formula.
std::vector<double> quadrature_weights(const SnapshotSeries& series, std::size_t i0,
                                       std::size_t i1) {
    std::vector<double> w(i1 - i0 + 1, 0.0);
    std::size_t m = i0;
    while (m + 2 <= i1) {
        const double h0 = series.time_at(m + 1) - series.time_at(m);
        const double h1 = series.time_at(m + 2) - series.time_at(m + 1);
        const double h = h0 + h1;
        w[m - i0] += h / 6.0 * (2.0 - h1 / h0);
        w[m + 1 - i0] += h * h * h / (6.0 * h0 * h1);
        w[m + 2 - i0] += h / 6.0 * (2.0 - h0 / h1);
        m += 2;
    }
    if (m < i1) {  // one interval left: trapezoid
        const double h = series.time_at(m + 1) - series.time_at(m);
        w[m - i0] += 0.5 * h;
        w[m + 1 - i0] += 0.5 * h;
    }
    return w;
}

bool uniform_times(const SnapshotSeries& series, std::size_t i0, std::size_t i1) {
    if (i1 - i0 < 2) return true;
    const double h = series.time_at(i0 + 1) - series.time_at(i0);
    for (std::size_t i = i0 + 1; i < i1; ++i)
        if (std::abs((series.time_at(i + 1) - series.time_at(i)) - h) > 1e-9 * h)
            return false;
    return true;
}

}  // namespace

ComplexField duhamel_integral(const SnapshotSeries& series, double t, double t0, double t1,
                              int sign, bool dealias, double* quad_error_out) {
    if (sign != 1 && sign != -1)
        throw std::invalid_argument("duhamel_integral: sign must be +1 or -1");
    if (t1 < t0 - 1e-15)
        throw std::invalid_argument("duhamel_integral: empty range must have t0 <= t1");
    if (t0 < -1e-15 || t1 > t + 1e-9)
        throw std::invalid_argument("duhamel_integral: range must lie inside [0, t]");
    if (quad_error_out) *quad_error_out = 0.0;

    ComplexField result(series.grid());
    result.time_stamp = t;
    if (std::abs(t1 - t0) <= 1e-15) return result;  // zero-length range

    const std::size_t i0 = snapshot_index(series, t0, "duhamel_integral");
    const std::size_t i1 = snapshot_index(series, t1, "duhamel_integral");
    if (i1 - i0 + 1 < 2)
        throw std::invalid_argument("duhamel_integral: need >= 2 snapshots in range");

    const auto weights = quadrature_weights(series, i0, i1);
    const bool uniform = uniform_times(series, i0, i1);
    const bool want_coarse = quad_error_out && uniform && (i1 - i0) >= 4 &&
                             ((i1 - i0) % 4 == 0);
    std::vector<double> coarse_weights;
    if (want_coarse) {
        // same rule on every other node, for a Richardson error estimate
        coarse_weights.assign(weights.size(), 0.0);
        const double h2 = 2.0 * (series.time_at(i0 + 1) - series.time_at(i0));
        std::size_t m = 0;
        while (m + 4 <= i1 - i0) {
            coarse_weights[m] += h2 / 3.0;
            coarse_weights[m + 2] += 4.0 * h2 / 3.0;
            coarse_weights[m + 4] += h2 / 3.0;
            m += 4;
        }
    }

    const FrequencyLattice lattice(series.grid());
    const auto& k2 = lattice.k_squared();
    SpectralField acc(series.grid());
    SpectralField acc_coarse = want_coarse ? SpectralField(series.grid()) : SpectralField();

    for (std::size_t i = i0; i <= i1; ++i) {
        const ComplexField u = series.load(i);
        ComplexField g = nonlinear_term(u, series.equation(), dealias);
        SpectralField G = forward_transform(g);
        // e^{i (t - s) Lap} in frequency space
        kernels::rotate_by_table(G.values, k2, -(t - series.time_at(i)));
        kernels::axpy(acc.values, cplx(weights[i - i0], 0.0), G.values);
        if (want_coarse)
            kernels::axpy(acc_coarse.values, cplx(coarse_weights[i - i0], 0.0), G.values);
    }

    const cplx unit(0.0, static_cast<double>(sign));
    kernels::scale(acc.values, unit);
    result = inverse_transform(acc);
    result.time_stamp = t;

    if (want_coarse) {
        kernels::scale(acc_coarse.values, unit);
        kernels::axpy(acc_coarse.values, cplx(-1.0, 0.0), acc.values);
        *quad_error_out = spectral_l2_norm(acc_coarse) / 15.0;
    }
    return result;
}

double duhamel_residual(const SnapshotSeries& series, double t, int sign, bool dealias) {
    const std::size_t it = snapshot_index(series, t, "duhamel_residual");
    const ComplexField u_t = series.load(it);
    const ComplexField u_lin = linear_propagate(series.load(0), t);
    const ComplexField integral = duhamel_integral(series, t, 0.0, t, sign, dealias);
    ComplexField diff = u_t;
    kernels::axpy(diff.values, cplx(-1.0, 0.0), u_lin.values);
    kernels::axpy(diff.values, cplx(-1.0, 0.0), integral.values);
    const double denom = lp_norm(u_t, 2.0);
    return lp_norm(diff, 2.0) / denom;
}

SignProbe determine_duhamel_sign(const SnapshotSeries& series, double t, bool dealias) {
    const std::size_t it = snapshot_index(series, t, "determine_duhamel_sign");
    const ComplexField u_t = series.load(it);
    const ComplexField u_lin = linear_propagate(series.load(0), t);
    const ComplexField integral = duhamel_integral(series, t, 0.0, t, +1, dealias);
    const double denom = lp_norm(u_t, 2.0);

    ComplexField diff_plus = u_t;
    kernels::axpy(diff_plus.values, cplx(-1.0, 0.0), u_lin.values);
    kernels::axpy(diff_plus.values, cplx(-1.0, 0.0), integral.values);
    ComplexField diff_minus = u_t;
    kernels::axpy(diff_minus.values, cplx(-1.0, 0.0), u_lin.values);
    kernels::axpy(diff_minus.values, cplx(+1.0, 0.0), integral.values);

    const double r_plus = lp_norm(diff_plus, 2.0) / denom;
    const double r_minus = lp_norm(diff_minus, 2.0) / denom;
    SignProbe probe;
    probe.sign = (r_plus <= r_minus) ? +1 : -1;
    probe.residual_chosen = std::min(r_plus, r_minus);
    probe.residual_other = std::max(r_plus, r_minus);
    return probe;
}

DuhamelSplit split_duhamel(const SnapshotSeries& series, double t,
                           const DuhamelParams& params, bool dealias) {
    if (t < 2.0 * params.M - 1e-12)
        throw std::invalid_argument("split_duhamel: need t >= 2M");
    const std::size_t it = snapshot_index(series, t, "split_duhamel");
    const ComplexField u_t = series.load(it);

    DuhamelSplit split;
    split.t = t;
    split.M = params.M;
    split.u_linear = linear_propagate(series.load(0), t);
    split.u_linear.time_stamp = t;

    double e1 = 0.0, e2 = 0.0, e3 = 0.0;
    split.f1 = duhamel_integral(series, t, 0.0, params.M, params.sign, dealias, &e1);
    split.f2 = duhamel_integral(series, t, params.M, t - params.M, params.sign, dealias, &e2);
    split.f3 = duhamel_integral(series, t, t - params.M, t, params.sign, dealias, &e3);
    split.quadrature_error_estimate = e1 + e2 + e3;

    ComplexField diff = u_t;
    kernels::axpy(diff.values, cplx(-1.0, 0.0), split.u_linear.values);
    kernels::axpy(diff.values, cplx(-1.0, 0.0), split.f1.values);
    kernels::axpy(diff.values, cplx(-1.0, 0.0), split.f2.values);
    kernels::axpy(diff.values, cplx(-1.0, 0.0), split.f3.values);
    split.residual_rel = lp_norm(diff, 2.0) / lp_norm(u_t, 2.0);
    return split;
}

PieceReport weighted_piece_report(const DuhamelSplit& split, int dimension) {
    PieceReport rep;
    rep.t = split.t;
    rep.weight = std::pow(split.t, 0.5 * dimension);
    rep.u_linear_weighted = rep.weight * kernels::max_abs(split.u_linear.values);
    rep.f1_weighted = rep.weight * kernels::max_abs(split.f1.values);
    rep.f2_weighted = rep.weight * kernels::max_abs(split.f2.values);
    rep.f3_weighted = rep.weight * kernels::max_abs(split.f3.values);
    rep.residual_rel = split.residual_rel;
    return rep;
}

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double whole, double tol,
                        int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_integral(const std::function<double(double)>& f, double a, double b,
                         double rel_tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double tol = std::max(std::abs(whole) * rel_tol, 1e-300);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace

double kernel_weight_integral(double M, double t, int d, double rel_tol) {
    if (!(t > 2.0 * M) || !(M > 0.0))
        throw std::invalid_argument("kernel_weight_integral: need 0 < M < t/2");
    const double half = 0.5 * d;
    auto f = [t, half](double s) {
        return std::pow(t - s, -half) * std::pow(s, -half);
    };
    // split at the midpoint; the integrand is symmetric about it
    const double mid = 0.5 * t;
    return adaptive_integral(f, M, mid, rel_tol) +
           adaptive_integral(f, mid, t - M, rel_tol);
}

double choose_M_bound(double M1, double t, int d, int q) {
    if (!(M1 > 0.0)) throw std::invalid_argument("choose_M_bound: M1 must be positive");
    if (!(t > 0.0)) throw std::invalid_argument("choose_M_bound: t must be positive");
    const double target = 0.1 * std::pow(t, -0.5 * d);
    const double amp = std::pow(M1, q - 1);
    const double m_lo = t * 1e-6;
    const double m_hi = 0.5 * t * (1.0 - 1e-9);
    const int n_grid = 600;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_grid; ++i) {
        const double M = m_lo * std::pow(m_hi / m_lo, i / (n_grid - 1.0));
        const double val = amp * kernel_weight_integral(M, t, d);
        const double ratio = val / target;
        best_ratio = std::min(best_ratio, ratio);
        if (ratio <= 1.0) return M;
    }
    std::ostringstream os;
    os << "choose_M_bound: criterion unreachable on the search grid; best ratio "
       << best_ratio << " (want <= 1)";
    throw std::runtime_error(os.str());
}

}  // namespace nlsdecay
