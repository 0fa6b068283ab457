#include "nlsdecay/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "nlsdecay/fft.hpp"
#include "nlsdecay/kernels.hpp"

namespace nlsdecay {

double lp_norm(const ComplexField& f, double p) {
    if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
    if (std::isinf(p)) return kernels::max_abs(f.values);
    const double s = kernels::sum_abs_pow(f.values, p) * f.grid.volume_element();
    return std::pow(s, 1.0 / p);
}

double spectral_l2_norm(const SpectralField& F) {
    return std::sqrt(kernels::sum_abs2(F.values) / F.grid.box_volume());
}

namespace {

double weighted_spectral_norm(const SpectralField& F, const std::vector<double>& w) {
    return std::sqrt(kernels::sum_weighted_abs2(F.values, w) / F.grid.box_volume());
}

const std::vector<double>& k2_table(const GridSpec& grid) {
    thread_local std::map<std::pair<int, int>, std::vector<double>> cache;
    // half_width enters the table values, so key on it via a rebuild check.
    thread_local std::map<std::pair<int, int>, double> widths;
    const auto key = std::make_pair(grid.dimension, grid.points_per_axis);
    auto it = cache.find(key);
    if (it == cache.end() || widths[key] != grid.half_width) {
        cache[key] = FrequencyLattice(grid).k_squared();
        widths[key] = grid.half_width;
        it = cache.find(key);
    }
    return it->second;
}

}  // namespace

double sobolev_norm(const SpectralField& F, double s) {
    if (s < 0.0) throw std::invalid_argument("sobolev_norm: s must be >= 0");
    const auto& k2 = k2_table(F.grid);
    std::vector<double> w(k2.size());
    const int si = static_cast<int>(s);
    if (s == si && si <= 4) {
        for (std::size_t i = 0; i < k2.size(); ++i) {
            const double b = 1.0 + k2[i];
            double p = 1.0;
            for (int j = 0; j < si; ++j) p *= b;
            w[i] = p;
        }
    } else {
        for (std::size_t i = 0; i < k2.size(); ++i) w[i] = std::pow(1.0 + k2[i], s);
    }
    return weighted_spectral_norm(F, w);
}

double sobolev_norm(const ComplexField& f, double s) {
    return sobolev_norm(forward_transform(f), s);
}

double gradient_l2_norm(const SpectralField& F) {
    return weighted_spectral_norm(F, k2_table(F.grid));
}

double gradient_l2_norm(const ComplexField& f) {
    return gradient_l2_norm(forward_transform(f));
}

double gradient_sup(const ComplexField& f) {
    const SpectralField F = forward_transform(f);
    const FrequencyLattice lattice(f.grid);
    const std::size_t total = F.size();
    std::vector<double> grad2(total, 0.0);
    SpectralField D(F.grid);
    for (int a = 0; a < f.grid.dimension; ++a) {
        for (std::size_t i = 0; i < total; ++i) {
            const double ka = lattice.wavevector(i)[static_cast<std::size_t>(a)];
            D.values[i] = cplx(0.0, ka) * F.values[i];
        }
        const ComplexField da = inverse_transform(D);
        for (std::size_t i = 0; i < total; ++i) grad2[i] += std::norm(da.values[i]);
    }
    double m = 0.0;
    for (double g : grad2) m = std::max(m, g);
    return std::sqrt(m);
}

double energy(const ComplexField& u, const SpectralField& u_hat, const EquationSpec& eq) {
    const double grad = gradient_l2_norm(u_hat);
    double e = 0.5 * grad * grad;
    if (!eq.linear) {
        const double q1 = eq.power_q + 1.0;
        e += kernels::sum_abs_pow(u.values, q1) * u.grid.volume_element() / q1;
    }
    return e;
}

void append_trace_row(DecayTrace& trace, double t, double sup, double mass_val,
                      double energy_val, double hs_val) {
    if (!trace.times.empty() && t <= trace.times.back())
        throw std::invalid_argument("DecayTrace: times must be strictly increasing");
    const double w = (t > 0.0) ? std::pow(t, trace.weight_exponent()) * sup : 0.0;
    trace.times.push_back(t);
    trace.sup_norms.push_back(sup);
    trace.weighted.push_back(w);
    trace.a_running.push_back(trace.a_running.empty() ? w
                                                      : std::max(trace.a_running.back(), w));
    trace.mass.push_back(mass_val);
    trace.energy.push_back(energy_val);
    trace.hs.push_back(hs_val);
}

void update_decay_trace(DecayTrace& trace, double t, const ComplexField& f,
                        const EquationSpec& eq, bool refine_sup) {
    const double sup = refine_sup ? sup_norm_refined(f) : kernels::max_abs(f.values);
    const SpectralField F = forward_transform(f);
    const double mass_val = spectral_l2_norm(F);
    const double energy_val = energy(f, F, eq);
    const double hs_val = sobolev_norm(F, eq.sobolev_order());
    append_trace_row(trace, t, sup, mass_val, energy_val, hs_val);
}

void StrichartzMeter::record(double t, const ComplexField& u) {
    record_value(t, lp_norm(u, space_exponent));
}

void StrichartzMeter::record_value(double t, double lr_norm) {
    if (!times.empty() && t <= times.back())
        throw std::invalid_argument("StrichartzMeter: times must be strictly increasing");
    times.push_back(t);
    integrand.push_back(std::pow(lr_norm, time_exponent));
}

double StrichartzMeter::integral(double a, double b) const {
    if (times.size() < 2) throw std::runtime_error("StrichartzMeter: need >= 2 samples");
    if (b <= a) return 0.0;
    a = std::max(a, times.front());
    b = std::min(b, times.back());
    if (b <= a) return 0.0;
    auto value_at = [&](double t) {
        const auto it = std::lower_bound(times.begin(), times.end(), t);
        const std::size_t hi = static_cast<std::size_t>(it - times.begin());
        if (hi == 0) return integrand.front();
        if (hi >= times.size()) return integrand.back();
        const std::size_t lo = hi - 1;
        const double lam = (t - times[lo]) / (times[hi] - times[lo]);
        return (1.0 - lam) * integrand[lo] + lam * integrand[hi];
    };
    double sum = 0.0;
    double t_prev = a;
    double v_prev = value_at(a);
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] <= a) continue;
        const double t_i = std::min(times[i], b);
        sum += 0.5 * (v_prev + value_at(t_i)) * (t_i - t_prev);
        t_prev = t_i;
        v_prev = value_at(t_i);
        if (times[i] >= b) break;
    }
    if (t_prev < b) sum += 0.5 * (v_prev + value_at(b)) * (b - t_prev);
    return sum;
}

double StrichartzMeter::tail(double start) const {
    if (times.size() < 2) throw std::runtime_error("StrichartzMeter: need >= 2 samples");
    return std::pow(integral(start, times.back()), 1.0 / time_exponent);
}

LogLogFit fit_loglog(const std::vector<double>& times, const std::vector<double>& values,
                     double window_lo, double window_hi) {
    if (times.size() != values.size())
        throw std::invalid_argument("fit_loglog: series lengths differ");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        if (t < window_lo || t > window_hi || t <= 0.0) continue;
        if (!(values[i] > 0.0))
            throw std::invalid_argument("fit_loglog: nonpositive value inside window");
        xs.push_back(std::log(t));
        ys.push_back(std::log(values[i]));
    }
    if (xs.size() < 8)
        throw std::invalid_argument("fit_loglog: need >= 8 samples in window, got " +
                                    std::to_string(xs.size()));
    const double n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_loglog: degenerate window");
    LogLogFit fit;
    fit.samples = xs.size();
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        sse += r * r;
    }
    fit.stderr_slope = (xs.size() > 2) ? std::sqrt(sse / (n - 2.0) / sxx) : 0.0;
    return fit;
}

LogLogFit fit_decay_exponent(const DecayTrace& trace, double window_lo, double window_hi) {
    return fit_loglog(trace.times, trace.sup_norms, window_lo, window_hi);
}

}  // namespace nlsdecay
