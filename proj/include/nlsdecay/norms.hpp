#ifndef NLSDECAY_NORMS_HPP
#define NLSDECAY_NORMS_HPP

#include <vector>

#include "nlsdecay/equation.hpp"
#include "nlsdecay/field.hpp"

namespace nlsdecay {

/// L^p norm by grid quadrature, (sum |f|^p h^d)^(1/p); p = inf gives the
/// max over samples.  p < 1 is rejected.
double lp_norm(const ComplexField& f, double p);

/// sqrt of (2l)^{-d} sum |F|^2; equals lp_norm(f,2) by Parseval.
double spectral_l2_norm(const SpectralField& F);

/// H^s norm, spectral multiplier (1 + |k|^2)^(s/2).  s < 0 rejected.
double sobolev_norm(const ComplexField& f, double s);
double sobolev_norm(const SpectralField& F, double s);

/// L^2 norm of the spectral gradient, sqrt((2l)^{-d} sum |k|^2 |F|^2).
double gradient_l2_norm(const SpectralField& F);
double gradient_l2_norm(const ComplexField& f);

/// Max over the grid of |grad f|, gradient computed spectrally.
double gradient_sup(const ComplexField& f);

/// Conserved energy  E(u) = int 1/2 |grad u|^2 + 1/(q+1) |u|^(q+1);
/// the potential term is dropped for linear equations.  Both the physical
/// and the spectral representation of the same state are required.
double energy(const ComplexField& u, const SpectralField& u_hat, const EquationSpec& eq);

/// Time series of sup norms, the t^(d/2)-weighted sup norm, its running
/// max A(t), and conserved-quantity traces.  The weight exponent is d/2
/// (so t^1 in dimension 2, t^(3/2) in dimension 3).
struct DecayTrace {
    int dimension = 3;
    std::vector<double> times;
    std::vector<double> sup_norms;
    std::vector<double> weighted;   // t^(d/2) * sup
    std::vector<double> a_running;  // running max of weighted
    std::vector<double> mass;
    std::vector<double> energy;
    std::vector<double> hs;

    std::size_t size() const { return times.size(); }
    double weight_exponent() const { return 0.5 * dimension; }
};

/// Append a row with precomputed scalars; times must be strictly
/// increasing.
void append_trace_row(DecayTrace& trace, double t, double sup, double mass_val,
                      double energy_val, double hs_val);

/// Append a row computed from a field: sup over samples (plus the optional
/// 2x-upsampled refinement), mass, energy, H^s as configured.
void update_decay_trace(DecayTrace& trace, double t, const ComplexField& f,
                        const EquationSpec& eq, bool refine_sup = false);

/// Space-time Lebesgue accumulator: integrand ||u(t)||_r^q recorded per
/// sample time, integrated by trapezoid.
struct StrichartzMeter {
    double time_exponent = 10.0;   // q
    double space_exponent = 10.0;  // r
    std::vector<double> times;
    std::vector<double> integrand;  // ||u(t)||_r^q

    void record(double t, const ComplexField& u);
    void record_value(double t, double lr_norm);

    /// (int_start^end integrand dt)^(1/q); start may fall between samples
    /// (integrand interpolated linearly).  Nonincreasing in start.
    double tail(double start) const;

    /// Plain trapezoid integral of the integrand over [a, b].
    double integral(double a, double b) const;
};

/// Least-squares fit of log(value) against log(t) over the window.
struct LogLogFit {
    double slope = 0.0;
    double stderr_slope = 0.0;
    double intercept = 0.0;
    std::size_t samples = 0;
};

/// Requires >= 8 samples with t in [window_lo, window_hi], all values > 0.
LogLogFit fit_loglog(const std::vector<double>& times, const std::vector<double>& values,
                     double window_lo, double window_hi);

/// Fit of the sup-norm trace; the decay exponent comes out as the slope
/// (-d/2 expected for free evolution).
LogLogFit fit_decay_exponent(const DecayTrace& trace, double window_lo, double window_hi);

}  // namespace nlsdecay

#endif
