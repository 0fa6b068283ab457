#ifndef NLSDECAY_ORACLES_HPP
#define NLSDECAY_ORACLES_HPP

#include <array>

#include "nlsdecay/duhamel.hpp"
#include "nlsdecay/field.hpp"

namespace nlsdecay {

/// Gaussian profile amplitude * exp(-|x - center|^2 / (2 width^2)).
/// Resolution wants width >= 4h and half_width >= 8*width; violations are
/// allowed but reported by resolution_ok().
struct GaussianDatum {
    double width = 1.0;
    cplx amplitude = cplx(1.0, 0.0);
    std::array<double, 3> center{0.0, 0.0, 0.0};

    bool resolution_ok(const GridSpec& grid) const {
        return width >= 4.0 * grid.spacing() && grid.half_width >= 8.0 * width;
    }
};

ComplexField sample_gaussian(const GaussianDatum& g, const GridSpec& grid);

/// Closed-form free evolution of the Gaussian under i u_t + Lap u = 0:
///   u(t,x) = A (s0/s)^(d/2) exp(-|x-c|^2/(2s)),  s = width^2 + 2 i t.
/// An independent oracle for the spectral propagator; the two agree to
/// ~1e-8 relative sup error inside the validity window.
ComplexField gaussian_free_evolution(const GaussianDatum& g, double t, const GridSpec& grid);

/// Sup norm of the closed-form evolution, |A| (s0/|s|)^(d/2), no grid.
double gaussian_free_sup(const GaussianDatum& g, double t, int dimension);

/// ||e^{it Lap} u0||_inf * t^(d/2) / ||u0||_1.  For Gaussian data this
/// approaches (4 pi)^(-d/2) as t grows.
double dispersive_ratio(const ComplexField& u0, double t, int dimension);

/// The large-t limit of the ratio for any L1 datum, (4 pi)^(-d/2).
double dispersive_ratio_limit(int dimension);

struct PseudoConformalResult {
    ComplexField u;
    bool time_interpolated = false;  // v(1/t) taken between snapshots
    double bracket_gap = 0.0;        // snapshot spacing around 1/t when interpolated
};

/// u(t,x) = t^(-d/2) conj(v)(1/t, x/t) e^{i|x|^2/(4t)} built from a stored
/// v-trajectory: v(1/t) linearly interpolated in time if 1/t falls between
/// snapshots, evaluated at x/t by trigonometric interpolation (exact for
/// band-limited v).  Requires t > 0, 1/t inside the stored time range, and
/// x/t inside v's box for every target point.
PseudoConformalResult pseudo_conformal(const SnapshotSeries& v_history, double t,
                                       const GridSpec& target_grid);

}  // namespace nlsdecay

#endif
