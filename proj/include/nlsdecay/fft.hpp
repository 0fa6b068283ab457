#ifndef NLSDECAY_FFT_HPP
#define NLSDECAY_FFT_HPP

#include <functional>
#include <memory>

#include "nlsdecay/field.hpp"
#include "nlsdecay/grid.hpp"

namespace nlsdecay {

/// FFTW-backed discrete Fourier transform for one grid shape.  Plans are
/// created once (FFTW_ESTIMATE, serial) so identical input bits give
/// identical output bits on every call regardless of worker count.
/// Instances are not safe for concurrent use; the free functions below
/// keep one instance per thread.
class Transformer {
  public:
    explicit Transformer(const GridSpec& grid);
    ~Transformer();
    Transformer(const Transformer&) = delete;
    Transformer& operator=(const Transformer&) = delete;

    SpectralField forward(const ComplexField& f) const;
    ComplexField inverse(const SpectralField& F) const;

    const GridSpec& grid() const { return grid_; }

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    GridSpec grid_;
};

/// Transform with the normalization documented on SpectralField.  Round
/// trip is the identity to ~1e-15 relative; Parseval holds between the
/// grid quadrature L2 norm and the spectral sum.
SpectralField forward_transform(const ComplexField& f);
ComplexField inverse_transform(const SpectralField& F);

/// Pointwise product in frequency space, m evaluated on the wavevector of
/// each lattice site.
SpectralField apply_multiplier(const SpectralField& F,
                               const std::function<cplx(const std::array<double, 3>&)>& m);

/// Sample a pointwise closure on the grid.  Throws if any sample is
/// non-finite, naming the offending coordinate.
ComplexField sample_function(const GridSpec& grid,
                             const std::function<cplx(const std::array<double, 3>&)>& f);

/// 2/3-rule dealias weights: 1 where |k_axis| <= (2/3) k_max on every
/// axis, 0 outside.  Flat index order.
std::vector<double> dealias_mask(const GridSpec& grid);

/// Trigonometric interpolation onto a grid refined by `factor` per axis
/// (same box).  Exact for band-limited fields.
ComplexField upsample(const ComplexField& f, int factor);

/// Same refinement starting from the spectrum (skips one transform).
ComplexField upsample_spectrum(const SpectralField& F, int factor);

/// Max |f| over the 2x-upsampled samples; tightens the gap between the
/// grid max and the true sup for band-limited fields.
double sup_norm_refined(const ComplexField& f);

}  // namespace nlsdecay

#endif
