#include "nlsdecay/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "nlsdecay/kernels.hpp"

namespace nlsdecay {

namespace {
// The FFTW planner is not thread-safe.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

struct Transformer::Impl {
    fftw_complex* in = nullptr;
    fftw_complex* out = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    // (-1)^(j0+j1+...) per flat index; carries the e^{ik l} shift so that
    // spectral values are samples of the integral transform.
    std::vector<double> parity;
};

Transformer::Transformer(const GridSpec& grid) : impl_(new Impl), grid_(grid) {
    const std::size_t total = grid.total_points();
    impl_->in = fftw_alloc_complex(total);
    impl_->out = fftw_alloc_complex(total);
    if (!impl_->in || !impl_->out) throw std::bad_alloc();
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        int dims[3] = {grid.points_per_axis, grid.points_per_axis, grid.points_per_axis};
        impl_->fwd = fftw_plan_dft(grid.dimension, dims, impl_->in, impl_->out,
                                   FFTW_FORWARD, FFTW_ESTIMATE);
        impl_->bwd = fftw_plan_dft(grid.dimension, dims, impl_->in, impl_->out,
                                   FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    impl_->parity.resize(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        const auto ia = grid.unflatten(idx);
        int s = 0;
        for (int a = 0; a < grid.dimension; ++a) s += ia[static_cast<std::size_t>(a)];
        impl_->parity[idx] = (s & 1) ? -1.0 : 1.0;
    }
}

Transformer::~Transformer() {
    if (impl_) {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (impl_->fwd) fftw_destroy_plan(impl_->fwd);
        if (impl_->bwd) fftw_destroy_plan(impl_->bwd);
        if (impl_->in) fftw_free(impl_->in);
        if (impl_->out) fftw_free(impl_->out);
    }
}

SpectralField Transformer::forward(const ComplexField& f) const {
    const std::size_t total = f.size();
    if (f.grid.dimension != grid_.dimension ||
        f.grid.points_per_axis != grid_.points_per_axis)
        throw std::invalid_argument("Transformer::forward: grid shape mismatch");
    std::memcpy(impl_->in, f.values.data(), total * sizeof(cplx));
    fftw_execute(impl_->fwd);
    SpectralField F(f.grid);
    const double hd = f.grid.volume_element();
    const cplx* src = reinterpret_cast<const cplx*>(impl_->out);
    for (std::size_t i = 0; i < total; ++i)
        F.values[i] = src[i] * (impl_->parity[i] * hd);
    return F;
}

ComplexField Transformer::inverse(const SpectralField& F) const {
    const std::size_t total = F.size();
    if (F.grid.dimension != grid_.dimension ||
        F.grid.points_per_axis != grid_.points_per_axis)
        throw std::invalid_argument("Transformer::inverse: grid shape mismatch");
    cplx* dst = reinterpret_cast<cplx*>(impl_->in);
    for (std::size_t i = 0; i < total; ++i) dst[i] = F.values[i] * impl_->parity[i];
    fftw_execute(impl_->bwd);
    ComplexField f(F.grid);
    const double invvol = 1.0 / F.grid.box_volume();
    const cplx* src = reinterpret_cast<const cplx*>(impl_->out);
    for (std::size_t i = 0; i < total; ++i) f.values[i] = src[i] * invvol;
    return f;
}

namespace {

Transformer& cached_transformer(const GridSpec& grid) {
    thread_local std::map<std::pair<int, int>, std::unique_ptr<Transformer>> cache;
    const auto key = std::make_pair(grid.dimension, grid.points_per_axis);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::make_unique<Transformer>(grid)).first;
    return *it->second;
}

}  // namespace

SpectralField forward_transform(const ComplexField& f) {
    return cached_transformer(f.grid).forward(f);
}

ComplexField inverse_transform(const SpectralField& F) {
    ComplexField f = cached_transformer(F.grid).inverse(F);
    return f;
}

SpectralField apply_multiplier(const SpectralField& F,
                               const std::function<cplx(const std::array<double, 3>&)>& m) {
    const FrequencyLattice lattice(F.grid);
    SpectralField out = F;
    const std::size_t total = out.size();
    for (std::size_t i = 0; i < total; ++i) out.values[i] *= m(lattice.wavevector(i));
    return out;
}

ComplexField sample_function(const GridSpec& grid,
                             const std::function<cplx(const std::array<double, 3>&)>& f) {
    ComplexField out(grid);
    const std::size_t total = out.size();
    for (std::size_t i = 0; i < total; ++i) {
        const auto x = grid.point(i);
        const cplx v = f(x);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            std::ostringstream os;
            os << "sample_function: non-finite sample at (";
            for (int a = 0; a < grid.dimension; ++a)
                os << (a ? ", " : "") << x[static_cast<std::size_t>(a)];
            os << ")";
            throw std::runtime_error(os.str());
        }
        out.values[i] = v;
    }
    return out;
}

std::vector<double> dealias_mask(const GridSpec& grid) {
    const int n = grid.points_per_axis;
    const int keep = n / 3;  // |signed index| <= n/3  <=>  |k| <= (2/3) k_max
    std::vector<double> mask(grid.total_points(), 1.0);
    const std::size_t total = mask.size();
    for (std::size_t idx = 0; idx < total; ++idx) {
        const auto ia = grid.unflatten(idx);
        for (int a = 0; a < grid.dimension; ++a) {
            const int j = ia[static_cast<std::size_t>(a)];
            const int s = (j < n / 2) ? j : j - n;
            if (s > keep || s < -keep) {
                mask[idx] = 0.0;
                break;
            }
        }
    }
    return mask;
}

ComplexField upsample_spectrum(const SpectralField& F, int factor) {
    if (factor < 1) throw std::invalid_argument("upsample: factor must be >= 1");
    if (factor == 1) return inverse_transform(F);
    const int n = F.grid.points_per_axis;
    const int nn = n * factor;
    const GridSpec big{F.grid.dimension, F.grid.half_width, nn};
    SpectralField Fbig(big);
    const std::size_t total = F.size();
    for (std::size_t idx = 0; idx < total; ++idx) {
        const auto ia = F.grid.unflatten(idx);
        std::array<int, 3> ta{0, 0, 0};
        for (int a = 0; a < F.grid.dimension; ++a) {
            const int j = ia[static_cast<std::size_t>(a)];
            const int s = (j < n / 2) ? j : j - n;
            ta[static_cast<std::size_t>(a)] = (s >= 0) ? s : s + nn;
        }
        Fbig.values[big.flatten(ta)] = F.values[idx];
    }
    return inverse_transform(Fbig);
}

ComplexField upsample(const ComplexField& f, int factor) {
    if (factor == 1) return f;
    ComplexField out = upsample_spectrum(forward_transform(f), factor);
    out.time_stamp = f.time_stamp;
    return out;
}

double sup_norm_refined(const ComplexField& f) {
    const ComplexField fine = upsample(f, 2);
    return kernels::max_abs(fine.values);
}

}  // namespace nlsdecay
