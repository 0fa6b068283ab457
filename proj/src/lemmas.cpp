#include "nlsdecay/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nlsdecay/fft.hpp"
#include "nlsdecay/kernels.hpp"
#include "nlsdecay/norms.hpp"

namespace nlsdecay {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t mode_hash(std::uint64_t seed, int s0, int s1, int s2) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(s0) + (1 << 20)));
    h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(s1) + (1 << 20)));
    h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(s2) + (1 << 20)));
    return h;
}

}  // namespace

ComplexField random_band_limited(const RandomFieldSpec& spec) {
    const GridSpec& grid = spec.grid;
    const double nyquist = M_PI / grid.half_width * (grid.points_per_axis / 2);
    if (spec.spectral_cutoff > nyquist + 1e-12)
        throw std::invalid_argument(
            "random_band_limited: cutoff exceeds the lattice Nyquist wavenumber");
    const double K2 = spec.spectral_cutoff * spec.spectral_cutoff;
    const int n = grid.points_per_axis;
    SpectralField F(grid);
    const double vol = grid.box_volume();
    const double dk = M_PI / grid.half_width;
    const int reach = std::min(n / 2 - 1,
                               static_cast<int>(std::floor(spec.spectral_cutoff / dk)));
    const int d = grid.dimension;
    std::array<int, 3> lo{-reach, -reach, -reach}, hi{reach, reach, reach};
    for (int a = d; a < 3; ++a) lo[static_cast<std::size_t>(a)] = hi[static_cast<std::size_t>(a)] = 0;
    for (int s0 = lo[0]; s0 <= hi[0]; ++s0)
        for (int s1 = lo[1]; s1 <= hi[1]; ++s1)
            for (int s2 = lo[2]; s2 <= hi[2]; ++s2) {
                const double k2 = dk * dk * (double(s0) * s0 + double(s1) * s1 +
                                             double(s2) * s2);
                if (k2 > K2 + 1e-12) continue;
                const std::uint64_t h = mode_hash(spec.seed, s0, s1, s2);
                const double theta =
                    2.0 * M_PI * (static_cast<double>(h >> 11) * 0x1.0p-53);
                const double amp =
                    (k2 == 0.0) ? 1.0 : std::pow(k2, -0.5 * spec.spectral_decay);
                std::array<int, 3> ja{0, 0, 0};
                const int sv[3] = {s0, s1, s2};
                for (int a = 0; a < d; ++a)
                    ja[static_cast<std::size_t>(a)] = (sv[a] >= 0) ? sv[a] : sv[a] + n;
                // coefficient of e^{ikx}; our spectral convention carries (2l)^d
                F.values[grid.flatten(ja)] =
                    vol * amp * cplx(std::cos(theta), std::sin(theta));
            }
    ComplexField f = inverse_transform(F);
    f.time_stamp.reset();
    return f;
}

namespace {

void require_d3_nonzero(const ComplexField& f, const char* what) {
    if (f.grid.dimension != 3)
        throw std::invalid_argument(std::string(what) + ": dimension must be 3");
    bool nonzero = false;
    for (const cplx& z : f.values)
        if (z != cplx(0.0, 0.0)) {
            nonzero = true;
            break;
        }
    if (!nonzero) throw std::invalid_argument(std::string(what) + ": zero field");
}

}  // namespace

double interpolation_ratio_h3(const ComplexField& f) {
    require_d3_nonzero(f, "interpolation_ratio_h3");
    const SpectralField F = forward_transform(f);
    const double sup = kernels::max_abs(upsample_spectrum(F, 2).values);
    const double a = spectral_l2_norm(F);
    const double b = sobolev_norm(F, 3.0);
    return sup / std::pow(a * a * b * b * b, 0.2);
}

double interpolation_ratio_h4(const ComplexField& f) {
    require_d3_nonzero(f, "interpolation_ratio_h4");
    // exponents 2/5 + 6/25 + 9/25 over the common denominator 25
    static_assert(2 * 5 + 6 + 9 == 25, "interpolation exponents must sum to one");
    const SpectralField F = forward_transform(f);
    const double sup = kernels::max_abs(upsample_spectrum(F, 2).values);
    const double a1 = spectral_l2_norm(F);
    const double a2 = gradient_l2_norm(F);
    const double b = sobolev_norm(F, 4.0);
    return sup / (std::pow(a1, 2.0 / 5.0) * std::pow(a2, 6.0 / 25.0) *
                  std::pow(b, 9.0 / 25.0));
}

double gradient_embedding_ratio(const ComplexField& f) {
    require_d3_nonzero(f, "gradient_embedding_ratio");
    return gradient_sup(f) / sobolev_norm(f, 3.0);
}

LemmaSuite lemma_suite_from_name(const std::string& name) {
    if (name == "ele") return LemmaSuite::H3Interp;
    if (name == "ele2") return LemmaSuite::H4Interp;
    if (name == "gradient-embedding") return LemmaSuite::GradientEmbedding;
    throw std::invalid_argument("unknown lemma suite: " + name);
}

std::string lemma_suite_name(LemmaSuite which) {
    switch (which) {
        case LemmaSuite::H3Interp: return "ele";
        case LemmaSuite::H4Interp: return "ele2";
        case LemmaSuite::GradientEmbedding: return "gradient-embedding";
    }
    return "?";
}

double lemma_ratio(LemmaSuite which, const ComplexField& f) {
    switch (which) {
        case LemmaSuite::H3Interp: return interpolation_ratio_h3(f);
        case LemmaSuite::H4Interp: return interpolation_ratio_h4(f);
        case LemmaSuite::GradientEmbedding: return gradient_embedding_ratio(f);
    }
    throw std::logic_error("lemma_ratio: bad suite");
}

LemmaReport run_lemma_suite(LemmaSuite which, const RandomFieldSpec& spec,
                            std::size_t n_samples) {
    if (n_samples < 1)
        throw std::invalid_argument("run_lemma_suite: need n_samples >= 1");
    LemmaReport report;
    report.which = which;
    report.sample_count = n_samples;

    std::vector<double> ratios(n_samples, 0.0);
    for (std::size_t i = 0; i < n_samples; ++i) {
        RandomFieldSpec s = spec;
        s.seed = spec.seed + i;
        const ComplexField f = random_band_limited(s);
        ratios[i] = lemma_ratio(which, f);
    }

    report.max_ratio = ratios[0];
    report.min_ratio = ratios[0];
    report.offending_seed = spec.seed;
    for (std::size_t i = 1; i < n_samples; ++i) {
        if (ratios[i] > report.max_ratio) {
            report.max_ratio = ratios[i];
            report.offending_seed = spec.seed + i;
        }
        report.min_ratio = std::min(report.min_ratio, ratios[i]);
    }

    constexpr std::size_t kBuckets = 40;
    report.histogram.assign(kBuckets, 0);
    report.hist_upper = report.max_ratio;
    for (double r : ratios) {
        std::size_t b = (report.hist_upper > 0.0)
                            ? static_cast<std::size_t>(r / report.hist_upper *
                                                       (kBuckets - 1))
                            : 0;
        if (b >= kBuckets) b = kBuckets - 1;
        ++report.histogram[b];
    }
    return report;
}

}  // namespace nlsdecay
