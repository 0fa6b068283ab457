#include "nlsdecay/oracles.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "nlsdecay/fft.hpp"
#include "nlsdecay/kernels.hpp"
#include "nlsdecay/norms.hpp"
#include "nlsdecay/propagators.hpp"

namespace nlsdecay {

ComplexField sample_gaussian(const GaussianDatum& g, const GridSpec& grid) {
    const double inv2s2 = 1.0 / (2.0 * g.width * g.width);
    return sample_function(grid, [&](const std::array<double, 3>& x) {
        double r2 = 0.0;
        for (int a = 0; a < grid.dimension; ++a) {
            const double dx = x[static_cast<std::size_t>(a)] -
                              g.center[static_cast<std::size_t>(a)];
            r2 += dx * dx;
        }
        return g.amplitude * std::exp(-r2 * inv2s2);
    });
}

ComplexField gaussian_free_evolution(const GaussianDatum& g, double t, const GridSpec& grid) {
    const double s0 = g.width * g.width;
    const cplx s(s0, 2.0 * t);
    const cplx prefactor =
        g.amplitude * std::exp(0.5 * grid.dimension * std::log(cplx(s0, 0.0) / s));
    const cplx inv2s = cplx(1.0, 0.0) / (2.0 * s);

    // separable: exp(-|x-c|^2/(2s)) = prod_a exp(-(x_a-c_a)^2/(2s))
    const int n = grid.points_per_axis;
    std::vector<std::vector<cplx>> axis_factor(
        static_cast<std::size_t>(grid.dimension));
    for (int a = 0; a < grid.dimension; ++a) {
        auto& col = axis_factor[static_cast<std::size_t>(a)];
        col.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            const double dx = grid.coordinate(i) - g.center[static_cast<std::size_t>(a)];
            col[static_cast<std::size_t>(i)] = std::exp(-dx * dx * inv2s);
        }
    }

    ComplexField out(grid);
    out.time_stamp = t;
    const std::size_t total = out.size();
    for (std::size_t idx = 0; idx < total; ++idx) {
        const auto ia = grid.unflatten(idx);
        cplx v = prefactor;
        for (int a = 0; a < grid.dimension; ++a)
            v *= axis_factor[static_cast<std::size_t>(a)]
                            [static_cast<std::size_t>(ia[static_cast<std::size_t>(a)])];
        out.values[idx] = v;
    }
    return out;
}

double gaussian_free_sup(const GaussianDatum& g, double t, int dimension) {
    const double s0 = g.width * g.width;
    const double mod_s = std::hypot(s0, 2.0 * t);
    return std::abs(g.amplitude) * std::pow(s0 / mod_s, 0.5 * dimension);
}

double dispersive_ratio(const ComplexField& u0, double t, int dimension) {
    if (!(t > 0.0)) throw std::invalid_argument("dispersive_ratio: t must be positive");
    const double l1 = lp_norm(u0, 1.0);
    if (l1 == 0.0) throw std::invalid_argument("dispersive_ratio: zero L1 norm");
    const ComplexField ut = linear_propagate(u0, t);
    return kernels::max_abs(ut.values) * std::pow(t, 0.5 * dimension) / l1;
}

double dispersive_ratio_limit(int dimension) {
    return std::pow(4.0 * M_PI, -0.5 * dimension);
}

namespace {

// f(y) = (2l)^{-d} sum_k F_k e^{i k.y} evaluated at off-lattice points by
// per-axis contraction (a small nonuniform DFT).
ComplexField evaluate_spectral_at(const SpectralField& F, const GridSpec& target,
                                  double scale) {
    const GridSpec& src = F.grid;
    const int d = src.dimension;
    if (target.dimension != d)
        throw std::invalid_argument("evaluate_spectral_at: dimension mismatch");
    const FrequencyLattice lattice(src);
    const int n_src = src.points_per_axis;
    const int n_tgt = target.points_per_axis;

    // E[a][i][j] = e^{i k_j y_i},  y_i = scale * x_i(target)
    std::vector<std::vector<cplx>> E(static_cast<std::size_t>(d));
    for (int a = 0; a < d; ++a) {
        auto& mat = E[static_cast<std::size_t>(a)];
        mat.resize(static_cast<std::size_t>(n_tgt) * static_cast<std::size_t>(n_src));
        for (int i = 0; i < n_tgt; ++i) {
            const double y = scale * target.coordinate(i);
            for (int j = 0; j < n_src; ++j) {
                const double phi = lattice.wavenumber(j) * y;
                mat[static_cast<std::size_t>(i) * n_src + j] =
                    cplx(std::cos(phi), std::sin(phi));
            }
        }
    }

    // contract one axis at a time; dims go from (n_src)^d to n_tgt along
    // each contracted axis
    std::vector<cplx> cur = F.values;
    std::array<int, 3> dims{n_src, n_src, n_src};
    for (int a = d - 1; a >= 0; --a) {
        // contract axis a: result dims replace dims[a] with n_tgt
        std::size_t outer = 1, inner = 1;
        for (int b = 0; b < a; ++b) outer *= static_cast<std::size_t>(dims[b]);
        for (int b = a + 1; b < d; ++b) inner *= static_cast<std::size_t>(dims[b]);
        std::vector<cplx> next(outer * static_cast<std::size_t>(n_tgt) * inner,
                               cplx(0.0, 0.0));
        const auto& mat = E[static_cast<std::size_t>(a)];
        for (std::size_t o = 0; o < outer; ++o)
            for (int i = 0; i < n_tgt; ++i)
                for (int j = 0; j < n_src; ++j) {
                    const cplx e = mat[static_cast<std::size_t>(i) * n_src + j];
                    const cplx* src_row =
                        cur.data() + (o * n_src + static_cast<std::size_t>(j)) * inner;
                    cplx* dst_row =
                        next.data() + (o * n_tgt + static_cast<std::size_t>(i)) * inner;
                    for (std::size_t m = 0; m < inner; ++m) dst_row[m] += e * src_row[m];
                }
        cur = std::move(next);
        dims[a] = n_tgt;
    }

    ComplexField out(target);
    const double invvol = 1.0 / src.box_volume();
    for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = cur[i] * invvol;
    return out;
}

}  // namespace

PseudoConformalResult pseudo_conformal(const SnapshotSeries& v_history, double t,
                                       const GridSpec& target_grid) {
    if (!(t > 0.0)) throw std::invalid_argument("pseudo_conformal: t must be positive");
    const double tau = 1.0 / t;
    const std::size_t count = v_history.size();
    if (count == 0) throw std::invalid_argument("pseudo_conformal: empty history");
    const double t_first = v_history.time_at(0);
    const double t_last = v_history.time_at(count - 1);
    if (tau < t_first - 1e-12 || tau > t_last + 1e-12)
        throw std::invalid_argument("pseudo_conformal: 1/t outside the stored time range");
    if (target_grid.half_width / t > v_history.grid().half_width * (1.0 + 1e-12))
        throw std::invalid_argument("pseudo_conformal: x/t exits the stored box");

    // locate tau among snapshot times
    std::size_t hi = 0;
    while (hi < count && v_history.time_at(hi) < tau - 1e-12) ++hi;
    if (hi >= count) hi = count - 1;

    PseudoConformalResult result;
    ComplexField v_tau;
    if (std::abs(v_history.time_at(hi) - tau) <= 1e-12 * std::max(1.0, tau)) {
        v_tau = v_history.load(hi);
    } else {
        const std::size_t lo = hi - 1;
        const double t_lo = v_history.time_at(lo), t_hi = v_history.time_at(hi);
        const double lam = (tau - t_lo) / (t_hi - t_lo);
        v_tau = v_history.load(lo);
        const ComplexField v_hi = v_history.load(hi);
        for (std::size_t i = 0; i < v_tau.size(); ++i)
            v_tau.values[i] = (1.0 - lam) * v_tau.values[i] + lam * v_hi.values[i];
        result.time_interpolated = true;
        result.bracket_gap = t_hi - t_lo;
    }

    const SpectralField V = forward_transform(v_tau);
    ComplexField v_at = evaluate_spectral_at(V, target_grid, 1.0 / t);

    const double amp = std::pow(t, -0.5 * target_grid.dimension);
    const double quarter_inv_t = 0.25 / t;
    ComplexField u(target_grid);
    u.time_stamp = t;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const auto x = target_grid.point(i);
        double r2 = 0.0;
        for (int a = 0; a < target_grid.dimension; ++a)
            r2 += x[static_cast<std::size_t>(a)] * x[static_cast<std::size_t>(a)];
        const double phi = r2 * quarter_inv_t;
        u.values[i] = amp * std::conj(v_at.values[i]) * cplx(std::cos(phi), std::sin(phi));
    }
    result.u = std::move(u);
    return result;
}

}  // namespace nlsdecay
