#ifndef NLSDECAY_FIELD_HPP
#define NLSDECAY_FIELD_HPP

#include <complex>
#include <optional>
#include <vector>

#include "nlsdecay/grid.hpp"

namespace nlsdecay {

using cplx = std::complex<double>;

/// Complex samples of u(t, .) on a grid, in the frozen row-major order.
struct ComplexField {
    GridSpec grid;
    std::vector<cplx> values;
    std::optional<double> time_stamp;

    ComplexField() = default;
    explicit ComplexField(const GridSpec& g, cplx fill = cplx(0.0, 0.0))
        : grid(g), values(g.total_points(), fill) {}

    std::size_t size() const { return values.size(); }
};

/// Fourier coefficients u_hat(k) on the dual lattice, flat index order
/// matching the sample order.  Normalized so that u_hat(k) approximates
/// the integral transform:  u_hat(k) = h^d * sum_x u(x) e^{-i k.x},
/// u(x) = (2l)^{-d} * sum_k u_hat(k) e^{i k.x}.  Parseval then reads
/// sum_x |u|^2 h^d = (2l)^{-d} sum_k |u_hat|^2.
struct SpectralField {
    GridSpec grid;
    std::vector<cplx> values;

    SpectralField() = default;
    explicit SpectralField(const GridSpec& g, cplx fill = cplx(0.0, 0.0))
        : grid(g), values(g.total_points(), fill) {}

    std::size_t size() const { return values.size(); }
};

}  // namespace nlsdecay

#endif
