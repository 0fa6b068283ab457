#include "nlsdecay/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nlsdecay {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

double GridSpec::volume_element() const {
    double v = 1.0;
    for (int a = 0; a < dimension; ++a) v *= spacing();
    return v;
}

double GridSpec::box_volume() const {
    double v = 1.0;
    for (int a = 0; a < dimension; ++a) v *= 2.0 * half_width;
    return v;
}

std::size_t GridSpec::total_points() const {
    std::size_t t = 1;
    for (int a = 0; a < dimension; ++a) t *= static_cast<std::size_t>(points_per_axis);
    return t;
}

std::array<int, 3> GridSpec::unflatten(std::size_t idx) const {
    std::array<int, 3> ia{0, 0, 0};
    const std::size_t n = static_cast<std::size_t>(points_per_axis);
    for (int a = dimension - 1; a >= 0; --a) {
        ia[static_cast<std::size_t>(a)] = static_cast<int>(idx % n);
        idx /= n;
    }
    return ia;
}

std::size_t GridSpec::flatten(const std::array<int, 3>& ia) const {
    std::size_t idx = 0;
    for (int a = 0; a < dimension; ++a)
        idx = idx * static_cast<std::size_t>(points_per_axis) +
              static_cast<std::size_t>(ia[static_cast<std::size_t>(a)]);
    return idx;
}

std::array<double, 3> GridSpec::point(std::size_t idx) const {
    const auto ia = unflatten(idx);
    std::array<double, 3> x{0.0, 0.0, 0.0};
    for (int a = 0; a < dimension; ++a)
        x[static_cast<std::size_t>(a)] = coordinate(ia[static_cast<std::size_t>(a)]);
    return x;
}

GridSpec make_grid(int dimension, double half_width, int points_per_axis) {
    if (dimension < 1 || dimension > 3)
        throw std::invalid_argument("make_grid: dimension must be 1, 2 or 3, got " +
                                    std::to_string(dimension));
    if (!(half_width > 0.0))
        throw std::invalid_argument("make_grid: half_width must be positive");
    if (points_per_axis < 8 || !is_power_of_two(points_per_axis))
        throw std::invalid_argument(
            "make_grid: points_per_axis must be a power of two >= 8, got " +
            std::to_string(points_per_axis));
    return GridSpec{dimension, half_width, points_per_axis};
}

FrequencyLattice::FrequencyLattice(const GridSpec& grid) : grid_(grid) {
    const int n = grid.points_per_axis;
    const double dk = M_PI / grid.half_width;
    axis_.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const int sgn = (j < n / 2) ? j : j - n;
        axis_[static_cast<std::size_t>(j)] = dk * sgn;
    }
    k2_.resize(grid.total_points());
    const std::size_t total = k2_.size();
    for (std::size_t idx = 0; idx < total; ++idx) {
        const auto ia = grid.unflatten(idx);
        double s = 0.0;
        for (int a = 0; a < grid.dimension; ++a) {
            const double k = axis_[static_cast<std::size_t>(ia[static_cast<std::size_t>(a)])];
            s += k * k;
        }
        k2_[idx] = s;
    }
}

double FrequencyLattice::max_axis_wavenumber() const {
    return (M_PI / grid_.half_width) * (grid_.points_per_axis / 2);
}

std::array<double, 3> FrequencyLattice::wavevector(std::size_t idx) const {
    const auto ia = grid_.unflatten(idx);
    std::array<double, 3> k{0.0, 0.0, 0.0};
    for (int a = 0; a < grid_.dimension; ++a)
        k[static_cast<std::size_t>(a)] =
            axis_[static_cast<std::size_t>(ia[static_cast<std::size_t>(a)])];
    return k;
}

}  // namespace nlsdecay
