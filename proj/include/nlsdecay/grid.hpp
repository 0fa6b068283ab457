#ifndef NLSDECAY_GRID_HPP
#define NLSDECAY_GRID_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace nlsdecay {

/// Periodic computational box [-l, l)^d sampled on n points per axis.
///
/// Conventions, frozen for all serialization and analysis:
///   - spacing           h    = 2*l/n
///   - coordinates       x(i) = -l + i*h,   i = 0..n-1 per axis
///   - storage order     row-major, axis 0 slowest, last axis contiguous:
///                       index(i0,..,i_{d-1}) = ((i0*n + i1)*n + ...) + i_{d-1}
///   - wavenumbers       k(j) = (pi/l) * sgn(j),  sgn(j) = j for j < n/2,
///                       j - n otherwise (so j = n/2 is the unpaired
///                       negative-Nyquist row)
struct GridSpec {
    int dimension = 0;          // 1, 2 or 3
    double half_width = 0.0;    // l
    int points_per_axis = 0;    // n, power of two, >= 8

    double spacing() const { return 2.0 * half_width / points_per_axis; }
    double volume_element() const;
    double box_volume() const;  // (2*l)^d
    std::size_t total_points() const;

    /// Coordinate of per-axis sample index i.
    double coordinate(int i) const { return -half_width + i * spacing(); }

    /// Decompose a flat row-major index into per-axis indices.
    std::array<int, 3> unflatten(std::size_t idx) const;
    std::size_t flatten(const std::array<int, 3>& ia) const;

    /// Coordinates of the grid point at flat index idx (unused axes zero).
    std::array<double, 3> point(std::size_t idx) const;

    bool operator==(const GridSpec&) const = default;
};

/// Validated constructor; rejects d outside {1,2,3}, non-positive l,
/// and n that is not a power of two >= 8.
GridSpec make_grid(int dimension, double half_width, int points_per_axis);

/// Dual lattice of a GridSpec: per-axis wavenumbers and the |k|^2 table
/// in the same flat index order as field samples.
class FrequencyLattice {
  public:
    explicit FrequencyLattice(const GridSpec& grid);

    const GridSpec& grid() const { return grid_; }

    /// k for per-axis index j (FFT ordering, see GridSpec docs).
    double wavenumber(int j) const { return axis_[static_cast<std::size_t>(j)]; }
    const std::vector<double>& axis_wavenumbers() const { return axis_; }

    /// Largest per-axis |k| = (pi/l)*(n/2).
    double max_axis_wavenumber() const;

    /// |k|^2 at flat index, precomputed.
    const std::vector<double>& k_squared() const { return k2_; }

    /// Wavevector at flat index (unused axes zero).
    std::array<double, 3> wavevector(std::size_t idx) const;

  private:
    GridSpec grid_;
    std::vector<double> axis_;  // length n
    std::vector<double> k2_;    // length n^d
};

bool is_power_of_two(int n);

}  // namespace nlsdecay

#endif
