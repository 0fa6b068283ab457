#ifndef NLSDECAY_SNAPSHOT_IO_HPP
#define NLSDECAY_SNAPSHOT_IO_HPP

#include <filesystem>
#include <string>

#include "nlsdecay/duhamel.hpp"
#include "nlsdecay/field.hpp"

namespace nlsdecay {

/// Field snapshot container, version tagged, little-endian binary:
///   magic "NLSNAP01" | u32 endian=0x01020304 | u32 d | u32 n |
///   f64 half_width | u8 has_time | f64 time | n^d x (f64 re, f64 im)
/// Samples are in the frozen row-major order.  Round-trips are bit exact.
void write_snapshot(const std::filesystem::path& path, const ComplexField& f);
ComplexField read_snapshot(const std::filesystem::path& path);

/// Atomic file replace: write to a temp name in the same directory, then
/// rename over the target.
void atomic_write_text(const std::filesystem::path& path, const std::string& content);

/// A trajectory stored as a directory: traj.json (equation, grid, snapshot
/// table) plus one snapshot file per stored time.
void write_trajectory(const std::filesystem::path& dir, const TrajectoryHistory& history);

/// Lazily loading view of a stored trajectory.
class DiskTrajectory final : public SnapshotSeries {
  public:
    explicit DiskTrajectory(const std::filesystem::path& dir);

    std::size_t size() const override { return times_.size(); }
    double time_at(std::size_t i) const override { return times_[i]; }
    ComplexField load(std::size_t i) const override;
    const GridSpec& grid() const override { return grid_; }
    const EquationSpec& equation() const override { return equation_; }

  private:
    std::filesystem::path dir_;
    GridSpec grid_;
    EquationSpec equation_;
    std::vector<double> times_;
    std::vector<std::string> files_;
};

/// Append one stored snapshot to a trajectory directory (creates
/// traj.json on the first call).  Used by the runner while a solve is in
/// flight so analyses never need the whole history in memory.
class TrajectoryWriter {
  public:
    TrajectoryWriter(const std::filesystem::path& dir, const EquationSpec& eq,
                     const GridSpec& grid);
    void add(double t, const ComplexField& f);
    /// Re-register snapshots already on disk (resume path).
    void restore(std::vector<double> times, std::vector<std::string> files);
    const std::vector<double>& times() const { return times_; }
    const std::vector<std::string>& files() const { return files_; }
    void finalize();  // writes the snapshot table into traj.json

  private:
    std::filesystem::path dir_;
    EquationSpec eq_;
    GridSpec grid_;
    std::vector<double> times_;
    std::vector<std::string> files_;
};

}  // namespace nlsdecay

#endif
