#include "nlsdecay/snapshot_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <nlohmann/json.hpp>

namespace nlsdecay {

namespace {

constexpr char kMagic[8] = {'N', 'L', 'S', 'N', 'A', 'P', '0', '1'};
constexpr std::uint32_t kEndianTag = 0x01020304u;

template <class T>
void put(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
void get(std::istream& is, T& v) {
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
}

std::string snapshot_name(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "snap_%06zu.fld", index);
    return buf;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const ComplexField& f) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("write_snapshot: cannot open " + tmp.string());
        os.write(kMagic, sizeof(kMagic));
        put(os, kEndianTag);
        put(os, static_cast<std::uint32_t>(f.grid.dimension));
        put(os, static_cast<std::uint32_t>(f.grid.points_per_axis));
        put(os, f.grid.half_width);
        put(os, static_cast<std::uint8_t>(f.time_stamp.has_value() ? 1 : 0));
        put(os, f.time_stamp.value_or(0.0));
        os.write(reinterpret_cast<const char*>(f.values.data()),
                 static_cast<std::streamsize>(f.values.size() * sizeof(cplx)));
        if (!os) throw std::runtime_error("write_snapshot: write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

ComplexField read_snapshot(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_snapshot: cannot open " + path.string());
    char magic[8];
    is.read(magic, sizeof(magic));
    if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw std::runtime_error("read_snapshot: bad magic in " + path.string());
    std::uint32_t endian = 0, d = 0, n = 0;
    get(is, endian);
    if (endian != kEndianTag)
        throw std::runtime_error("read_snapshot: byte order mismatch in " + path.string());
    get(is, d);
    get(is, n);
    double half_width = 0.0;
    get(is, half_width);
    std::uint8_t has_time = 0;
    double time = 0.0;
    get(is, has_time);
    get(is, time);
    ComplexField f(make_grid(static_cast<int>(d), half_width, static_cast<int>(n)));
    is.read(reinterpret_cast<char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(cplx)));
    if (!is) throw std::runtime_error("read_snapshot: truncated file " + path.string());
    if (has_time) f.time_stamp = time;
    return f;
}

void atomic_write_text(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("atomic_write_text: cannot open " + tmp.string());
        os << content;
    }
    std::filesystem::rename(tmp, path);
}

namespace {

nlohmann::json traj_manifest(const EquationSpec& eq, const GridSpec& grid,
                             const std::vector<double>& times,
                             const std::vector<std::string>& files) {
    nlohmann::json j;
    j["format"] = "nlsdecay-trajectory-1";
    j["equation"] = {{"dimension", eq.dimension},
                     {"power", eq.power_q},
                     {"linear", eq.linear}};
    j["grid"] = {{"dimension", grid.dimension},
                 {"half_width", grid.half_width},
                 {"points_per_axis", grid.points_per_axis}};
    nlohmann::json snaps = nlohmann::json::array();
    for (std::size_t i = 0; i < times.size(); ++i)
        snaps.push_back({{"time", times[i]}, {"file", files[i]}});
    j["snapshots"] = snaps;
    return j;
}

}  // namespace

void write_trajectory(const std::filesystem::path& dir, const TrajectoryHistory& history) {
    std::filesystem::create_directories(dir);
    std::vector<double> times;
    std::vector<std::string> files;
    for (std::size_t i = 0; i < history.size(); ++i) {
        const std::string name = snapshot_name(i);
        write_snapshot(dir / name, history.field_at(i));
        times.push_back(history.time_at(i));
        files.push_back(name);
    }
    atomic_write_text(dir / "traj.json",
                      traj_manifest(history.equation, history.grid, times, files).dump(2));
}

DiskTrajectory::DiskTrajectory(const std::filesystem::path& dir) : dir_(dir) {
    std::ifstream is(dir / "traj.json");
    if (!is)
        throw std::runtime_error("DiskTrajectory: missing traj.json in " + dir.string());
    nlohmann::json j;
    is >> j;
    if (j.value("format", "") != std::string("nlsdecay-trajectory-1"))
        throw std::runtime_error("DiskTrajectory: unknown format in " + dir.string());
    equation_.dimension = j["equation"]["dimension"].get<int>();
    equation_.power_q = j["equation"]["power"].get<int>();
    equation_.linear = j["equation"]["linear"].get<bool>();
    grid_ = make_grid(j["grid"]["dimension"].get<int>(),
                      j["grid"]["half_width"].get<double>(),
                      j["grid"]["points_per_axis"].get<int>());
    for (const auto& s : j["snapshots"]) {
        times_.push_back(s["time"].get<double>());
        files_.push_back(s["file"].get<std::string>());
    }
}

ComplexField DiskTrajectory::load(std::size_t i) const {
    return read_snapshot(dir_ / files_[i]);
}

TrajectoryWriter::TrajectoryWriter(const std::filesystem::path& dir, const EquationSpec& eq,
                                   const GridSpec& grid)
    : dir_(dir), eq_(eq), grid_(grid) {
    std::filesystem::create_directories(dir_);
}

void TrajectoryWriter::restore(std::vector<double> times, std::vector<std::string> files) {
    times_ = std::move(times);
    files_ = std::move(files);
}

void TrajectoryWriter::add(double t, const ComplexField& f) {
    const std::string name = snapshot_name(times_.size());
    const auto path = dir_ / name;
    if (!std::filesystem::exists(path)) write_snapshot(path, f);
    times_.push_back(t);
    files_.push_back(name);
}

void TrajectoryWriter::finalize() {
    atomic_write_text(dir_ / "traj.json",
                      traj_manifest(eq_, grid_, times_, files_).dump(2));
}

}  // namespace nlsdecay
