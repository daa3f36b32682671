#include "jumpplan/cspace.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numbers>

#include "jumpplan/error.hpp"
#include "jumpplan/kinematics.hpp"

namespace jumpplan {

Vec3 CSpaceGrid::center(std::size_t ix, std::size_t iz, std::size_t it) const {
  const double n = divisions;
  auto at = [n](const AxisRange& r, std::size_t i) {
    return r.min + (static_cast<double>(i) + 0.5) * r.width() / n;
  };
  return {at(ranges[0], ix), at(ranges[1], iz), at(ranges[2], it)};
}

std::size_t CSpaceGrid::feasible_count() const {
  return static_cast<std::size_t>(std::count(occupancy.begin(), occupancy.end(), true));
}

void CSpaceGrid::refresh_marginal() {
  const std::size_t n = divisions;
  marginal.assign(n * n, false);
  for (std::size_t ix = 0; ix < n; ++ix) {
    for (std::size_t iz = 0; iz < n; ++iz) {
      for (std::size_t it = 0; it < n; ++it) {
        if (occupancy[index(ix, iz, it)]) {
          marginal[ix * n + iz] = true;
          break;
        }
      }
    }
  }
}

std::string FeasibilityStats::summary() const {
  return std::to_string(feasible) + "/" + std::to_string(evaluated) +
         " feasible; unreachable " + std::to_string(unreachable) + ", hip limit " +
         std::to_string(hip_limit) + ", knee limit " + std::to_string(knee_limit) +
         ", hip clearance " + std::to_string(hip_clearance) + ", knee clearance " +
         std::to_string(knee_clearance) + ", body clearance " + std::to_string(body_clearance);
}

namespace cspace {

CSpaceRanges default_ranges(const BodyState& initial) {
  return {AxisRange{initial.x_c - 0.35, initial.x_c + 0.35}, AxisRange{0.08, 0.45},
          AxisRange{-std::numbers::pi / 2, std::numbers::pi / 2}};
}

std::vector<LegPair> grid_pairs(JumpTask task) {
  const TaskLayout lay = layout(task);
  if (lay.grid_needs_lead) return {lay.push, lay.lead};
  return {lay.push};
}

bool feasible(const RobotParams& params, const Stance& stance, const std::vector<LegPair>& pairs,
              const Vec3& config, FeasibilityStats* stats) {
  BodyState body;
  body.x_c = config.x();
  body.z_c = config.y();
  body.theta = config.z();
  body.plane = stance.plane;
  bool ok = true;
  if (!(body.z_c > params.min_clearance)) {
    if (stats == nullptr) return false;
    ++stats->body_clearance;
    ok = false;
  }
  for (LegPair pair : pairs) {
    const Vec2& foot = pair == stance.lead ? stance.lead_foot : stance.push_foot;
    LegPoints lp;
    if (kin::try_joint_positions(body, planar_hip_offset(params, stance.plane, pair), foot, params,
                                 lp) > 0.0) {
      if (stats == nullptr) return false;
      ++stats->unreachable;
      ok = false;
      continue;
    }
    const LegJointState& q = lp.joints;
    const bool hip_ok = q.q_hip > params.hip_range.min && q.q_hip < params.hip_range.max;
    const bool knee_ok = q.q_knee > params.knee_range.min && q.q_knee < params.knee_range.max;
    const bool hip_clear = lp.hip.y() > params.min_clearance;
    const bool knee_clear = lp.knee.y() > params.min_clearance;
    if (hip_ok && knee_ok && hip_clear && knee_clear) continue;
    if (stats == nullptr) return false;
    ok = false;
    stats->hip_limit += hip_ok ? 0 : 1;
    stats->knee_limit += knee_ok ? 0 : 1;
    stats->hip_clearance += hip_clear ? 0 : 1;
    stats->knee_clearance += knee_clear ? 0 : 1;
  }
  return ok;
}

CSpaceGrid build(const RobotParams& params, JumpTask task, const CSpaceRanges& ranges,
                 std::uint32_t divisions, FeasibilityStats* stats) {
  if (divisions < 2) throw ContractError("cspace::build: divisions must be at least 2");
  for (const AxisRange& r : ranges) {
    if (!(r.min < r.max) || !std::isfinite(r.min) || !std::isfinite(r.max)) {
      throw ContractError("cspace::build: axis ranges must be finite with min < max");
    }
  }
  params.validate();

  CSpaceGrid grid;
  grid.task = task;
  grid.ranges = ranges;
  grid.divisions = divisions;
  grid.params_hash = params.hash();
  grid.stance = make_stance(params, task, default_initial_state(task));
  grid.occupancy.assign(grid.point_count(), false);

  const std::vector<LegPair> pairs = grid_pairs(task);
  FeasibilityStats local;
  const std::size_t n = divisions;
  for (std::size_t ix = 0; ix < n; ++ix) {
    for (std::size_t iz = 0; iz < n; ++iz) {
      for (std::size_t it = 0; it < n; ++it) {
        const bool ok = feasible(params, grid.stance, pairs, grid.center(ix, iz, it), &local);
        grid.occupancy[grid.index(ix, iz, it)] = ok;
        ++local.evaluated;
        local.feasible += ok ? 1 : 0;
      }
    }
  }
  if (stats != nullptr) *stats = local;
  if (local.feasible == 0) {
    throw EmptyCSpaceError("C-space for task " + std::string(to_string(task)) +
                           " is empty: " + local.summary());
  }
  grid.refresh_marginal();
  return grid;
}

CSpaceGrid build(const RobotParams& params, JumpTask task, std::uint32_t divisions) {
  return build(params, task, default_ranges(default_initial_state(task)), divisions);
}

namespace {

// Nearest cell along one axis, or -1 outside the range.
long cell_of(const AxisRange& r, std::uint32_t n, double v) {
  if (!(v >= r.min && v <= r.max)) return -1;
  const double f = (v - r.min) / r.width() * n;
  return std::clamp(static_cast<long>(std::floor(f)), 0L, static_cast<long>(n) - 1);
}

}  // namespace

bool contains(const CSpaceGrid& grid, const Vec3& config) {
  const long ix = cell_of(grid.ranges[0], grid.divisions, config.x());
  const long iz = cell_of(grid.ranges[1], grid.divisions, config.y());
  if (ix < 0 || iz < 0) return false;
  const long it = cell_of(grid.ranges[2], grid.divisions, config.z());
  if (it < 0) {
    if (!layout(grid.task).is_flip || !std::isfinite(config.z())) return false;
    return grid.marginal[static_cast<std::size_t>(ix) * grid.divisions +
                         static_cast<std::size_t>(iz)];
  }
  return grid.occupancy[grid.index(static_cast<std::size_t>(ix), static_cast<std::size_t>(iz),
                                   static_cast<std::size_t>(it))];
}

namespace {

constexpr char kMagic[4] = {'J', 'P', 'C', 'S'};
constexpr std::uint32_t kVersion = 1;

class Writer {
 public:
  void bytes(const char* p, std::size_t n) { out_.insert(out_.end(), p, p + n); }
  void u32(std::uint32_t v) { le(v, 4); }
  void u64(std::uint64_t v) { le(v, 8); }
  void f64(double v) { le(std::bit_cast<std::uint64_t>(v), 8); }
  std::vector<std::uint8_t>& data() { return out_; }

 private:
  void le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& in) : in_(in) {}
  void need(std::size_t n) const {
    if (pos_ + n > in_.size()) throw FormatError("C-space file truncated");
  }
  std::uint64_t le(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(in_[pos_++]) << (8 * i);
    return v;
  }
  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
  std::uint64_t u64() { return le(8); }
  double f64() { return std::bit_cast<double>(le(8)); }
  std::uint8_t byte() {
    need(1);
    return in_[pos_++];
  }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  const std::vector<std::uint8_t>& in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> serialize(const CSpaceGrid& grid) {
  Writer w;
  w.bytes(kMagic, 4);
  w.u32(kVersion);
  w.u32(static_cast<std::uint32_t>(grid.task));
  for (const AxisRange& r : grid.ranges) {
    w.f64(r.min);
    w.f64(r.max);
  }
  w.u32(grid.divisions);
  w.u64(grid.params_hash);
  w.f64(grid.stance.lead_foot.x());
  w.f64(grid.stance.lead_foot.y());
  w.f64(grid.stance.push_foot.x());
  w.f64(grid.stance.push_foot.y());
  auto& out = w.data();
  const std::size_t bits = grid.occupancy.size();
  const std::size_t start = out.size();
  out.resize(start + (bits + 7) / 8, 0);
  for (std::size_t i = 0; i < bits; ++i) {
    if (grid.occupancy[i]) out[start + i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  }
  return out;
}

CSpaceGrid deserialize(const std::vector<std::uint8_t>& bytes) {
  Reader r(bytes);
  r.need(4);
  for (char c : kMagic) {
    if (r.byte() != static_cast<std::uint8_t>(c)) throw FormatError("not a C-space grid file");
  }
  const std::uint32_t version = r.u32();
  if (version != kVersion) {
    throw VersionError("C-space file version " + std::to_string(version) + ", expected " +
                       std::to_string(kVersion));
  }
  const std::uint32_t task = r.u32();
  if (task >= kAllTasks.size()) throw FormatError("C-space file has unknown task tag");
  CSpaceGrid grid;
  grid.task = static_cast<JumpTask>(task);
  for (AxisRange& a : grid.ranges) {
    a.min = r.f64();
    a.max = r.f64();
    if (!(a.min < a.max)) throw FormatError("C-space file has an empty axis range");
  }
  grid.divisions = r.u32();
  if (grid.divisions < 2 || grid.divisions > 2048) {
    throw FormatError("C-space file has invalid divisions");
  }
  grid.params_hash = r.u64();
  const TaskLayout lay = layout(grid.task);
  grid.stance.plane = lay.plane;
  grid.stance.lead = lay.lead;
  grid.stance.push = lay.push;
  grid.stance.lead_foot.x() = r.f64();
  grid.stance.lead_foot.y() = r.f64();
  grid.stance.push_foot.x() = r.f64();
  grid.stance.push_foot.y() = r.f64();

  const std::size_t bits = grid.point_count();
  const std::size_t packed = (bits + 7) / 8;
  if (r.remaining() < packed) throw FormatError("C-space file truncated");
  if (r.remaining() > packed) throw FormatError("C-space file has trailing bytes");
  grid.occupancy.assign(bits, false);
  for (std::size_t byte = 0; byte < packed; ++byte) {
    const std::uint8_t v = r.byte();
    for (std::size_t b = 0; b < 8 && byte * 8 + b < bits; ++b) {
      grid.occupancy[byte * 8 + b] = ((v >> b) & 1u) != 0;
    }
  }
  grid.refresh_marginal();
  return grid;
}

void save(const CSpaceGrid& grid, const std::filesystem::path& path) {
  const auto bytes = serialize(grid);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

CSpaceGrid load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

}  // namespace cspace
}  // namespace jumpplan
