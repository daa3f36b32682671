#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "jumpplan/model.hpp"
#include "jumpplan/task.hpp"

namespace jumpplan {

struct AxisRange {
  double min = 0.0;
  double max = 0.0;

  double width() const { return max - min; }
  bool contains(double v) const { return v >= min && v <= max; }
};

/// Axis ranges for (x_c, z_c, theta).
using CSpaceRanges = std::array<AxisRange, 3>;

/// Admissible phase durations.
struct TimeSpace {
  double lower = 0.1;
  double upper = 0.5;

  bool contains(double d) const { return d >= lower && d <= upper; }
};

/// Dense feasibility grid over body configurations. Grid points are cell
/// centers; index = (ix * n + iz) * n + itheta.
struct CSpaceGrid {
  JumpTask task = JumpTask::front;
  CSpaceRanges ranges{};
  std::uint32_t divisions = 0;
  std::uint64_t params_hash = 0;
  /// Stance geometry the grid was built against (plane angle is irrelevant).
  Stance stance;
  std::vector<bool> occupancy;
  /// (x, z) cells with at least one feasible theta, index ix * n + iz. Used
  /// for flip attitudes outside the theta range; rebuilt by build and load.
  std::vector<bool> marginal;

  std::size_t point_count() const {
    return static_cast<std::size_t>(divisions) * divisions * divisions;
  }
  std::size_t index(std::size_t ix, std::size_t iz, std::size_t it) const {
    return (ix * divisions + iz) * divisions + it;
  }
  Vec3 center(std::size_t ix, std::size_t iz, std::size_t it) const;
  std::size_t feasible_count() const;
  void refresh_marginal();
};

/// Per-constraint failure counts from a feasibility sweep. A point counts once
/// per constraint it violates.
struct FeasibilityStats {
  std::size_t evaluated = 0;
  std::size_t feasible = 0;
  std::size_t unreachable = 0;
  std::size_t hip_limit = 0;
  std::size_t knee_limit = 0;
  std::size_t hip_clearance = 0;
  std::size_t knee_clearance = 0;
  /// CoM at or below the clearance height.
  std::size_t body_clearance = 0;

  std::string summary() const;
};

namespace cspace {

/// Stock ranges: x within 0.35 m of the initial CoM, z in [0.08, 0.45],
/// theta in [-pi/2, pi/2].
CSpaceRanges default_ranges(const BodyState& initial);

/// Legs that must stand on the stance feet for this task's grid.
std::vector<LegPair> grid_pairs(JumpTask task);

/// Direct constraint check of one configuration against the stance feet of
/// the given pairs. The CoM itself must also clear the ground.
bool feasible(const RobotParams& params, const Stance& stance, const std::vector<LegPair>& pairs,
              const Vec3& config, FeasibilityStats* stats = nullptr);

/// Throws ContractError for divisions < 2 or empty ranges and
/// EmptyCSpaceError when no point is feasible.
CSpaceGrid build(const RobotParams& params, JumpTask task, const CSpaceRanges& ranges,
                 std::uint32_t divisions, FeasibilityStats* stats = nullptr);
CSpaceGrid build(const RobotParams& params, JumpTask task, std::uint32_t divisions = 50);

/// Nearest-cell membership. For flip tasks a theta outside the range falls
/// back to the theta-marginalized (x, z) grid.
bool contains(const CSpaceGrid& grid, const Vec3& config);

/// Byte size of the file header.
inline constexpr std::size_t kHeaderBytes = 104;

std::vector<std::uint8_t> serialize(const CSpaceGrid& grid);
CSpaceGrid deserialize(const std::vector<std::uint8_t>& bytes);
void save(const CSpaceGrid& grid, const std::filesystem::path& path);
CSpaceGrid load(const std::filesystem::path& path);

}  // namespace cspace
}  // namespace jumpplan
