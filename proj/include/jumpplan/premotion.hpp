#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jumpplan/cspace.hpp"
#include "jumpplan/grf.hpp"
#include "jumpplan/task.hpp"

namespace jumpplan {

struct SolveConfig;

/// One stored solution of the pre-motion library.
struct PremotionEntry {
  JumpTask task = JumpTask::front;
  Vec3 target = Vec3::Zero();
  DOpt d_res;
  double fitness = 0.0;
  std::uint64_t params_hash = 0;
  /// CoM trajectory CSV, relative to the index file's directory.
  std::string trajectory;

  bool operator==(const PremotionEntry&) const = default;
};

struct PremotionLibrary {
  std::vector<PremotionEntry> entries;
  /// Lookup radius over (x, z, theta); meters and radians mixed.
  double lookup_threshold = 0.05;
  std::uint64_t params_hash = 0;
};

/// Target grid of one task: every axis is swept from min in steps of its
/// step while staying within max. A step larger than the range yields min only.
struct TargetSpec {
  JumpTask task = JumpTask::front;
  AxisRange x;
  AxisRange z;
  AxisRange theta;
  double step = 0.05;
  double theta_step = 0.05;

  std::vector<Vec3> targets() const;
};

/// Stock target ranges per task. Flip tasks step theta by pi/4.
TargetSpec default_target_spec(JumpTask task, double step = 0.05);

namespace premotion {

/// Nearest entry of the same task strictly within the lookup threshold. Ties
/// go to the lower fitness, then the lower index.
std::optional<PremotionEntry> lookup(const PremotionLibrary& library, const Vec3& target,
                                     JumpTask task);

struct BuildLog {
  std::size_t attempted = 0;
  std::vector<std::string> failures;
};

/// Cold-solves every target of every TargetSpec and keeps the converged ones. Grids
/// are taken from `grids` by task, or built at 50 divisions when missing. Seeds
/// are cfg.seed + target index. When `out_dir` is given, writes the index and
/// one trajectory CSV per entry there. Throws EmptyLibraryError when nothing
/// converges.
PremotionLibrary build_library(std::span<const TargetSpec> specs, const RobotParams& params,
                               const SolveConfig& cfg, std::span<const CSpaceGrid> grids = {},
                               const std::optional<std::filesystem::path>& out_dir = std::nullopt,
                               BuildLog* log = nullptr,
                               const std::function<void(const std::string&)>& progress = {});

inline constexpr int kIndexVersion = 1;

std::string to_yaml(const PremotionLibrary& library);
/// Throws ParseError (with line) on malformed YAML and FormatError on schema
/// violations.
PremotionLibrary from_yaml(const std::string& text);

void save(const PremotionLibrary& library, const std::filesystem::path& index_path);
/// Throws StaleLibraryError when the stored params hash differs from `params`.
PremotionLibrary load(const std::filesystem::path& index_path, const RobotParams& params);

}  // namespace premotion
}  // namespace jumpplan
