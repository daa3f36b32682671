#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "jumpplan/cspace.hpp"
#include "jumpplan/premotion.hpp"
#include "jumpplan/task.hpp"
#include "jumpplan/trajectory_io.hpp"

namespace jumpplan::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNotConverged = 2;

/// Environment variable naming the default configuration directory. Files
/// looked up there when the matching flag is absent: params.yaml,
/// solver.yaml, library/index.yaml and cspace/<task>.bin.
inline constexpr const char* kConfigDirVariable = "JUMPPLAN_CONFIG_DIR";

struct CSpaceBuildOptions {
  JumpTask task = JumpTask::front;
  /// "xmin xmax zmin zmax thmin thmax"; stock ranges when absent.
  std::optional<std::string> ranges;
  std::uint32_t divisions = 50;
  std::optional<std::filesystem::path> params;
  std::filesystem::path out;
};

struct PlanOptions {
  std::string target;
  JumpTask task = JumpTask::front;
  std::optional<std::filesystem::path> params;
  std::optional<std::filesystem::path> config;
  std::optional<std::filesystem::path> cspace;
  std::optional<std::filesystem::path> library;
  /// Ignore any library, including the one in the config directory.
  bool cold = false;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out = "traj.csv";
  std::filesystem::path report = "report.json";
};

struct ValidateOptions {
  std::filesystem::path trajectory;
  std::optional<std::filesystem::path> params;
  /// Only the motion plane matters.
  JumpTask task = JumpTask::front;
};

struct BenchOptions {
  std::string suite;
  std::size_t seeds = 20;
  std::vector<JumpTask> tasks{JumpTask::front};
  /// lhs suite target.
  std::string target = "0.6 0.2 0";
  /// Library step of the table1 suite when no library is given.
  double step = 0.1;
  std::optional<std::filesystem::path> params;
  std::optional<std::filesystem::path> config;
  std::optional<std::filesystem::path> library;
  std::uint64_t seed = 1;
  std::filesystem::path out;
};

struct LibraryBuildOptions {
  std::vector<JumpTask> tasks;
  double step = 0.05;
  /// Optional "min max" overrides of the stock x and z target ranges.
  std::optional<std::string> x_range;
  std::optional<std::string> z_range;
  std::optional<std::filesystem::path> params;
  std::optional<std::filesystem::path> config;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out;
};

struct ValidationTolerances {
  /// Largest state mismatch after one re-integrated step.
  double dynamics = 1e-6;
  /// Allowed excess over the torque limit and the friction cone (rounding of the CSV).
  double slack = 1e-6;
  /// Flight samples against the least-squares ballistic fit, meters.
  double ballistic = 1e-3;
};

struct ValidationReport {
  std::size_t rows = 0;
  std::size_t contact_rows = 0;
  std::size_t flight_rows = 0;
  double max_dynamics_residual = 0.0;
  double max_torque = 0.0;
  double torque_limit = 0.0;
  /// min over stance samples of mu f_z - |f_x|; positive inside the cone.
  double min_friction_margin = 0.0;
  double min_normal_force = 0.0;
  double ballistic_deviation = 0.0;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

/// Re-integrates the logged forces with lever arms from forward kinematics of
/// the logged joint angles and checks torque, friction and the flight phase.
ValidationReport validate(const TrajectoryTable& table, Plane plane, const RobotParams& params,
                          const ValidationTolerances& tol = {});

/// Targets of `count` library entries of the task (cycling through them)
/// with x and z shifted uniformly by up to +-amplitude.
std::vector<Vec3> perturbed_targets(const PremotionLibrary& library, JumpTask task,
                                    std::size_t count, double amplitude, std::uint64_t seed);

Vec3 parse_target(const std::string& text);
CSpaceRanges parse_ranges(const std::string& text);
AxisRange parse_range(const std::string& text);
/// Comma separated task names; "all" for every task.
std::vector<JumpTask> parse_tasks(const std::string& text);

std::optional<std::filesystem::path> config_dir();

int cspace_build(const CSpaceBuildOptions& opt, std::ostream& out, std::ostream& err);
int plan(const PlanOptions& opt, std::ostream& out, std::ostream& err);
int validate(const ValidateOptions& opt, std::ostream& out, std::ostream& err);
int bench(const BenchOptions& opt, std::ostream& out, std::ostream& err);
int library_build(const LibraryBuildOptions& opt, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to a command. Returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace jumpplan::cli
