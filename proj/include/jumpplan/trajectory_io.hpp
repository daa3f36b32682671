#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "jumpplan/rollout.hpp"

namespace jumpplan {

/// One CSV row. "front" and "rear" name the two column groups; see
/// trajectory_io::column_pairs for the legs they hold.
struct TrajectoryRow {
  double t = 0.0;
  double x_c = 0.0, z_c = 0.0, theta = 0.0;
  double vx = 0.0, vz = 0.0, omega = 0.0;
  Vec2 f_front = Vec2::Zero(), f_rear = Vec2::Zero();
  Vec2 q_front = Vec2::Zero(), q_rear = Vec2::Zero();
  Vec2 tau_front = Vec2::Zero(), tau_rear = Vec2::Zero();
};

struct TrajectoryTable {
  /// Written for plans that did not reach the stopping threshold.
  bool infeasible = false;
  std::vector<TrajectoryRow> rows;
};

namespace trajectory_io {

inline constexpr std::array<std::string_view, 19> kColumns{
    "t",           "x_c",          "z_c",         "theta",        "vx",
    "vz",          "omega",        "f_front_x",   "f_front_z",    "f_rear_x",
    "f_rear_z",    "q_front_hip",  "q_front_knee", "q_rear_hip",  "q_rear_knee",
    "tau_front_hip", "tau_front_knee", "tau_rear_hip", "tau_rear_knee"};

/// Legs behind the front and rear column groups: front and rear pairs in the
/// sagittal plane; right and left pairs (positive and negative in-plane side)
/// in the coronal plane.
std::pair<LegPair, LegPair> column_pairs(Plane plane);

/// Per-foot forces, joint angles and torques along a rollout. Joint angles of
/// an airborne pair hold their last stance value; its torques are zero.
TrajectoryTable tabulate(const Trajectory& traj, const Stance& stance, const RobotParams& params);

/// Header row plus one row per sample, 9 significant digits.
std::string to_csv(const TrajectoryTable& table);
/// Lines starting with '#' are comments. Throws ParseError with the line number.
TrajectoryTable from_csv(const std::string& text);

void save(const TrajectoryTable& table, const std::filesystem::path& path);
TrajectoryTable load(const std::filesystem::path& path);

}  // namespace trajectory_io
}  // namespace jumpplan
