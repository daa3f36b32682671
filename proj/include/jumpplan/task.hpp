#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "jumpplan/model.hpp"

namespace jumpplan {

enum class JumpTask {
  front,
  rear,
  side_left,
  side_right,
  four_contact,
  two_contact,
  flip_back,
  flip_side,
};

inline constexpr std::array<JumpTask, 8> kAllTasks{
    JumpTask::front,        JumpTask::rear,        JumpTask::side_left, JumpTask::side_right,
    JumpTask::four_contact, JumpTask::two_contact, JumpTask::flip_back, JumpTask::flip_side};

enum class LegPair { front, rear, left, right };

// The pair that lifts off at t1 is the "lead" pair; the "push" pair stays in
// contact until t2. A front jump leads with the front legs and pushes with the
// rear ones; mirrored tasks swap the roles.
struct TaskLayout {
  Plane plane;
  LegPair lead;
  LegPair push;
  bool is_flip;
  /// Whether the C-space grid requires the lead pair as well as the push pair.
  bool grid_needs_lead;
};

TaskLayout layout(JumpTask task);

std::string_view to_string(JumpTask task);
std::optional<JumpTask> parse_task(std::string_view name);

std::array<Leg, 2> pair_legs(LegPair pair);

/// Body-frame planar hip offset of a leg pair (mean of its two hips).
Vec2 planar_hip_offset(const RobotParams& params, Plane plane, LegPair pair);

/// Out-of-plane offsets of the two feet in a pair, signed along the plane normal.
std::array<double, 2> lateral_offsets(const RobotParams& params, Plane plane, LegPair pair);

/// Planar ground contact geometry for one jump.
struct Stance {
  Plane plane = Plane::sagittal;
  double plane_angle = 0.0;
  LegPair lead = LegPair::front;
  LegPair push = LegPair::rear;
  /// Foot positions (in-plane horizontal, height) in the world plane.
  Vec2 lead_foot = Vec2::Zero();
  Vec2 push_foot = Vec2::Zero();
};

/// Feet placed on the ground directly under their hips for the given body pose.
Stance make_stance(const RobotParams& params, JumpTask task, const BodyState& initial);

/// Default standing pose used as the jump start.
BodyState default_initial_state(JumpTask task, double height = 0.25);

}  // namespace jumpplan
