#include "jumpplan/task.hpp"

#include "jumpplan/error.hpp"

namespace jumpplan {

TaskLayout layout(JumpTask task) {
  switch (task) {
    case JumpTask::front:
      return {Plane::sagittal, LegPair::front, LegPair::rear, false, false};
    case JumpTask::rear:
      return {Plane::sagittal, LegPair::rear, LegPair::front, false, false};
    case JumpTask::side_left:
      return {Plane::coronal, LegPair::left, LegPair::right, false, false};
    case JumpTask::side_right:
      return {Plane::coronal, LegPair::right, LegPair::left, false, false};
    case JumpTask::four_contact:
      return {Plane::sagittal, LegPair::front, LegPair::rear, false, true};
    case JumpTask::two_contact:
      return {Plane::sagittal, LegPair::front, LegPair::rear, false, false};
    // Rotation toward negative angles needs the push pair on the positive side
    // of the plane (front legs for pitch, right legs for roll).
    case JumpTask::flip_back:
      return {Plane::sagittal, LegPair::rear, LegPair::front, true, false};
    case JumpTask::flip_side:
      return {Plane::coronal, LegPair::left, LegPair::right, true, false};
  }
  throw InternalError("unknown task");
}

std::string_view to_string(JumpTask task) {
  switch (task) {
    case JumpTask::front: return "front";
    case JumpTask::rear: return "rear";
    case JumpTask::side_left: return "side_left";
    case JumpTask::side_right: return "side_right";
    case JumpTask::four_contact: return "four_contact";
    case JumpTask::two_contact: return "two_contact";
    case JumpTask::flip_back: return "flip_back";
    case JumpTask::flip_side: return "flip_side";
  }
  return "unknown";
}

std::optional<JumpTask> parse_task(std::string_view name) {
  for (JumpTask t : kAllTasks) {
    if (to_string(t) == name) return t;
  }
  return std::nullopt;
}

std::array<Leg, 2> pair_legs(LegPair pair) {
  switch (pair) {
    case LegPair::front: return {kFrontLeft, kFrontRight};
    case LegPair::rear: return {kRearLeft, kRearRight};
    case LegPair::left: return {kFrontLeft, kRearLeft};
    case LegPair::right: return {kFrontRight, kRearRight};
  }
  throw InternalError("unknown leg pair");
}

namespace {

// In-plane horizontal and out-of-plane coordinates of a body-frame point.
Vec2 to_plane(const Vec3& body, Plane plane) {
  return plane == Plane::sagittal ? Vec2(body.x(), body.z()) : Vec2(-body.y(), body.z());
}

double to_normal(const Vec3& body, Plane plane) {
  return plane == Plane::sagittal ? body.y() : body.x();
}

}  // namespace

Vec2 planar_hip_offset(const RobotParams& params, Plane plane, LegPair pair) {
  const auto legs = pair_legs(pair);
  return 0.5 * (to_plane(params.hip_offsets[legs[0]], plane) +
                to_plane(params.hip_offsets[legs[1]], plane));
}

std::array<double, 2> lateral_offsets(const RobotParams& params, Plane plane, LegPair pair) {
  const auto legs = pair_legs(pair);
  return {to_normal(params.hip_offsets[legs[0]], plane),
          to_normal(params.hip_offsets[legs[1]], plane)};
}

Stance make_stance(const RobotParams& params, JumpTask task, const BodyState& initial) {
  const TaskLayout lay = layout(task);
  if (initial.plane != lay.plane) {
    throw ContractError("make_stance: initial state plane does not match task " +
                        std::string(to_string(task)));
  }
  const Vec2 com{initial.x_c, initial.z_c};
  auto foot_under = [&](LegPair pair) {
    const Vec2 hip = com + rotate_planar(initial.theta, planar_hip_offset(params, lay.plane, pair));
    return Vec2(hip.x(), 0.0);
  };
  Stance st;
  st.plane = lay.plane;
  st.plane_angle = initial.plane_angle;
  st.lead = lay.lead;
  st.push = lay.push;
  st.lead_foot = foot_under(lay.lead);
  st.push_foot = foot_under(lay.push);
  return st;
}

BodyState default_initial_state(JumpTask task, double height) {
  BodyState s;
  s.z_c = height;
  s.plane = layout(task).plane;
  return s;
}

}  // namespace jumpplan
