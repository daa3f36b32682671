#include "jumpplan/kinematics.hpp"

#include <algorithm>
#include <cmath>

#include "jumpplan/error.hpp"
#include "jumpplan/text.hpp"

namespace jumpplan::kin {

Vec2 forward(double q_hip, double q_knee, const RobotParams& params) {
  const double q12 = q_hip + q_knee;
  return {params.thigh_length * std::sin(q_hip) + params.shank_length * std::sin(q12),
          -params.thigh_length * std::cos(q_hip) - params.shank_length * std::cos(q12)};
}

Vec2 knee_offset(double q_hip, const RobotParams& params) {
  return {params.thigh_length * std::sin(q_hip), -params.thigh_length * std::cos(q_hip)};
}

namespace {

// Returns the overshoot (> 0) instead of solving when out of reach.
double solve_ik(const Vec2& d, const RobotParams& params, LegJointState& q) {
  const double l1 = params.thigh_length;
  const double l2 = params.shank_length;
  const double dist = d.norm();
  // Small slack so that exact boundary targets (full extension) stay solvable.
  constexpr double kSlack = 1e-12;
  const double far = dist - (l1 + l2);
  const double near = std::abs(l1 - l2) - dist;
  if (far > kSlack || near > kSlack) return std::max(far, near);
  const double c = std::clamp((dist * dist - l1 * l1 - l2 * l2) / (2.0 * l1 * l2), -1.0, 1.0);
  q.q_knee = std::acos(c);
  q.q_hip = std::atan2(d.x(), -d.y()) -
            std::atan2(l2 * std::sin(q.q_knee), l1 + l2 * std::cos(q.q_knee));
  return 0.0;
}

}  // namespace

LegJointState leg_ik(const Vec2& hip_pos, const Vec2& foot_pos, const RobotParams& params) {
  LegJointState q;
  const double over = solve_ik(foot_pos - hip_pos, params, q);
  if (over > 0.0) {
    throw ReachabilityError("leg_ik: foot out of reach by " + text::number(over) + " m", over);
  }
  return q;
}

Eigen::Matrix2d leg_jacobian(double q_hip, double q_knee, const RobotParams& params) {
  const double l1 = params.thigh_length;
  const double l2 = params.shank_length;
  const double q12 = q_hip + q_knee;
  Eigen::Matrix2d j;
  j << l1 * std::cos(q_hip) + l2 * std::cos(q12), l2 * std::cos(q12),
      l1 * std::sin(q_hip) + l2 * std::sin(q12), l2 * std::sin(q12);
  return j;
}

Vec2 joint_torques(double q_hip, double q_knee, const Vec2& f, const RobotParams& params) {
  return -(leg_jacobian(q_hip, q_knee, params).transpose() * f);
}

double try_joint_positions(const BodyState& body, const Vec2& hip_offset, const Vec2& foot_pos,
                           const RobotParams& params, LegPoints& out) {
  const Vec2 com{body.x_c, body.z_c};
  out.hip = com + rotate_planar(body.theta, hip_offset);
  const Vec2 foot_body = unrotate_planar(body.theta, foot_pos - out.hip);
  const double over = solve_ik(foot_body, params, out.joints);
  if (over > 0.0) return over;
  out.knee = out.hip + rotate_planar(body.theta, knee_offset(out.joints.q_hip, params));
  return 0.0;
}

LegPoints joint_positions(const BodyState& body, const Vec2& hip_offset, const Vec2& foot_pos,
                          const RobotParams& params) {
  LegPoints out;
  const double over = try_joint_positions(body, hip_offset, foot_pos, params, out);
  if (over > 0.0) {
    throw ReachabilityError("leg_ik: foot out of reach by " + text::number(over) + " m", over);
  }
  return out;
}

}  // namespace jumpplan::kin
