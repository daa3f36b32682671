#pragma once

#include <Eigen/Core>

#include "jumpplan/model.hpp"

namespace jumpplan {

/// Joint state of one planar two-link leg. The hip angle is measured from the
/// body's downward vertical, positive toward the in-plane horizontal axis; the
/// knee angle is the deviation from full extension (>= 0, knee behind).
struct LegJointState {
  double q_hip = 0.0;
  double q_knee = 0.0;
  double qd_hip = 0.0;
  double qd_knee = 0.0;
};

struct LegPoints {
  Vec2 hip = Vec2::Zero();
  Vec2 knee = Vec2::Zero();
  LegJointState joints;
};

namespace kin {

/// Foot position relative to the hip, body frame.
Vec2 forward(double q_hip, double q_knee, const RobotParams& params);

/// Knee position relative to the hip, body frame.
Vec2 knee_offset(double q_hip, const RobotParams& params);

/// Inverse kinematics with both points in the body frame. Throws
/// ReachabilityError when the foot is outside the reachable annulus.
LegJointState leg_ik(const Vec2& hip_pos, const Vec2& foot_pos, const RobotParams& params);

/// d(foot)/d(q_hip, q_knee), body frame.
Eigen::Matrix2d leg_jacobian(double q_hip, double q_knee, const RobotParams& params);

/// Joint torques holding the body-frame ground reaction force `f` (force on the
/// body; the leg pushes the ground with -f).
Vec2 joint_torques(double q_hip, double q_knee, const Vec2& f, const RobotParams& params);

/// World-plane hip and knee of the leg whose hip sits at `hip_offset` (body
/// frame, planar) and whose foot is at `foot_pos` (world plane).
LegPoints joint_positions(const BodyState& body, const Vec2& hip_offset, const Vec2& foot_pos,
                          const RobotParams& params);

/// joint_positions without the exception: returns the overshoot (> 0, `out`
/// partially filled) when the foot is out of reach, else 0.
double try_joint_positions(const BodyState& body, const Vec2& hip_offset, const Vec2& foot_pos,
                           const RobotParams& params, LegPoints& out);

}  // namespace kin
}  // namespace jumpplan
