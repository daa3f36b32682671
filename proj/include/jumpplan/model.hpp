#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

#include <Eigen/Core>

namespace jumpplan {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

enum class Plane { sagittal, coronal };

struct JointRange {
  double min = 0.0;
  double max = 0.0;
};

// Index order for per-leg arrays.
enum Leg : std::size_t { kFrontLeft = 0, kFrontRight = 1, kRearLeft = 2, kRearRight = 3 };

/// Physical parameters of the quadruped. All SI.
struct RobotParams {
  double mass = 9.0;
  /// Body-frame principal inertia (xx, yy, zz), treated as constant.
  Vec3 inertia_diag{0.07, 0.26, 0.242};
  /// Hip joint positions relative to the CoM in the body frame, ordered by Leg.
  std::array<Vec3, 4> hip_offsets{Vec3{0.19, 0.1, 0.0}, Vec3{0.19, -0.1, 0.0},
                                   Vec3{-0.19, 0.1, 0.0}, Vec3{-0.19, -0.1, 0.0}};
  double thigh_length = 0.209;
  double shank_length = 0.209;
  JointRange hip_range{-2.4, 1.6};
  JointRange knee_range{0.2, 2.6};
  double torque_limit = 24.0;
  double friction_coeff = 0.6;
  double gravity = 9.81;
  /// Minimum height of hip and knee joints above the ground.
  double min_clearance = 0.02;

  /// Throws ContractError when an invariant does not hold.
  void validate() const;

  /// Stable 64-bit digest of every field; used to detect stale grids and libraries.
  std::uint64_t hash() const;

  /// Rotational inertia about the normal of the given motion plane.
  double planar_inertia(Plane plane) const {
    return plane == Plane::sagittal ? inertia_diag.y() : inertia_diag.x();
  }
};

RobotParams load_params(const std::filesystem::path& path);
void save_params(const RobotParams& params, const std::filesystem::path& path);
std::string params_to_yaml(const RobotParams& params);
RobotParams params_from_yaml(const std::string& text);

/// 12-dimensional rigid-body state: CoM position, ZYX Euler angles (roll, pitch,
/// yaw), CoM velocity, body-frame angular velocity.
struct FullState {
  Vec3 p_c = Vec3::Zero();
  Vec3 euler = Vec3::Zero();
  Vec3 v_c = Vec3::Zero();
  Vec3 omega_b = Vec3::Zero();

  bool finite() const;
};

/// Reduced planar state. `x_c` is the in-plane horizontal coordinate (world x
/// for the sagittal plane at plane_angle 0, world -y for the coronal plane),
/// `theta` the rotation about the plane normal (pitch or roll).
struct BodyState {
  double x_c = 0.0;
  double z_c = 0.0;
  double theta = 0.0;
  double vx = 0.0;
  double vz = 0.0;
  double omega = 0.0;
  Plane plane = Plane::sagittal;
  /// Heading of the jumping plane about world z.
  double plane_angle = 0.0;

  Vec3 configuration() const { return {x_c, z_c, theta}; }
};

struct Wrench {
  Vec3 force = Vec3::Zero();
  Vec3 torque = Vec3::Zero();
};

/// World-frame unit vector of the in-plane horizontal axis.
Vec3 plane_axis(Plane plane, double plane_angle);

FullState embed(const BodyState& body);
BodyState project(const FullState& full, Plane plane, double plane_angle);

/// Body-to-world rotation of a planar body-frame vector (horizontal, vertical).
inline Vec2 rotate_planar(double theta, const Vec2& body) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {c * body.x() + s * body.y(), -s * body.x() + c * body.y()};
}

inline Vec2 unrotate_planar(double theta, const Vec2& world) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {c * world.x() - s * world.y(), s * world.x() + c * world.y()};
}

/// Planar cross product matching the sign of `theta`: torque about the plane
/// normal produced by force `f` applied at lever arm `r`.
inline double planar_moment(const Vec2& r, const Vec2& f) {
  return r.y() * f.x() - r.x() * f.y();
}

Eigen::Matrix3d euler_to_rotation(const Vec3& euler);

namespace model {

/// Sum of foot forces and their moments about the CoM.
Wrench net_wrench(std::span<const Vec3> forces, std::span<const Vec3> foot_vectors);

/// One explicit-Euler step of the centroidal dynamics.
FullState step_centroidal(const FullState& state, const Wrench& wrench,
                          const RobotParams& params, double dt);

}  // namespace model
}  // namespace jumpplan
