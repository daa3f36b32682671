#pragma once

#include <cstddef>
#include <vector>

#include "jumpplan/grf.hpp"
#include "jumpplan/model.hpp"
#include "jumpplan/task.hpp"

namespace jumpplan {

/// Time-sampled forward simulation of one jump. Sample k is at k * dt;
/// forces[k] is held over [t_k, t_k + dt).
struct Trajectory {
  double dt = 0.0;
  Plane plane = Plane::sagittal;
  double plane_angle = 0.0;
  std::vector<FullState> states;
  std::vector<PairForces> forces;
  /// First sample at or after t1 (lead pair airborne).
  std::size_t lead_liftoff = 0;
  /// First sample at or after t2 (flight).
  std::size_t push_liftoff = 0;

  std::size_t size() const { return states.size(); }
  double time(std::size_t k) const { return static_cast<double>(k) * dt; }
  BodyState body(std::size_t k) const { return project(states[k], plane, plane_angle); }
};

/// Planar counterpart of Trajectory.
struct PlanarTrajectory {
  double dt = 0.0;
  std::vector<BodyState> states;
  std::vector<PairForces> forces;
  std::size_t lead_liftoff = 0;
  std::size_t push_liftoff = 0;

  std::size_t size() const { return states.size(); }
  double time(std::size_t k) const { return static_cast<double>(k) * dt; }
};

enum class LeverArms {
  /// Recomputed from the current CoM every step.
  moving,
  /// Held at the initial stance geometry (matches the closed-form transform).
  frozen,
};

namespace model {

/// World positions of the two feet of each pair.
struct FootPoints {
  std::array<Vec3, 2> lead;
  std::array<Vec3, 2> push;
};

FootPoints foot_points(const Stance& stance, const RobotParams& params);

/// Number of integration steps covering [0, t3].
std::size_t step_count(double t3, double dt);

Trajectory rollout(const FullState& initial, const GrfProfile& profile, const Stance& stance,
                   const RobotParams& params, double dt, LeverArms arms = LeverArms::moving);

/// Same schedule and update as rollout, restricted to the motion plane. For a
/// planar jump the two agree up to rounding.
PlanarTrajectory rollout_planar(const BodyState& initial, const GrfProfile& profile,
                                const Stance& stance, const RobotParams& params, double dt);

}  // namespace model
}  // namespace jumpplan
