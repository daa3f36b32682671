#include "jumpplan/rollout.hpp"

#include <cmath>

#include "jumpplan/error.hpp"

namespace jumpplan::model {
namespace {

Vec3 plane_normal(Plane plane, double plane_angle) {
  const double c = std::cos(plane_angle);
  const double s = std::sin(plane_angle);
  if (plane == Plane::sagittal) return {-s, c, 0.0};
  return {c, s, 0.0};
}

}  // namespace

FootPoints foot_points(const Stance& stance, const RobotParams& params) {
  const Vec3 u = plane_axis(stance.plane, stance.plane_angle);
  const Vec3 n = plane_normal(stance.plane, stance.plane_angle);
  auto place = [&](const Vec2& foot, LegPair pair) {
    const auto lat = lateral_offsets(params, stance.plane, pair);
    std::array<Vec3, 2> out;
    for (std::size_t i = 0; i < 2; ++i) {
      out[i] = foot.x() * u + lat[i] * n + Vec3(0.0, 0.0, foot.y());
    }
    return out;
  };
  return {place(stance.lead_foot, stance.lead), place(stance.push_foot, stance.push)};
}

std::size_t step_count(double t3, double dt) {
  return static_cast<std::size_t>(std::llround(t3 / dt));
}

Trajectory rollout(const FullState& initial, const GrfProfile& profile, const Stance& stance,
                   const RobotParams& params, double dt, LeverArms arms) {
  if (!(dt > 0.0)) throw ContractError("rollout: dt must be positive");
  if (!profile.valid_times()) throw ContractError("rollout: profile needs 0 < t1 < t2 < t3");

  const std::size_t steps = step_count(profile.t3, dt);
  const Vec3 u = plane_axis(stance.plane, stance.plane_angle);
  const FootPoints feet = foot_points(stance, params);
  const std::array<Vec3, 4> foot_pos{feet.lead[0], feet.lead[1], feet.push[0], feet.push[1]};

  Trajectory traj;
  traj.dt = dt;
  traj.plane = stance.plane;
  traj.plane_angle = stance.plane_angle;
  traj.states.reserve(steps + 1);
  traj.forces.reserve(steps + 1);
  traj.lead_liftoff = steps + 1;
  traj.push_liftoff = steps + 1;

  auto to_world = [&u](const Vec2& f) { return Vec3(f.x() * u + Vec3(0.0, 0.0, f.y())); };

  FullState state = initial;
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const PairForces f = grf::eval(profile, t);
    if (traj.lead_liftoff > steps && t >= profile.t1) traj.lead_liftoff = k;
    if (traj.push_liftoff > steps && t >= profile.t2) traj.push_liftoff = k;
    traj.states.push_back(state);
    traj.forces.push_back(f);
    if (k == steps) break;

    const Vec3 lead = to_world(f.lead);
    const Vec3 push = to_world(f.push);
    const std::array<Vec3, 4> forces{lead, lead, push, push};
    const Vec3& com = arms == LeverArms::moving ? state.p_c : initial.p_c;
    std::array<Vec3, 4> levers;
    for (std::size_t i = 0; i < 4; ++i) levers[i] = foot_pos[i] - com;
    state = step_centroidal(state, net_wrench(forces, levers), params, dt);
  }
  return traj;
}

PlanarTrajectory rollout_planar(const BodyState& initial, const GrfProfile& profile,
                                const Stance& stance, const RobotParams& params, double dt) {
  if (!(dt > 0.0)) throw ContractError("rollout: dt must be positive");
  if (!profile.valid_times()) throw ContractError("rollout: profile needs 0 < t1 < t2 < t3");

  const std::size_t steps = step_count(profile.t3, dt);
  const double inertia = params.planar_inertia(stance.plane);
  PlanarTrajectory traj;
  traj.dt = dt;
  traj.states.reserve(steps + 1);
  traj.forces.reserve(steps + 1);
  traj.lead_liftoff = steps + 1;
  traj.push_liftoff = steps + 1;

  BodyState s = initial;
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const PairForces f = grf::eval(profile, t);
    if (traj.lead_liftoff > steps && t >= profile.t1) traj.lead_liftoff = k;
    if (traj.push_liftoff > steps && t >= profile.t2) traj.push_liftoff = k;
    traj.states.push_back(s);
    traj.forces.push_back(f);
    if (k == steps) break;

    const Vec2 com{s.x_c, s.z_c};
    const Vec2 net = 2.0 * (f.lead + f.push);
    const double moment = 2.0 * (planar_moment(stance.lead_foot - com, f.lead) +
                                 planar_moment(stance.push_foot - com, f.push));
    BodyState n = s;
    n.x_c += dt * s.vx;
    n.z_c += dt * s.vz;
    n.theta += dt * s.omega;
    n.vx += dt * net.x() / params.mass;
    n.vz += dt * (net.y() / params.mass - params.gravity);
    n.omega += dt * moment / inertia;
    s = n;
  }
  return traj;
}

}  // namespace jumpplan::model
