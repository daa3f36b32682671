#include <algorithm>
#include <cmath>

#include "jumpplan/error.hpp"
#include "jumpplan/kinematics.hpp"
#include "jumpplan/optimizer.hpp"

namespace jumpplan {

double FitnessLayers::epsilon() const {
  double satisfied = 0.0;
  for (std::size_t i = 0; i < kCount; ++i) satisfied += std::pow(10.0, i) * weights[i];
  return std::pow(10.0, kTopLayer) - satisfied + stop_margin;
}

void FitnessLayers::validate() const {
  for (double w : weights) {
    if (!(w >= 0.0 && w <= 1.0)) throw ContractError("fitness: layer weights must lie in [0, 1]");
  }
  if (!(energy_weight >= 0.0) || !std::isfinite(energy_weight)) {
    throw ContractError("fitness: energy weight must be finite and non-negative");
  }
  const double positives[] = {terminal_tolerance.x(), terminal_tolerance.y(),
                              terminal_tolerance.z(), consistency_tolerance, consistency_scale,
                              reach_scale, joint_scale, clearance_scale, stop_margin};
  for (double v : positives) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ContractError("fitness: scales must be positive");
  }
  for (double m : {planning_margin, torque_margin, friction_margin}) {
    if (!(m > 0.0 && m <= 1.0)) throw ContractError("fitness: margins must lie in (0, 1]");
  }
}

double hierarchical_fitness(std::span<const double> sigma, std::span<const double> weights,
                            double energy, double energy_weight) {
  if (sigma.size() != weights.size() || sigma.empty()) {
    throw ContractError("hierarchical_fitness: need one weight per layer");
  }
  const int top = static_cast<int>(sigma.size()) + 2;
  double f = std::pow(10.0, top);
  for (std::size_t i = 0; i < sigma.size(); ++i) f -= std::pow(10.0, i) * sigma[i] * weights[i];
  return f + energy_weight * energy;
}

bool LayerScores::all_satisfied() const {
  return transform_ok && std::all_of(sigma.begin(), sigma.end(), [](double s) { return s == 1.0; });
}

namespace optimizer {

double energy(std::span<const Vec2> torque, std::span<const Vec2> rate, double dt) {
  if (torque.size() != rate.size()) throw ContractError("energy: torque and rate lengths differ");
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < torque.size(); ++k) {
    total += 0.5 * dt * (std::abs(torque[k].dot(rate[k])) + std::abs(torque[k + 1].dot(rate[k + 1])));
  }
  return total;
}

double torque_violation(const Vec2& torque, double limit, double margin) {
  const double cap = margin * limit;
  return (std::max(0.0, std::abs(torque.x()) - cap) + std::max(0.0, std::abs(torque.y()) - cap)) /
         limit;
}

double sigma_from_violation(double violation) {
  return 1.0 / (1.0 + std::max(0.0, violation));
}

namespace {

// Per-sample violations of one constraint; the aggregate is worst plus mean.
class Member {
 public:
  explicit Member(std::size_t n) : values_(n, 0.0) {}
  void add(std::size_t k, double v) { values_[k] += v; }
  double aggregate() const {
    if (values_.empty()) return 0.0;
    double worst = 0.0, sum = 0.0;
    for (double v : values_) {
      worst = std::max(worst, v);
      sum += v;
    }
    return worst + sum / static_cast<double>(values_.size());
  }

 private:
  std::vector<double> values_;
};

bool finite_profile(const GrfProfile& p) {
  for (double c : p.coefficients()) {
    if (!std::isfinite(c)) return false;
  }
  return true;
}

bool finite_state(const BodyState& s) {
  return std::isfinite(s.x_c) && std::isfinite(s.z_c) && std::isfinite(s.theta) &&
         std::isfinite(s.vx) && std::isfinite(s.vz) && std::isfinite(s.omega);
}

constexpr double kForceFloor = 1e-9;
constexpr double kTimeSlack = 1e-12;

double range_excess(double v, double lo, double hi) {
  return std::max(0.0, lo - v) + std::max(0.0, v - hi);
}

}  // namespace

void repair(DOpt& d, const Problem& problem) {
  try {
    const grf::TransformResult r = grf::solve_profile(d, problem.initial, problem.stance,
                                                      problem.params);
    if (std::isfinite(r.theta_t2)) d.values[8] = r.theta_t2;
  } catch (const TransformError&) {
  }
}

LayerScores layer_scores(const DOpt& d, const Problem& problem) {
  LayerScores out;
  const Vec3 dur = d.durations();
  for (int i = 0; i < 3; ++i) {
    if (!(dur[i] > 0.0) || !(dur[i] < 100.0)) return out;
  }
  for (double v : d.values) {
    if (!std::isfinite(v)) return out;
  }

  grf::TransformResult tr;
  try {
    tr = grf::solve_profile(d, problem.initial, problem.stance, problem.params);
  } catch (const TransformError&) {
    return out;
  }
  if (!finite_profile(tr.profile)) return out;

  const PlanarTrajectory traj = model::rollout_planar(problem.initial, tr.profile, problem.stance,
                                                      problem.params, problem.dt);
  if (!finite_state(traj.states.back())) return out;

  const FitnessLayers& lay = problem.layers;
  const RobotParams& par = problem.params;
  const Stance& st = problem.stance;
  const TaskLayout task = layout(problem.task);
  const std::size_t stance_n = std::min(traj.push_liftoff, traj.size());
  const std::size_t lead_n = std::min(traj.lead_liftoff, stance_n);

  // Terminal layer.
  const BodyState& end = traj.states.back();
  const Vec3 err = (end.configuration() - problem.target).cwiseAbs();
  double terminal = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double tol = lay.terminal_tolerance[i];
    terminal += std::max(0.0, err[i] - lay.planning_margin * tol) / tol;
  }

  // Consistency layer.
  const double consistency =
      std::max(0.0, tr.residual - lay.consistency_tolerance) / lay.consistency_scale;

  // Actuation and contact layers along the stance.
  Member reach(stance_n), joints(stance_n), clearance(stance_n), torque(stance_n);
  Member friction(stance_n), region(task.grid_needs_lead ? lead_n : stance_n);
  const double mu_plan = lay.friction_margin * par.friction_coeff;
  const double cone = std::atan(mu_plan);
  const double cone_scale = std::atan(par.friction_coeff);
  double zeta = 0.0;

  for (int which = 0; which < 2; ++which) {
    const bool lead = which == 0;
    const std::size_t contact_n = lead ? lead_n : stance_n;
    const LegPair pair = lead ? st.lead : st.push;
    const Vec2 foot = lead ? st.lead_foot : st.push_foot;
    const Vec2 offset = planar_hip_offset(par, st.plane, pair);
    std::vector<Vec2> q(contact_n, Vec2::Zero()), tau(contact_n, Vec2::Zero());
    std::vector<bool> known(contact_n, false);

    for (std::size_t k = 0; k < contact_n; ++k) {
      const BodyState& body = traj.states[k];
      const Vec2 f = lead ? traj.forces[k].lead : traj.forces[k].push;

      // Forces below kForceFloor are transform round-off on a zero profile.
      if (f.norm() > kForceFloor) {
        const double angle = std::atan2(std::abs(f.x()), f.y());
        friction.add(k, std::max(0.0, angle - cone) / cone_scale);
      }

      LegPoints lp;
      const double over = kin::try_joint_positions(body, offset, foot, par, lp);
      if (over > 0.0) {
        reach.add(k, over / lay.reach_scale);
        continue;
      }
      known[k] = true;
      q[k] = Vec2(lp.joints.q_hip, lp.joints.q_knee);
      joints.add(k, (range_excess(q[k].x(), par.hip_range.min, par.hip_range.max) +
                     range_excess(q[k].y(), par.knee_range.min, par.knee_range.max)) /
                        lay.joint_scale);
      clearance.add(k, (std::max(0.0, par.min_clearance - lp.hip.y()) +
                        std::max(0.0, par.min_clearance - lp.knee.y())) /
                           lay.clearance_scale);
      tau[k] = kin::joint_torques(q[k].x(), q[k].y(), unrotate_planar(body.theta, f), par);
      torque.add(k, torque_violation(tau[k], par.torque_limit, lay.torque_margin));
    }

    // Joint rates by central differences over the contact window.
    std::vector<Vec2> rate(contact_n, Vec2::Zero());
    for (std::size_t k = 0; k < contact_n; ++k) {
      const std::size_t a = k == 0 ? 0 : k - 1;
      const std::size_t b = std::min(k + 1, contact_n - 1);
      if (a == b || !known[a] || !known[b] || !known[k]) {
        tau[k] = Vec2::Zero();
        continue;
      }
      rate[k] = (q[b] - q[a]) / (static_cast<double>(b - a) * traj.dt);
    }
    zeta += 2.0 * energy(tau, rate, traj.dt);
  }

  for (std::size_t k = 0; k < (task.grid_needs_lead ? lead_n : stance_n); ++k) {
    if (!cspace::contains(*problem.grid, traj.states[k].configuration())) region.add(k, 1.0);
  }
  double time_box = 0.0;
  for (int i = 0; i < 3; ++i) {
    time_box += range_excess(dur[i], problem.time_space.lower - kTimeSlack,
                             problem.time_space.upper + kTimeSlack) /
                0.1;
  }

  ConstraintViolations& c = out.constraints;
  c.friction = friction.aggregate();
  c.region = region.aggregate();
  c.time_box = time_box;
  c.reach = reach.aggregate();
  c.joints = joints.aggregate();
  c.clearance = clearance.aggregate();
  c.torque = torque.aggregate();
  out.violation[static_cast<std::size_t>(FitnessLayer::contact)] = c.friction + c.region + c.time_box;
  out.violation[static_cast<std::size_t>(FitnessLayer::actuation)] =
      c.reach + c.joints + c.clearance + c.torque;
  out.violation[static_cast<std::size_t>(FitnessLayer::consistency)] = consistency;
  out.violation[static_cast<std::size_t>(FitnessLayer::terminal)] = terminal;

  for (std::size_t i = 0; i < FitnessLayers::kCount; ++i) {
    out.sigma[i] = sigma_from_violation(out.violation[i]);
  }
  out.energy = zeta;
  out.transform_ok = true;
  return out;
}

double fitness(const LayerScores& scores, const FitnessLayers& layers) {
  return hierarchical_fitness(scores.sigma, layers.weights, scores.energy, layers.energy_weight);
}

double fitness(const DOpt& d, const Problem& problem) {
  return fitness(layer_scores(d, problem), problem.layers);
}

std::string_view layer_name(FitnessLayer layer) {
  switch (layer) {
    case FitnessLayer::contact: return "contact";
    case FitnessLayer::actuation: return "actuation";
    case FitnessLayer::consistency: return "consistency";
    case FitnessLayer::terminal: return "terminal";
  }
  return "unknown";
}

}  // namespace optimizer
}  // namespace jumpplan
