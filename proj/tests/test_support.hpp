#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "jumpplan/cspace.hpp"
#include "jumpplan/grf.hpp"

namespace testing {

// Random profile that satisfies the transform's closure conditions: push-pair
// force continuous at t1 and zero at t2. Built in powers
// of (t - t2) and expanded to absolute time.
inline jumpplan::GrfProfile random_profile(std::mt19937_64& gen, double magnitude = 1.0) {
  std::uniform_real_distribution<double> dur(0.1, 0.5);
  std::uniform_real_distribution<double> force(-40.0 * magnitude, 80.0 * magnitude);
  std::uniform_real_distribution<double> slope(-300.0 * magnitude, 300.0 * magnitude);
  jumpplan::GrfProfile p;
  p.t1 = dur(gen);
  p.t2 = p.t1 + dur(gen);
  p.t3 = p.t2 + dur(gen);
  p.shared_x = {force(gen) / 4.0, slope(gen) / 4.0};
  p.lead_z = {force(gen), slope(gen)};
  p.push_z = {force(gen), slope(gen)};

  const double t2 = p.t2;
  const double s1 = p.t1 - t2;
  // x(t) = a (t - t2) + b (t - t2)^2 with x(t1) matching the shared force.
  const double bx = slope(gen) * 10.0;
  const double x_t1 = p.shared_x[0] + p.shared_x[1] * p.t1;
  const double ax = (x_t1 - bx * s1 * s1) / s1;
  // z(t) = c (t - t2) + e (t - t2)^2 with z(t1) matching the linear phase.
  const double e = slope(gen) * 10.0;
  const double z_t1 = p.push_z[0] + p.push_z[1] * p.t1;
  const double c = (z_t1 - e * s1 * s1) / s1;
  auto expand = [t2](double a, double b) {
    return std::array<double, 3>{-a * t2 + b * t2 * t2, a - 2.0 * b * t2, b};
  };
  p.push_x_quad = expand(ax, bx);
  p.push_z_quad = expand(c, e);
  return p;
}

using namespace jumpplan;

// Independent feasibility check: knee from circle intersection in the world
// plane, joint angles read back from link directions.
inline bool oracle_leg(const RobotParams& p, const Vec3& cfg, const Vec2& hip_offset, const Vec2& foot) {
  const double c = std::cos(cfg.z()), s = std::sin(cfg.z());
  const Vec2 hip(cfg.x() + hip_offset.x() * c + hip_offset.y() * s,
                 cfg.y() - hip_offset.x() * s + hip_offset.y() * c);
  const double l1 = p.thigh_length, l2 = p.shank_length;
  const Vec2 d = foot - hip;
  const double dist = d.norm();
  if (dist > l1 + l2 || dist < std::abs(l1 - l2) || dist == 0.0) return false;
  const double along = (dist * dist + l1 * l1 - l2 * l2) / (2 * dist);
  const double perp = std::sqrt(std::max(0.0, l1 * l1 - along * along));
  const Vec2 base = hip + along * d / dist;
  const Vec2 normal(-d.y() / dist, d.x() / dist);

  auto body_angle = [c, s](const Vec2& w) {
    // World direction to body frame, then angle from the downward vertical.
    const Vec2 b(w.x() * c - w.y() * s, w.x() * s + w.y() * c);
    return std::atan2(b.x(), -b.y());
  };
  for (double sign : {1.0, -1.0}) {
    const Vec2 knee = base + sign * perp * normal;
    const double q_hip = body_angle(knee - hip);
    double q_knee = body_angle(foot - knee) - q_hip;
    q_knee = std::remainder(q_knee, 2 * std::numbers::pi);
    if (q_knee < -1e-12) continue;
    return q_hip > p.hip_range.min && q_hip < p.hip_range.max && q_knee > p.knee_range.min &&
           q_knee < p.knee_range.max && hip.y() > p.min_clearance && knee.y() > p.min_clearance;
  }
  return false;
}

inline bool oracle(const RobotParams& p, const Stance& st, const std::vector<LegPair>& pairs,
                   const Vec3& cfg) {
  if (cfg.y() <= p.min_clearance) return false;
  for (LegPair pair : pairs) {
    const Vec2 foot = pair == st.lead ? st.lead_foot : st.push_foot;
    if (!oracle_leg(p, cfg, planar_hip_offset(p, st.plane, pair), foot)) return false;
  }
  return true;
}

}  // namespace testing
