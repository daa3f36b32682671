#pragma once

#include <array>
#include <span>
#include <vector>

#include "jumpplan/model.hpp"
#include "jumpplan/task.hpp"

namespace jumpplan {

/// Piecewise-polynomial ground reaction forces of one jump, per foot.
///
/// Both feet of a pair carry the same force. On [0, t1) all four feet are in
/// contact and share one horizontal force; on [t1, t2) only the push pair is
/// in contact with quadratic forces; from t2 on the robot is airborne.
/// Polynomials are in absolute time t: c0 + c1 t (+ c2 t^2).
struct GrfProfile {
  double t1 = 0.0;
  double t2 = 0.0;
  double t3 = 0.0;
  std::array<double, 2> shared_x{};
  std::array<double, 2> lead_z{};
  std::array<double, 2> push_z{};
  std::array<double, 3> push_x_quad{};
  std::array<double, 3> push_z_quad{};

  static constexpr std::size_t kCoefficients = 12;

  /// Coefficients in field order: shared_x, lead_z, push_z, push_x_quad, push_z_quad.
  std::array<double, kCoefficients> coefficients() const;
  static GrfProfile from_coefficients(const std::array<double, kCoefficients>& c, double t1,
                                      double t2, double t3);

  bool valid_times() const { return 0.0 < t1 && t1 < t2 && t2 < t3; }
};

/// Per-foot planar forces (in-plane horizontal, vertical) of each pair.
struct PairForces {
  Vec2 lead = Vec2::Zero();
  Vec2 push = Vec2::Zero();
};

/// The 12 optimization variables: planar configurations (x_c, z_c, theta) at
/// t1/2, t1 and t2, followed by the three phase durations.
struct DOpt {
  std::array<double, 12> values{};

  static constexpr std::size_t kSize = 12;

  Vec3 state(std::size_t i) const {
    return {values[3 * i], values[3 * i + 1], values[3 * i + 2]};
  }
  void set_state(std::size_t i, const Vec3& s) {
    values[3 * i] = s.x();
    values[3 * i + 1] = s.y();
    values[3 * i + 2] = s.z();
  }
  Vec3 durations() const { return {values[9], values[10], values[11]}; }
  double t1() const { return values[9]; }
  double t2() const { return values[9] + values[10]; }
  double t3() const { return values[9] + values[10] + values[11]; }

  bool operator==(const DOpt&) const = default;
};

namespace grf {

PairForces eval(const GrfProfile& profile, double t);

/// Closed-form CoM states under the profile, with foot lever arms held at the
/// initial stance geometry.
std::vector<BodyState> propagate_states(const GrfProfile& profile, const BodyState& initial,
                                        const Stance& stance, const RobotParams& params,
                                        std::span<const double> times);

struct TransformResult {
  GrfProfile profile;
  /// Larger of the row-normalized solve residual and the mismatch (rad)
  /// between the requested theta at t2 and the one the other entries imply.
  double residual = 0.0;
  /// Pitch at t2 implied by the other entries of the request.
  double theta_t2 = 0.0;
};

/// Solves for the profile whose closed-form states pass through the
/// configurations in `d`. With a single contact pair and frozen lever arms the
/// pitch at t2 follows from x and z at t2 and the state at t1, so that entry is
/// not an independent equation; the system is closed by requiring the push-pair
/// force to be continuous at t1 and to vanish at t2 (both components).
///
/// Throws TransformError for degenerate times or a singular system. Never
/// throws on a large residual; callers decide what is acceptable.
TransformResult solve_profile(const DOpt& d, const BodyState& initial, const Stance& stance,
                              const RobotParams& params);

/// solve_profile that additionally throws InconsistencyError when the
/// residual exceeds 1e-6.
GrfProfile dopt_to_profile(const DOpt& d, const BodyState& initial, const Stance& stance,
                           const RobotParams& params);

/// Inverse direction: sample the closed-form states at {t1/2, t1, t2}.
DOpt profile_to_dopt(const GrfProfile& profile, const BodyState& initial, const Stance& stance,
                     const RobotParams& params);

}  // namespace grf
}  // namespace jumpplan
