#include "jumpplan/grf.hpp"

#include <cmath>
#include <string>

#include <Eigen/LU>

#include "jumpplan/error.hpp"

namespace jumpplan {

std::array<double, GrfProfile::kCoefficients> GrfProfile::coefficients() const {
  return {shared_x[0],    shared_x[1],    lead_z[0],      lead_z[1],
          push_z[0],      push_z[1],      push_x_quad[0], push_x_quad[1],
          push_x_quad[2], push_z_quad[0], push_z_quad[1], push_z_quad[2]};
}

GrfProfile GrfProfile::from_coefficients(const std::array<double, kCoefficients>& c, double t1,
                                         double t2, double t3) {
  GrfProfile p;
  p.t1 = t1;
  p.t2 = t2;
  p.t3 = t3;
  p.shared_x = {c[0], c[1]};
  p.lead_z = {c[2], c[3]};
  p.push_z = {c[4], c[5]};
  p.push_x_quad = {c[6], c[7], c[8]};
  p.push_z_quad = {c[9], c[10], c[11]};
  return p;
}

namespace grf {
namespace {

using Real = long double;
// Affine function of the 12 unknowns; index 12 holds the constant term.
using Affine = Eigen::Matrix<Real, 13, 1>;

Affine unit(int i) {
  Affine a = Affine::Zero();
  a[i] = 1;
  return a;
}

Affine constant(Real c) {
  Affine a = Affine::Zero();
  a[12] = c;
  return a;
}

// Quadratic acceleration polynomial in phase-local time.
template <typename T>
struct Quad {
  T c0, c1, c2;
};

template <typename T>
struct Channel {
  T p;
  T v;
};

template <typename T>
Channel<T> advance(const Channel<T>& s, const Quad<T>& a, Real tau) {
  const Real t2 = tau * tau;
  const Real t3 = t2 * tau;
  const Real t4 = t3 * tau;
  Channel<T> out{s.p + tau * s.v + (t2 / 2) * a.c0 + (t3 / 6) * a.c1 + (t4 / 12) * a.c2,
                 s.v + tau * a.c0 + (t2 / 2) * a.c1 + (t3 / 3) * a.c2};
  return out;
}

// Planar mechanics shared by both directions of the transform.
struct Mechanics {
  Real mass;
  Real inertia;
  Real gravity;
  Vec2 lead_arm;
  Vec2 push_arm;
};

Mechanics mechanics(const BodyState& initial, const Stance& stance, const RobotParams& params) {
  const Vec2 com{initial.x_c, initial.z_c};
  return {params.mass, params.planar_inertia(stance.plane), params.gravity,
          stance.lead_foot - com, stance.push_foot - com};
}

// Per-phase force polynomials in phase-local time.
template <typename T>
struct PhaseForces {
  Quad<T> shared_x, lead_z, push_z;    // [0, t1)
  Quad<T> push_x, push_zq;             // [t1, t2)
};

template <typename T>
struct Accels {
  Quad<T> h, z, th;
};

template <typename T>
Quad<T> scale(const Quad<T>& q, Real k) {
  return {k * q.c0, k * q.c1, k * q.c2};
}

template <typename T>
Quad<T> add(const Quad<T>& a, const Quad<T>& b) {
  return {a.c0 + b.c0, a.c1 + b.c1, a.c2 + b.c2};
}

template <typename T>
Accels<T> stance_accels(const PhaseForces<T>& f, const Mechanics& m, const T& g_term) {
  // Each pair has two feet carrying identical forces.
  const Real rlh = m.lead_arm.x(), rlz = m.lead_arm.y();
  const Real rph = m.push_arm.x(), rpz = m.push_arm.y();
  Accels<T> a;
  a.h = scale(f.shared_x, 4 / m.mass);
  a.z = scale(add(f.lead_z, f.push_z), 2 / m.mass);
  a.z.c0 = a.z.c0 - g_term;
  // moment r_z f_h - r_h f_z summed over both pairs
  const Quad<T> moment = add(scale(f.shared_x, rlz + rpz),
                             add(scale(f.lead_z, -rlh), scale(f.push_z, -rph)));
  a.th = scale(moment, 2 / m.inertia);
  return a;
}

template <typename T>
Accels<T> push_accels(const PhaseForces<T>& f, const Mechanics& m, const T& g_term) {
  const Real rph = m.push_arm.x(), rpz = m.push_arm.y();
  Accels<T> a;
  a.h = scale(f.push_x, 2 / m.mass);
  a.z = scale(f.push_zq, 2 / m.mass);
  a.z.c0 = a.z.c0 - g_term;
  a.th = scale(add(scale(f.push_x, rpz), scale(f.push_zq, -rph)), 2 / m.inertia);
  return a;
}

template <typename T>
struct Planar {
  Channel<T> h, z, th;
};

template <typename T>
Planar<T> advance(const Planar<T>& s, const Accels<T>& a, Real tau) {
  return {advance(s.h, a.h, tau), advance(s.z, a.z, tau), advance(s.th, a.th, tau)};
}

template <typename T>
Planar<T> ballistic(const Planar<T>& s, const T& g_term, const T& zero, Real tau) {
  const Quad<T> none{zero, zero, zero};
  Quad<T> fall{zero, zero, zero};
  fall.c0 = zero - g_term;
  return {advance(s.h, none, tau), advance(s.z, fall, tau), advance(s.th, none, tau)};
}

// States at arbitrary times given per-phase force polynomials.
template <typename T>
class Propagator {
 public:
  Propagator(const PhaseForces<T>& f, const Mechanics& m, const Planar<T>& start, Real t1,
             Real t2, const T& zero)
      : t1_(t1), t2_(t2), zero_(zero), g_(zero), start_(start) {
    g_ = zero + constant_like(m.gravity);
    stance_ = stance_accels(f, m, g_);
    push_ = push_accels(f, m, g_);
    at_t1_ = advance(start_, stance_, t1_);
    at_t2_ = advance(at_t1_, push_, t2_ - t1_);
  }

  Planar<T> at(Real t) const {
    if (t <= t1_) return advance(start_, stance_, t);
    if (t <= t2_) return advance(at_t1_, push_, t - t1_);
    return ballistic(at_t2_, g_, zero_, t - t2_);
  }

 private:
  T constant_like(Real v) const {
    if constexpr (std::is_same_v<T, Real>) {
      return v;
    } else {
      return constant(v);
    }
  }

  Real t1_, t2_;
  T zero_;
  T g_;
  Planar<T> start_;
  Accels<T> stance_, push_;
  Planar<T> at_t1_, at_t2_;
};

Planar<Real> start_numeric(const BodyState& s) {
  return {{s.x_c, s.vx}, {s.z_c, s.vz}, {s.theta, s.omega}};
}

Planar<Affine> start_affine(const BodyState& s) {
  return {{constant(s.x_c), constant(s.vx)},
          {constant(s.z_c), constant(s.vz)},
          {constant(s.theta), constant(s.omega)}};
}

// Monomial profile -> phase-local numeric polynomials.
PhaseForces<Real> numeric_forces(const GrfProfile& p) {
  const Real t1 = p.t1;
  auto lin = [](const std::array<double, 2>& c) { return Quad<Real>{c[0], c[1], 0}; };
  auto shifted = [t1](const std::array<double, 3>& b) {
    const Real b0 = b[0], b1 = b[1], b2 = b[2];
    return Quad<Real>{b0 + b1 * t1 + b2 * t1 * t1, b1 + 2 * b2 * t1, b2};
  };
  return {lin(p.shared_x), lin(p.lead_z), lin(p.push_z), shifted(p.push_x_quad),
          shifted(p.push_z_quad)};
}

// Unknown layout: nodal force values
//   0,1  shared x at 0, t1      2,3  lead z at 0, t1      4,5  push z at 0, t1
//   6,7,8  push x at t1, mid, t2      9,10,11  push z at t1, mid, t2
PhaseForces<Affine> nodal_forces(Real t1, Real t2) {
  auto lin = [t1](int i0, int i1) {
    return Quad<Affine>{unit(i0), (unit(i1) - unit(i0)) / t1, Affine::Zero()};
  };
  const Real h = (t2 - t1) / 2;
  auto quad = [h](int n0, int n1, int n2) {
    Quad<Affine> q;
    q.c0 = unit(n0);
    q.c2 = (unit(n0) - 2 * unit(n1) + unit(n2)) / (2 * h * h);
    q.c1 = (unit(n1) - unit(n0)) / h - h * q.c2;
    return q;
  };
  return {lin(0, 1), lin(2, 3), lin(4, 5), quad(6, 7, 8), quad(9, 10, 11)};
}

std::array<Real, 2> linear_monomial(Real v0, Real v1, Real t1) { return {v0, (v1 - v0) / t1}; }

std::array<Real, 3> quadratic_monomial(Real n0, Real n1, Real n2, Real t1, Real h) {
  const Real c0 = n0;
  const Real c2 = (n0 - 2 * n1 + n2) / (2 * h * h);
  const Real c1 = (n1 - n0) / h - h * c2;
  return {c0 - c1 * t1 + c2 * t1 * t1, c1 - 2 * c2 * t1, c2};
}

}  // namespace

PairForces eval(const GrfProfile& p, double t) {
  if (!(t >= 0.0)) throw ContractError("grf::eval: negative time");
  PairForces f;
  if (t < p.t1) {
    const double sx = p.shared_x[0] + p.shared_x[1] * t;
    f.lead = {sx, p.lead_z[0] + p.lead_z[1] * t};
    f.push = {sx, p.push_z[0] + p.push_z[1] * t};
  } else if (t < p.t2) {
    const auto& bx = p.push_x_quad;
    const auto& bz = p.push_z_quad;
    f.push = {bx[0] + bx[1] * t + bx[2] * t * t, bz[0] + bz[1] * t + bz[2] * t * t};
  }
  return f;
}

std::vector<BodyState> propagate_states(const GrfProfile& profile, const BodyState& initial,
                                        const Stance& stance, const RobotParams& params,
                                        std::span<const double> times) {
  if (!profile.valid_times()) throw ContractError("propagate_states: invalid phase times");
  const Mechanics m = mechanics(initial, stance, params);
  const Propagator<Real> prop(numeric_forces(profile), m, start_numeric(initial), profile.t1,
                              profile.t2, Real{0});
  std::vector<BodyState> out;
  out.reserve(times.size());
  for (double t : times) {
    if (t < 0.0 || t > profile.t3 + 1e-12) {
      throw ContractError("propagate_states: time " + std::to_string(t) + " outside [0, t3]");
    }
    const Planar<Real> s = prop.at(t);
    BodyState b = initial;
    b.x_c = static_cast<double>(s.h.p);
    b.vx = static_cast<double>(s.h.v);
    b.z_c = static_cast<double>(s.z.p);
    b.vz = static_cast<double>(s.z.v);
    b.theta = static_cast<double>(s.th.p);
    b.omega = static_cast<double>(s.th.v);
    out.push_back(b);
  }
  return out;
}

TransformResult solve_profile(const DOpt& d, const BodyState& initial, const Stance& stance,
                              const RobotParams& params) {
  const Vec3 dur = d.durations();
  if (!(dur.array() > 0.0).all() || !dur.allFinite()) {
    throw TransformError("dopt_to_profile: phase durations must be positive");
  }
  const Real t1 = d.t1();
  const Real t2 = d.t2();

  const Mechanics m = mechanics(initial, stance, params);
  const Propagator<Affine> prop(nodal_forces(t1, t2), m, start_affine(initial), t1, t2,
                                Affine::Zero());

  using Mat = Eigen::Matrix<Real, 12, 12>;
  using Vec = Eigen::Matrix<Real, 12, 1>;
  Mat a = Mat::Zero();
  Vec b = Vec::Zero();

  // With one contact pair and frozen lever arms, theta(t2) is fixed by x(t2),
  // z(t2) and the state at t1, so its row is left out and checked afterwards.
  const std::array<Real, 3> when{t1 / 2, t1, t2};
  int row = 0;
  Affine theta_t2 = Affine::Zero();
  auto add_row = [&](const Affine& f, double target) {
    const Real norm = f.head<12>().cwiseAbs().maxCoeff();
    if (!(norm > 0)) throw TransformError("dopt_to_profile: state row has no force dependence");
    a.row(row) = f.head<12>().transpose() / norm;
    b[row] = (static_cast<Real>(target) - f[12]) / norm;
    ++row;
  };
  for (std::size_t k = 0; k < 3; ++k) {
    const Planar<Affine> s = prop.at(when[k]);
    const Vec3 target = d.state(k);
    add_row(s.h.p, target.x());
    add_row(s.z.p, target.y());
    if (k < 2) {
      add_row(s.th.p, target.z());
    } else {
      theta_t2 = s.th.p;
    }
  }
  // Closure: push force continuous at t1 and zero at liftoff.
  a(row, 6) = 1;
  a(row, 1) = -1;
  ++row;
  a(row, 9) = 1;
  a(row, 5) = -1;
  ++row;
  a(row, 8) = 1;
  ++row;
  a(row, 11) = 1;

  const Eigen::FullPivLU<Mat> lu(a);
  if (lu.rank() < 12 || !(lu.rcond() > 1e-13L)) {
    throw TransformError("dopt_to_profile: singular transform (rcond " +
                         std::to_string(static_cast<double>(lu.rcond())) + ")");
  }
  const Vec y = lu.solve(b);
  const Real theta_t2_pred = theta_t2.head<12>().dot(y) + theta_t2[12];
  const Real solve_residual = (a * y - b).cwiseAbs().maxCoeff();
  const Real theta_residual = std::abs(theta_t2_pred - static_cast<Real>(d.values[8]));
  const Real residual = std::max(solve_residual, theta_residual);
  if (!std::isfinite(static_cast<double>(residual))) {
    throw TransformError("dopt_to_profile: non-finite solution");
  }

  const Real h = (t2 - t1) / 2;
  const auto sx = linear_monomial(y[0], y[1], t1);
  const auto lz = linear_monomial(y[2], y[3], t1);
  const auto pz = linear_monomial(y[4], y[5], t1);
  const auto px2 = quadratic_monomial(y[6], y[7], y[8], t1, h);
  const auto pz2 = quadratic_monomial(y[9], y[10], y[11], t1, h);

  TransformResult out;
  GrfProfile& p = out.profile;
  p.t1 = d.t1();
  p.t2 = d.t2();
  p.t3 = d.t3();
  p.shared_x = {static_cast<double>(sx[0]), static_cast<double>(sx[1])};
  p.lead_z = {static_cast<double>(lz[0]), static_cast<double>(lz[1])};
  p.push_z = {static_cast<double>(pz[0]), static_cast<double>(pz[1])};
  for (std::size_t i = 0; i < 3; ++i) {
    p.push_x_quad[i] = static_cast<double>(px2[i]);
    p.push_z_quad[i] = static_cast<double>(pz2[i]);
  }
  out.residual = static_cast<double>(residual);
  out.theta_t2 = static_cast<double>(theta_t2_pred);
  return out;
}

GrfProfile dopt_to_profile(const DOpt& d, const BodyState& initial, const Stance& stance,
                           const RobotParams& params) {
  TransformResult r = solve_profile(d, initial, stance, params);
  if (r.residual > 1e-6) {
    throw InconsistencyError("dopt_to_profile: residual " + std::to_string(r.residual));
  }
  return r.profile;
}

DOpt profile_to_dopt(const GrfProfile& profile, const BodyState& initial, const Stance& stance,
                     const RobotParams& params) {
  const std::array<double, 3> times{profile.t1 / 2, profile.t1, profile.t2};
  const auto states = propagate_states(profile, initial, stance, params, times);
  DOpt d;
  for (std::size_t k = 0; k < 3; ++k) d.set_state(k, states[k].configuration());
  d.values[9] = profile.t1;
  d.values[10] = profile.t2 - profile.t1;
  d.values[11] = profile.t3 - profile.t2;
  return d;
}

}  // namespace grf
}  // namespace jumpplan
