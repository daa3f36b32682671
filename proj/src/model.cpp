#include "jumpplan/model.hpp"

#include <fstream>
#include <sstream>

#include <Eigen/Geometry>
#include <yaml-cpp/yaml.h>

#include "jumpplan/error.hpp"
#include "jumpplan/text.hpp"

namespace jumpplan {
namespace {

constexpr std::array<const char*, 4> kLegKeys{"front_left", "front_right", "rear_left",
                                              "rear_right"};

bool finite3(const Vec3& v) { return v.allFinite(); }

std::string seq(std::initializer_list<double> values) {
  std::string out = "[";
  bool first = true;
  for (double v : values) {
    if (!first) out += ", ";
    out += text::number(v);
    first = false;
  }
  return out + "]";
}

template <int N>
Eigen::Matrix<double, N, 1> read_vec(const YAML::Node& node, const char* key) {
  if (!node.IsSequence() || node.size() != N) {
    throw ContractError(std::string("params: '") + key + "' must be a sequence of " +
                        std::to_string(N) + " numbers");
  }
  Eigen::Matrix<double, N, 1> out;
  for (int i = 0; i < N; ++i) out[i] = node[i].as<double>();
  return out;
}

}  // namespace

void RobotParams::validate() const {
  auto fail = [](const std::string& msg) { throw ContractError("invalid robot params: " + msg); };
  if (!(mass > 0.0)) fail("mass must be positive");
  if (!(inertia_diag.array() > 0.0).all()) fail("inertia entries must be positive");
  if (!(thigh_length > 0.0) || !(shank_length > 0.0)) fail("link lengths must be positive");
  if (!(torque_limit > 0.0)) fail("torque_limit must be positive");
  if (!(friction_coeff > 0.0)) fail("friction_coeff must be positive");
  if (!(hip_range.min < hip_range.max)) fail("hip_range min must be below max");
  if (!(knee_range.min < knee_range.max)) fail("knee_range min must be below max");
  if (!(gravity > 0.0)) fail("gravity must be positive");
  for (const auto& h : hip_offsets) {
    if (!finite3(h)) fail("hip offsets must be finite");
  }
}

std::uint64_t RobotParams::hash() const {
  // FNV-1a over the canonical YAML text; independent of struct layout.
  const std::string canonical = params_to_yaml(*this);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string params_to_yaml(const RobotParams& p) {
  std::ostringstream out;
  out << "mass: " << text::number(p.mass) << "\n";
  out << "inertia_diag: " << seq({p.inertia_diag.x(), p.inertia_diag.y(), p.inertia_diag.z()})
      << "\n";
  out << "hip_offsets:\n";
  for (std::size_t i = 0; i < 4; ++i) {
    const Vec3& h = p.hip_offsets[i];
    out << "  " << kLegKeys[i] << ": " << seq({h.x(), h.y(), h.z()}) << "\n";
  }
  out << "thigh_length: " << text::number(p.thigh_length) << "\n";
  out << "shank_length: " << text::number(p.shank_length) << "\n";
  out << "hip_range: " << seq({p.hip_range.min, p.hip_range.max}) << "\n";
  out << "knee_range: " << seq({p.knee_range.min, p.knee_range.max}) << "\n";
  out << "torque_limit: " << text::number(p.torque_limit) << "\n";
  out << "friction_coeff: " << text::number(p.friction_coeff) << "\n";
  out << "gravity: " << text::number(p.gravity) << "\n";
  out << "min_clearance: " << text::number(p.min_clearance) << "\n";
  return out.str();
}

RobotParams params_from_yaml(const std::string& text_in) {
  YAML::Node root;
  try {
    root = YAML::Load(text_in);
  } catch (const YAML::ParserException& e) {
    throw ParseError("params: " + e.msg, static_cast<std::size_t>(e.mark.line + 1));
  }
  RobotParams p;
  if (root.IsNull()) return p;
  if (!root.IsMap()) throw ContractError("params: top level must be a mapping");
  try {
    for (const auto& kv : root) {
      const auto key = kv.first.as<std::string>();
      const YAML::Node& v = kv.second;
      if (key == "mass") {
        p.mass = v.as<double>();
      } else if (key == "inertia_diag") {
        p.inertia_diag = read_vec<3>(v, "inertia_diag");
      } else if (key == "hip_offsets") {
        for (std::size_t i = 0; i < 4; ++i) {
          if (v[kLegKeys[i]]) p.hip_offsets[i] = read_vec<3>(v[kLegKeys[i]], kLegKeys[i]);
        }
      } else if (key == "thigh_length") {
        p.thigh_length = v.as<double>();
      } else if (key == "shank_length") {
        p.shank_length = v.as<double>();
      } else if (key == "hip_range") {
        const auto r = read_vec<2>(v, "hip_range");
        p.hip_range = {r[0], r[1]};
      } else if (key == "knee_range") {
        const auto r = read_vec<2>(v, "knee_range");
        p.knee_range = {r[0], r[1]};
      } else if (key == "torque_limit") {
        p.torque_limit = v.as<double>();
      } else if (key == "friction_coeff") {
        p.friction_coeff = v.as<double>();
      } else if (key == "gravity") {
        p.gravity = v.as<double>();
      } else if (key == "min_clearance") {
        p.min_clearance = v.as<double>();
      } else {
        throw ContractError("params: unknown key '" + key + "'");
      }
    }
  } catch (const YAML::Exception& e) {
    throw ParseError("params: " + e.msg, static_cast<std::size_t>(e.mark.line + 1));
  }
  p.validate();
  return p;
}

RobotParams load_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open params file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return params_from_yaml(buf.str());
}

void save_params(const RobotParams& params, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write params file " + path.string());
  out << params_to_yaml(params);
}

bool FullState::finite() const {
  return finite3(p_c) && finite3(euler) && finite3(v_c) && finite3(omega_b);
}

Vec3 plane_axis(Plane plane, double plane_angle) {
  const double c = std::cos(plane_angle);
  const double s = std::sin(plane_angle);
  if (plane == Plane::sagittal) return {c, s, 0.0};
  return {s, -c, 0.0};
}

FullState embed(const BodyState& b) {
  const Vec3 u = plane_axis(b.plane, b.plane_angle);
  FullState f;
  f.p_c = b.x_c * u + Vec3(0.0, 0.0, b.z_c);
  f.v_c = b.vx * u + Vec3(0.0, 0.0, b.vz);
  if (b.plane == Plane::sagittal) {
    f.euler = {0.0, b.theta, b.plane_angle};
    f.omega_b = {0.0, b.omega, 0.0};
  } else {
    f.euler = {b.theta, 0.0, b.plane_angle};
    f.omega_b = {b.omega, 0.0, 0.0};
  }
  return f;
}

BodyState project(const FullState& f, Plane plane, double plane_angle) {
  const Vec3 u = plane_axis(plane, plane_angle);
  BodyState b;
  b.plane = plane;
  b.plane_angle = plane_angle;
  b.x_c = f.p_c.dot(u);
  b.z_c = f.p_c.z();
  b.vx = f.v_c.dot(u);
  b.vz = f.v_c.z();
  if (plane == Plane::sagittal) {
    b.theta = f.euler.y();
    b.omega = f.omega_b.y();
  } else {
    b.theta = f.euler.x();
    b.omega = f.omega_b.x();
  }
  return b;
}

Eigen::Matrix3d euler_to_rotation(const Vec3& euler) {
  return (Eigen::AngleAxisd(euler.z(), Vec3::UnitZ()) *
          Eigen::AngleAxisd(euler.y(), Vec3::UnitY()) *
          Eigen::AngleAxisd(euler.x(), Vec3::UnitX()))
      .toRotationMatrix();
}

namespace model {

Wrench net_wrench(std::span<const Vec3> forces, std::span<const Vec3> foot_vectors) {
  if (forces.size() != foot_vectors.size()) {
    throw ContractError("net_wrench: " + std::to_string(forces.size()) + " forces but " +
                        std::to_string(foot_vectors.size()) + " foot vectors");
  }
  Wrench w;
  for (std::size_t i = 0; i < forces.size(); ++i) {
    w.force += forces[i];
    w.torque += foot_vectors[i].cross(forces[i]);
  }
  return w;
}

FullState step_centroidal(const FullState& s, const Wrench& w, const RobotParams& params,
                          double dt) {
  if (!(dt > 0.0)) throw ContractError("step_centroidal: dt must be positive");
  const Vec3 accel = w.force / params.mass - Vec3(0.0, 0.0, params.gravity);
  // Gravity acts at the CoM, so it contributes no moment.
  const Vec3 torque_body = euler_to_rotation(s.euler).transpose() * w.torque;

  FullState next;
  next.p_c = s.p_c + dt * s.v_c;
  next.v_c = s.v_c + dt * accel;
  next.euler = s.euler + dt * s.omega_b;
  next.omega_b = s.omega_b + dt * torque_body.cwiseQuotient(params.inertia_diag);
  return next;
}

}  // namespace model
}  // namespace jumpplan
