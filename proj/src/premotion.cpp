#include "jumpplan/premotion.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "jumpplan/error.hpp"
#include "jumpplan/optimizer.hpp"
#include "jumpplan/text.hpp"
#include "jumpplan/trajectory_io.hpp"

namespace jumpplan {

namespace {

std::vector<double> sweep(const AxisRange& r, double step) {
  std::vector<double> v;
  const double slack = 1e-9 * std::max(1.0, std::abs(r.max));
  for (std::size_t i = 0;; ++i) {
    // Rounded so that 0.2 + 2 * 0.05 prints as 0.3.
    const double x = std::round((r.min + static_cast<double>(i) * step) * 1e12) / 1e12;
    if (x > r.max + slack) break;
    v.push_back(x);
  }
  if (v.empty()) v.push_back(r.min);
  return v;
}

}  // namespace

std::vector<Vec3> TargetSpec::targets() const {
  if (!(step > 0.0) || !(theta_step > 0.0)) {
    throw ContractError("target grid: steps must be positive");
  }
  for (const AxisRange* r : {&x, &z, &theta}) {
    if (!(r->min <= r->max)) throw ContractError("target grid: ranges need min <= max");
  }
  std::vector<Vec3> out;
  for (double xv : sweep(x, step)) {
    for (double zv : sweep(z, step)) {
      for (double tv : sweep(theta, theta_step)) out.emplace_back(xv, zv, tv);
    }
  }
  return out;
}

TargetSpec default_target_spec(JumpTask task, double step) {
  TargetSpec s;
  s.task = task;
  s.step = step;
  s.theta_step = step;
  s.z = {0.15, 0.4};
  s.theta = {0.0, 0.0};
  constexpr double turn = 2 * std::numbers::pi;
  switch (task) {
    case JumpTask::front:
    case JumpTask::two_contact:
    case JumpTask::four_contact:
      s.x = {0.2, 0.8};
      break;
    case JumpTask::rear:
      s.x = {-0.8, -0.2};
      break;
    case JumpTask::side_left:
      s.x = {-0.5, -0.1};
      break;
    case JumpTask::side_right:
      s.x = {0.1, 0.5};
      break;
    case JumpTask::flip_back:
    case JumpTask::flip_side:
      s.x = {-0.2, 0.2};
      s.z = {0.2, 0.4};
      s.theta = {-turn, -turn};
      s.theta_step = std::numbers::pi / 4;
      break;
  }
  return s;
}

namespace premotion {

std::optional<PremotionEntry> lookup(const PremotionLibrary& library, const Vec3& target,
                                     JumpTask task) {
  const PremotionEntry* best = nullptr;
  double best_dist = 0.0;
  for (const PremotionEntry& e : library.entries) {
    if (e.task != task) continue;
    const double d = (e.target - target).norm();
    if (!(d < library.lookup_threshold)) continue;
    if (best == nullptr || d < best_dist || (d == best_dist && e.fitness < best->fitness)) {
      best = &e;
      best_dist = d;
    }
  }
  if (best == nullptr) return std::nullopt;
  return *best;
}

PremotionLibrary build_library(std::span<const TargetSpec> specs, const RobotParams& params,
                               const SolveConfig& cfg, std::span<const CSpaceGrid> grids,
                               const std::optional<std::filesystem::path>& out_dir,
                               BuildLog* log,
                               const std::function<void(const std::string&)>& progress) {
  cfg.validate();
  params.validate();
  if (specs.empty()) throw ContractError("build_library: no target grids given");
  PremotionLibrary lib;
  lib.params_hash = params.hash();
  BuildLog local;
  std::map<JumpTask, CSpaceGrid> built;
  auto grid_for = [&](JumpTask task) -> const CSpaceGrid& {
    for (const CSpaceGrid& g : grids) {
      if (g.task == task) return g;
    }
    auto it = built.find(task);
    if (it == built.end()) it = built.emplace(task, cspace::build(params, task)).first;
    return it->second;
  };
  if (out_dir) std::filesystem::create_directories(*out_dir / "trajectories");

  std::size_t index = 0;
  for (const TargetSpec& spec : specs) {
    const CSpaceGrid& grid = grid_for(spec.task);
    for (const Vec3& target : spec.targets()) {
      SolveConfig c = cfg;
      c.seed = cfg.seed + index++;
      ++local.attempted;
      const std::string label = std::string(to_string(spec.task)) + " [" +
                                text::number(target.x()) + ", " + text::number(target.y()) +
                                ", " + text::number(target.z()) + "]";
      const Problem problem = make_problem(spec.task, params, grid, target);
      SolveResult r;
      try {
        r = optimizer::solve(problem, c);
      } catch (const InfeasibleRegionError& e) {
        local.failures.push_back(label + ": " + e.what());
        continue;
      }
      if (!r.converged) {
        std::string why = label + ": not converged after " + std::to_string(r.generations) +
                          " generations; sigma";
        for (std::size_t i = 0; i < FitnessLayers::kCount; ++i) {
          why += std::string(" ") +
                 std::string(optimizer::layer_name(static_cast<FitnessLayer>(i))) + "=" +
                 text::number(r.scores.sigma[i], 4);
        }
        local.failures.push_back(why);
        if (progress) progress(why);
        continue;
      }
      PremotionEntry e;
      e.task = spec.task;
      e.target = target;
      e.d_res = r.d_res;
      e.fitness = r.fitness;
      e.params_hash = lib.params_hash;
      char name[64];
      std::snprintf(name, sizeof(name), "trajectories/%s_%04zu.csv",
                    std::string(to_string(spec.task)).c_str(), lib.entries.size());
      e.trajectory = name;
      if (out_dir) {
        trajectory_io::save(trajectory_io::tabulate(r.trajectory, problem.stance, params),
                            *out_dir / e.trajectory);
      }
      lib.entries.push_back(e);
      if (progress) progress(label + ": ok in " + std::to_string(r.generations) + " generations");
    }
  }
  if (log != nullptr) *log = local;
  if (lib.entries.empty()) {
    throw EmptyLibraryError("no target converged (" + std::to_string(local.attempted) +
                            " attempted)");
  }
  if (out_dir) save(lib, *out_dir / "index.yaml");
  return lib;
}

namespace {

std::string seq(std::span<const double> v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) s += ", ";
    s += text::number(v[i]);
  }
  return s + "]";
}

ParseError schema_error(const std::string& what, const YAML::Node& node) {
  return ParseError("library index: " + what, static_cast<std::size_t>(node.Mark().line + 1));
}

const YAML::Node require(const YAML::Node& map, const char* key) {
  const YAML::Node v = map[key];
  if (!v) throw schema_error(std::string("missing key '") + key + "'", map);
  return v;
}

template <std::size_t N>
std::array<double, N> numbers(const YAML::Node& node, const char* key) {
  if (!node.IsSequence() || node.size() != N) {
    throw schema_error(std::string(key) + " must hold " + std::to_string(N) + " numbers", node);
  }
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = node[i].as<double>();
  return out;
}

}  // namespace

std::string to_yaml(const PremotionLibrary& library) {
  std::ostringstream out;
  out << "version: " << kIndexVersion << "\n";
  out << "params_hash: " << library.params_hash << "\n";
  out << "lookup_threshold: " << text::number(library.lookup_threshold) << "\n";
  if (library.entries.empty()) {
    out << "entries: []\n";
    return out.str();
  }
  out << "entries:\n";
  for (const PremotionEntry& e : library.entries) {
    const double target[3] = {e.target.x(), e.target.y(), e.target.z()};
    out << "  - task: " << to_string(e.task) << "\n";
    out << "    target: " << seq(target) << "\n";
    out << "    d_res: " << seq(e.d_res.values) << "\n";
    out << "    fitness: " << text::number(e.fitness) << "\n";
    out << "    params_hash: " << e.params_hash << "\n";
    out << "    trajectory: \"" << e.trajectory << "\"\n";
  }
  return out.str();
}

PremotionLibrary from_yaml(const std::string& text_in) {
  YAML::Node root;
  try {
    root = YAML::Load(text_in);
  } catch (const YAML::ParserException& e) {
    throw ParseError("library index: " + e.msg, static_cast<std::size_t>(e.mark.line + 1));
  }
  if (!root.IsMap()) throw ParseError("library index: top level must be a mapping", 1);
  PremotionLibrary lib;
  try {
    const int version = require(root, "version").as<int>();
    if (version != kIndexVersion) {
      throw VersionError("library index version " + std::to_string(version) + ", expected " +
                         std::to_string(kIndexVersion));
    }
    lib.params_hash = require(root, "params_hash").as<std::uint64_t>();
    if (root["lookup_threshold"]) lib.lookup_threshold = root["lookup_threshold"].as<double>();
    const YAML::Node entries = require(root, "entries");
    if (!entries.IsSequence()) throw schema_error("entries must be a list", entries);
    for (const YAML::Node& n : entries) {
      PremotionEntry e;
      const auto task = parse_task(require(n, "task").as<std::string>());
      if (!task) throw schema_error("unknown task", n["task"]);
      e.task = *task;
      const auto t = numbers<3>(require(n, "target"), "target");
      e.target = Vec3(t[0], t[1], t[2]);
      e.d_res.values = numbers<12>(require(n, "d_res"), "d_res");
      e.fitness = require(n, "fitness").as<double>();
      e.params_hash = n["params_hash"] ? n["params_hash"].as<std::uint64_t>() : lib.params_hash;
      e.trajectory = require(n, "trajectory").as<std::string>();
      lib.entries.push_back(e);
    }
  } catch (const YAML::Exception& e) {
    throw ParseError("library index: " + e.msg, static_cast<std::size_t>(e.mark.line + 1));
  }
  return lib;
}

void save(const PremotionLibrary& library, const std::filesystem::path& index_path) {
  std::ofstream out(index_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + index_path.string());
  out << to_yaml(library);
  if (!out) throw std::runtime_error("failed writing " + index_path.string());
}

PremotionLibrary load(const std::filesystem::path& index_path, const RobotParams& params) {
  std::ifstream in(index_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + index_path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  PremotionLibrary lib = from_yaml(buf.str());
  const std::uint64_t want = params.hash();
  bool stale = lib.params_hash != want;
  for (const PremotionEntry& e : lib.entries) stale = stale || e.params_hash != want;
  if (stale) {
    throw StaleLibraryError("library " + index_path.string() +
                            " was built with different robot parameters");
  }
  return lib;
}

}  // namespace premotion
}  // namespace jumpplan
