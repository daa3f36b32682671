#include "jumpplan/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "jumpplan/error.hpp"
#include "jumpplan/kinematics.hpp"
#include "jumpplan/optimizer.hpp"
#include "jumpplan/text.hpp"

namespace jumpplan::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

std::vector<double> numbers(const std::string& text, std::size_t expected, const char* what) {
  std::istringstream in(text);
  std::vector<double> v;
  std::string word;
  while (in >> word) {
    const auto n = text::parse_number(word);
    if (!n) throw ContractError(std::string(what) + ": '" + word + "' is not a number");
    v.push_back(*n);
  }
  if (v.size() != expected) {
    throw ContractError(std::string(what) + ": expected " + std::to_string(expected) +
                        " numbers, got " + std::to_string(v.size()));
  }
  return v;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// Flag value, else the named file of the config directory when present.
std::optional<fs::path> resolve(const std::optional<fs::path>& flag, const fs::path& name) {
  if (flag) return flag;
  if (const auto dir = config_dir()) {
    const fs::path p = *dir / name;
    if (fs::exists(p)) return p;
  }
  return std::nullopt;
}

RobotParams params_from(const std::optional<fs::path>& flag) {
  const auto path = resolve(flag, "params.yaml");
  RobotParams p = path ? load_params(*path) : RobotParams{};
  p.validate();
  return p;
}

SolveConfig config_from(const std::optional<fs::path>& flag) {
  const auto path = resolve(flag, "solver.yaml");
  return path ? load_solve_config(*path) : SolveConfig{};
}

CSpaceGrid grid_from(const std::optional<fs::path>& flag, JumpTask task,
                     const RobotParams& params) {
  const auto path = resolve(flag, fs::path("cspace") / (std::string(to_string(task)) + ".bin"));
  if (!path) return cspace::build(params, task);
  CSpaceGrid g = cspace::load(*path);
  if (g.task != task) {
    throw ContractError(path->string() + " holds the grid of task " +
                        std::string(to_string(g.task)));
  }
  return g;
}

std::optional<PremotionLibrary> library_from(const std::optional<fs::path>& flag,
                                             const RobotParams& params) {
  const auto path = resolve(flag, fs::path("library") / "index.yaml");
  if (!path) return std::nullopt;
  return premotion::load(*path, params);
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

Json layer_json(const LayerScores& s) {
  Json j;
  for (std::size_t i = 0; i < FitnessLayers::kCount; ++i) {
    j[std::string(optimizer::layer_name(static_cast<FitnessLayer>(i)))] = s.sigma[i];
  }
  return j;
}

// Largest residual of the least-squares line y = a + b t.
double line_fit_residual(const std::vector<double>& t, const std::vector<double>& y) {
  const double n = static_cast<double>(t.size());
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    st += t[i];
    sy += y[i];
    stt += t[i] * t[i];
    sty += t[i] * y[i];
  }
  const double den = n * stt - st * st;
  const double b = den != 0.0 ? (n * sty - st * sy) / den : 0.0;
  const double a = (sy - b * st) / n;
  double worst = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) worst = std::max(worst, std::abs(y[i] - a - b * t[i]));
  return worst;
}

}  // namespace

std::optional<fs::path> config_dir() {
  const char* v = std::getenv(kConfigDirVariable);
  if (v == nullptr || *v == '\0') return std::nullopt;
  return fs::path(v);
}

Vec3 parse_target(const std::string& text) {
  const auto v = numbers(text, 3, "target");
  return {v[0], v[1], v[2]};
}

CSpaceRanges parse_ranges(const std::string& text) {
  const auto v = numbers(text, 6, "ranges");
  return {AxisRange{v[0], v[1]}, AxisRange{v[2], v[3]}, AxisRange{v[4], v[5]}};
}

AxisRange parse_range(const std::string& text) {
  const auto v = numbers(text, 2, "range");
  if (!(v[0] <= v[1])) throw ContractError("range: min must not exceed max");
  return {v[0], v[1]};
}

std::vector<JumpTask> parse_tasks(const std::string& text) {
  if (text == "all") return {kAllTasks.begin(), kAllTasks.end()};
  std::vector<JumpTask> out;
  std::istringstream in(text);
  std::string name;
  while (std::getline(in, name, ',')) {
    const auto t = parse_task(name);
    if (!t) throw ContractError("unknown task '" + name + "'");
    if (std::find(out.begin(), out.end(), *t) == out.end()) out.push_back(*t);
  }
  if (out.empty()) throw ContractError("no task given");
  return out;
}

std::vector<Vec3> perturbed_targets(const PremotionLibrary& library, JumpTask task,
                                    std::size_t count, double amplitude, std::uint64_t seed) {
  std::vector<Vec3> base;
  for (const PremotionEntry& e : library.entries) {
    if (e.task == task) base.push_back(e.target);
  }
  if (base.empty()) throw EmptyLibraryError("library has no entry for " + std::string(to_string(task)));
  Rng rng(seed);
  std::vector<Vec3> out;
  for (std::size_t i = 0; i < count; ++i) {
    Vec3 t = base[i % base.size()];
    t.x() += rng.uniform(-amplitude, amplitude);
    t.y() += rng.uniform(-amplitude, amplitude);
    out.push_back(t);
  }
  return out;
}

ValidationReport validate(const TrajectoryTable& table, Plane plane, const RobotParams& params,
                          const ValidationTolerances& tol) {
  ValidationReport rep;
  const auto& rows = table.rows;
  rep.rows = rows.size();
  rep.torque_limit = params.torque_limit;
  rep.min_friction_margin = std::numeric_limits<double>::infinity();
  rep.min_normal_force = std::numeric_limits<double>::infinity();
  if (rows.size() < 2) {
    rep.violations.push_back("fewer than two samples");
    return rep;
  }
  const auto [front_pair, rear_pair] = trajectory_io::column_pairs(plane);
  const Vec2 front_offset = planar_hip_offset(params, plane, front_pair);
  const Vec2 rear_offset = planar_hip_offset(params, plane, rear_pair);
  const double inertia = params.planar_inertia(plane);
  constexpr double kForceFloor = 1e-9;

  auto in_contact = [](const Vec2& f) { return f.norm() > kForceFloor; };
  std::size_t last_contact = 0;
  bool any_contact = false;

  for (std::size_t k = 0; k < rows.size(); ++k) {
    const TrajectoryRow& r = rows[k];
    const Vec2 com(r.x_c, r.z_c);
    double moment = 0.0;
    bool contact = false;
    const struct {
      Vec2 f, q, tau, offset;
    } pairs[2] = {{r.f_front, r.q_front, r.tau_front, front_offset},
                  {r.f_rear, r.q_rear, r.tau_rear, rear_offset}};
    for (const auto& p : pairs) {
      rep.max_torque = std::max({rep.max_torque, std::abs(p.tau.x()), std::abs(p.tau.y())});
      if (!in_contact(p.f)) continue;
      contact = true;
      rep.min_normal_force = std::min(rep.min_normal_force, p.f.y());
      rep.min_friction_margin =
          std::min(rep.min_friction_margin, params.friction_coeff * p.f.y() - std::abs(p.f.x()));
      const Vec2 foot =
          com + rotate_planar(r.theta, p.offset + kin::forward(p.q.x(), p.q.y(), params));
      moment += 2.0 * planar_moment(foot - com, p.f);
    }
    if (contact) {
      ++rep.contact_rows;
      last_contact = k;
      any_contact = true;
    }
    if (k + 1 == rows.size()) break;

    const TrajectoryRow& n = rows[k + 1];
    const double dt = n.t - r.t;
    if (!(dt > 0.0)) {
      rep.violations.push_back("time does not increase at sample " + std::to_string(k + 1));
      return rep;
    }
    const Vec2 net = 2.0 * (r.f_front + r.f_rear);
    const double predicted[6] = {r.x_c + dt * r.vx,
                                 r.z_c + dt * r.vz,
                                 r.theta + dt * r.omega,
                                 r.vx + dt * net.x() / params.mass,
                                 r.vz + dt * (net.y() / params.mass - params.gravity),
                                 r.omega + dt * moment / inertia};
    const double actual[6] = {n.x_c, n.z_c, n.theta, n.vx, n.vz, n.omega};
    for (int i = 0; i < 6; ++i) {
      rep.max_dynamics_residual =
          std::max(rep.max_dynamics_residual, std::abs(predicted[i] - actual[i]));
    }
  }

  // Flight: every sample after the last loaded one.
  const std::size_t first_flight = any_contact ? last_contact + 1 : 0;
  std::vector<double> t, x, z;
  for (std::size_t k = first_flight; k < rows.size(); ++k) {
    t.push_back(rows[k].t);
    x.push_back(rows[k].x_c);
    z.push_back(rows[k].z_c + 0.5 * params.gravity * rows[k].t * rows[k].t);
  }
  rep.flight_rows = t.size();
  if (t.size() >= 3) {
    rep.ballistic_deviation = std::max(line_fit_residual(t, x), line_fit_residual(t, z));
  }

  if (!any_contact) {
    rep.min_friction_margin = 0.0;
    rep.min_normal_force = 0.0;
  }
  if (rep.max_dynamics_residual > tol.dynamics) {
    rep.violations.push_back("dynamics residual " + text::number(rep.max_dynamics_residual, 4) +
                             " exceeds " + text::number(tol.dynamics));
  }
  if (rep.max_torque > params.torque_limit + tol.slack) {
    rep.violations.push_back("torque " + text::number(rep.max_torque, 6) + " N m exceeds the limit " +
                             text::number(params.torque_limit));
  }
  if (rep.min_normal_force < -tol.slack) {
    rep.violations.push_back("negative normal force " + text::number(rep.min_normal_force, 6));
  }
  if (rep.min_friction_margin < -tol.slack) {
    rep.violations.push_back("friction cone violated by " +
                             text::number(-rep.min_friction_margin, 6) + " N");
  }
  if (rep.ballistic_deviation > tol.ballistic) {
    rep.violations.push_back("flight deviates from a ballistic arc by " +
                             text::number(rep.ballistic_deviation, 4) + " m");
  }
  return rep;
}

int cspace_build(const CSpaceBuildOptions& opt, std::ostream& out, std::ostream&) {
  const RobotParams params = params_from(opt.params);
  const CSpaceRanges ranges =
      opt.ranges ? parse_ranges(*opt.ranges)
                 : cspace::default_ranges(default_initial_state(opt.task));
  FeasibilityStats stats;
  const auto start = std::chrono::steady_clock::now();
  const CSpaceGrid grid = cspace::build(params, opt.task, ranges, opt.divisions, &stats);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (opt.out.has_parent_path()) fs::create_directories(opt.out.parent_path());
  cspace::save(grid, opt.out);
  out << "task " << to_string(opt.task) << ": " << stats.evaluated << " points evaluated, "
      << grid.feasible_count() << " feasible, " << text::number(seconds, 3) << " s\n";
  out << stats.summary() << "\n";
  return kExitOk;
}

int plan(const PlanOptions& opt, std::ostream& out, std::ostream&) {
  const Vec3 target = parse_target(opt.target);
  const RobotParams params = params_from(opt.params);
  SolveConfig cfg = config_from(opt.config);
  if (opt.seed) cfg.seed = *opt.seed;
  const CSpaceGrid grid = grid_from(opt.cspace, opt.task, params);
  std::optional<PremotionLibrary> library;
  if (!opt.cold) library = library_from(opt.library, params);

  const Problem problem = make_problem(opt.task, params, grid, target);
  const SolveResult r = optimizer::solve(problem, cfg, library ? &*library : nullptr);

  TrajectoryTable table;
  if (r.scores.transform_ok) table = trajectory_io::tabulate(r.trajectory, problem.stance, params);
  table.infeasible = !r.converged;
  if (opt.out.has_parent_path()) fs::create_directories(opt.out.parent_path());
  trajectory_io::save(table, opt.out);

  Json report;
  report["task"] = std::string(to_string(opt.task));
  report["target"] = {target.x(), target.y(), target.z()};
  report["converged"] = r.converged;
  report["fitness"] = r.fitness;
  report["epsilon"] = r.epsilon;
  report["generations"] = r.generations;
  report["wall_time"] = r.wall_time;
  report["warm_started"] = r.warm_started;
  report["layer_satisfaction"] = layer_json(r.scores);
  report["energy"] = r.scores.energy;
  report["d_res"] = r.d_res.values;
  report["seed"] = cfg.seed;
  write_text(opt.report, report.dump(2) + "\n");

  out << (r.converged ? "converged" : "not converged") << " in " << r.generations
      << " generations, fitness " << text::number(r.fitness, 12) << ", "
      << text::number(r.wall_time, 3) << " s" << (r.warm_started ? " (warm start)" : "") << "\n";
  return r.converged ? kExitOk : kExitNotConverged;
}

int validate(const ValidateOptions& opt, std::ostream& out, std::ostream&) {
  const RobotParams params = params_from(opt.params);
  const TrajectoryTable table = trajectory_io::load(opt.trajectory);
  const ValidationReport rep = validate(table, layout(opt.task).plane, params);
  out << "samples " << rep.rows << " (stance " << rep.contact_rows << ", flight " << rep.flight_rows
      << ")\n";
  out << "max dynamics residual " << text::number(rep.max_dynamics_residual, 4) << "\n";
  out << "max |tau| " << text::number(rep.max_torque, 6) << " N m (limit "
      << text::number(rep.torque_limit) << ")\n";
  out << "min friction margin " << text::number(rep.min_friction_margin, 6) << " N\n";
  out << "min normal force " << text::number(rep.min_normal_force, 6) << " N\n";
  out << "ballistic deviation " << text::number(rep.ballistic_deviation, 4) << " m\n";
  if (table.infeasible) out << "note: trajectory is flagged infeasible\n";
  for (const std::string& v : rep.violations) out << "violation: " << v << "\n";
  out << (rep.ok() ? "valid" : "invalid") << "\n";
  return rep.ok() ? kExitOk : kExitNotConverged;
}

namespace {

int bench_table1(const BenchOptions& opt, const RobotParams& params, const SolveConfig& base,
                 std::ostream& out, std::ostream& err) {
  std::optional<PremotionLibrary> given = library_from(opt.library, params);
  std::string csv = "task,arm,seed,target_x,target_z,target_theta,wall_time,generations,converged\n";
  out << "task,cold_median_s,warm_median_s,speedup,cold_converged,warm_converged\n";
  for (JumpTask task : opt.tasks) {
    const CSpaceGrid grid = cspace::build(params, task);
    PremotionLibrary lib;
    if (given) {
      lib = *given;
    } else {
      const TargetSpec spec = default_target_spec(task, opt.step);
      const std::vector<CSpaceGrid> grids{grid};
      lib = premotion::build_library(std::span(&spec, 1), params, base, grids, std::nullopt,
                                     nullptr, [&err](const std::string& m) { err << m << "\n"; });
    }
    const auto targets = perturbed_targets(lib, task, opt.seeds, 0.05, opt.seed);
    std::vector<double> cold, warm;
    std::size_t cold_ok = 0, warm_ok = 0;
    for (std::size_t i = 0; i < targets.size(); ++i) {
      SolveConfig cfg = base;
      cfg.seed = opt.seed + i;
      const Problem problem = make_problem(task, params, grid, targets[i]);
      for (int arm = 0; arm < 2; ++arm) {
        const SolveResult r = optimizer::solve(problem, cfg, arm == 1 ? &lib : nullptr);
        (arm == 1 ? warm : cold).push_back(r.wall_time);
        (arm == 1 ? warm_ok : cold_ok) += r.converged ? 1 : 0;
        csv += std::string(to_string(task)) + (arm == 1 ? ",library," : ",cold,") +
               std::to_string(cfg.seed) + "," + text::number(targets[i].x()) + "," +
               text::number(targets[i].y()) + "," + text::number(targets[i].z()) + "," +
               text::number(r.wall_time, 6) + "," + std::to_string(r.generations) + "," +
               (r.converged ? "1" : "0") + "\n";
      }
    }
    const double mc = median(cold), mw = median(warm);
    out << to_string(task) << "," << text::number(mc, 4) << "," << text::number(mw, 4) << ","
        << text::number(mw > 0.0 ? mc / mw : 0.0, 4) << "," << cold_ok << "," << warm_ok << "\n";
  }
  if (!opt.out.empty()) write_text(opt.out, csv);
  return kExitOk;
}

int bench_lhs(const BenchOptions& opt, const RobotParams& params, const SolveConfig& base,
              std::ostream& out) {
  const Vec3 target = parse_target(opt.target);
  std::string csv = "task,generation,best_fitness,arm,seed\n";
  out << "task,lhs_median_generations,uniform_median_generations,lhs_wins,trials\n";
  for (JumpTask task : opt.tasks) {
    const CSpaceGrid grid = cspace::build(params, task);
    const Problem problem = make_problem(task, params, grid, target);
    SolveConfig cfg = base;
    cfg.seed = opt.seed;
    const InitComparison c = optimizer::compare_init(problem, cfg, opt.seeds);
    std::size_t wins = 0;
    std::vector<double> g1, g2;
    for (std::size_t t = 0; t < opt.seeds; ++t) {
      wins += c.first_generations[t] < c.second_generations[t] ? 1 : 0;
      g1.push_back(static_cast<double>(c.first_generations[t]));
      g2.push_back(static_cast<double>(c.second_generations[t]));
      for (int arm = 0; arm < 2; ++arm) {
        const auto& row = arm == 0 ? c.first[t] : c.second[t];
        const std::string name(optimizer::to_string(arm == 0 ? c.first_mode : c.second_mode));
        for (std::size_t g = 0; g < row.size(); ++g) {
          csv += std::string(to_string(task)) + "," + std::to_string(g + 1) + "," +
                 text::number(row[g], 12) + "," + name + "," + std::to_string(cfg.seed + t) + "\n";
        }
      }
    }
    out << to_string(task) << "," << text::number(median(g1)) << "," << text::number(median(g2))
        << "," << wins << "," << opt.seeds << "\n";
  }
  if (!opt.out.empty()) write_text(opt.out, csv);
  return kExitOk;
}

}  // namespace

int bench(const BenchOptions& opt, std::ostream& out, std::ostream& err) {
  if (opt.seeds == 0) throw ContractError("bench: --seeds must be positive");
  const RobotParams params = params_from(opt.params);
  const SolveConfig cfg = config_from(opt.config);
  if (opt.suite == "table1") return bench_table1(opt, params, cfg, out, err);
  if (opt.suite == "lhs") return bench_lhs(opt, params, cfg, out);
  throw ContractError("bench: unknown suite '" + opt.suite + "' (table1, lhs)");
}

int library_build(const LibraryBuildOptions& opt, std::ostream& out, std::ostream& err) {
  if (opt.tasks.empty()) throw ContractError("library-build: no task given");
  const RobotParams params = params_from(opt.params);
  SolveConfig cfg = config_from(opt.config);
  if (opt.seed) cfg.seed = *opt.seed;
  std::vector<TargetSpec> specs;
  for (JumpTask task : opt.tasks) {
    TargetSpec s = default_target_spec(task, opt.step);
    if (opt.x_range) s.x = parse_range(*opt.x_range);
    if (opt.z_range) s.z = parse_range(*opt.z_range);
    specs.push_back(s);
  }
  premotion::BuildLog log;
  PremotionLibrary lib;
  try {
    lib = premotion::build_library(specs, params, cfg, {}, opt.out, &log,
                                   [&err](const std::string& m) { err << m << "\n"; });
  } catch (const EmptyLibraryError& e) {
    for (const std::string& f : log.failures) out << "failed: " << f << "\n";
    err << "error: " << e.what() << "\n";
    return kExitNotConverged;
  }
  out << lib.entries.size() << " entries from " << log.attempted << " targets written to "
      << (opt.out / "index.yaml").string() << "\n";
  for (const std::string& f : log.failures) out << "failed: " << f << "\n";
  return kExitOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quadruped jump planner"};
  app.require_subcommand(1);

  auto task_option = [](CLI::App* cmd, JumpTask& task, std::string& holder) {
    return cmd->add_option("--task", holder, "jump task")
        ->check([](const std::string& s) {
          return parse_task(s) ? std::string() : "unknown task '" + s + "'";
        })
        ->each([&task](const std::string& s) { task = *parse_task(s); });
  };
  auto optional_path = [](CLI::App* cmd, const std::string& name,
                          std::optional<fs::path>& target, const std::string& help) {
    return cmd->add_option_function<std::string>(
        name, [&target](const std::string& s) { target = fs::path(s); }, help);
  };

  std::string task_text;

  CSpaceBuildOptions cs;
  auto* cs_cmd = app.add_subcommand("cspace-build", "build the configuration-space grid");
  task_option(cs_cmd, cs.task, task_text)->required();
  cs_cmd->add_option_function<std::string>(
      "--ranges", [&cs](const std::string& s) { cs.ranges = s; }, "\"xmin xmax zmin zmax thmin thmax\"");
  cs_cmd->add_option("--divisions", cs.divisions, "grid points per axis");
  optional_path(cs_cmd, "--params", cs.params, "robot parameter YAML");
  cs_cmd->add_option("--out", cs.out, "output grid file")->required();

  PlanOptions pl;
  auto* pl_cmd = app.add_subcommand("plan", "plan one jump");
  pl_cmd->add_option("--target", pl.target, "\"x z theta\"")->required();
  task_option(pl_cmd, pl.task, task_text);
  optional_path(pl_cmd, "--params", pl.params, "robot parameter YAML");
  optional_path(pl_cmd, "--config", pl.config, "solver config YAML");
  optional_path(pl_cmd, "--cspace", pl.cspace, "C-space grid file");
  optional_path(pl_cmd, "--library", pl.library, "library index YAML");
  pl_cmd->add_flag("--cold", pl.cold, "do not use any library");
  pl_cmd->add_option_function<std::uint64_t>(
      "--seed", [&pl](std::uint64_t s) { pl.seed = s; }, "random seed");
  pl_cmd->add_option("--out", pl.out, "trajectory CSV");
  pl_cmd->add_option("--report", pl.report, "JSON report");

  ValidateOptions va;
  auto* va_cmd = app.add_subcommand("validate", "check a trajectory CSV");
  va_cmd->add_option("trajectory", va.trajectory, "trajectory CSV")->required();
  optional_path(va_cmd, "--params", va.params, "robot parameter YAML");
  task_option(va_cmd, va.task, task_text);

  BenchOptions be;
  std::string bench_tasks;
  auto* be_cmd = app.add_subcommand("bench", "benchmark suites");
  be_cmd->add_option("--suite", be.suite, "table1 or lhs")->required();
  be_cmd->add_option("--seeds", be.seeds, "seeded runs per task");
  be_cmd->add_option("--tasks", bench_tasks, "comma separated tasks");
  be_cmd->add_option("--target", be.target, "lhs suite target \"x z theta\"");
  be_cmd->add_option("--step", be.step, "table1 library step");
  be_cmd->add_option("--seed", be.seed, "first seed");
  optional_path(be_cmd, "--params", be.params, "robot parameter YAML");
  optional_path(be_cmd, "--config", be.config, "solver config YAML");
  optional_path(be_cmd, "--library", be.library, "library index YAML for table1");
  be_cmd->add_option("--out", be.out, "per-run CSV");

  LibraryBuildOptions lb;
  std::string lib_tasks = "all";
  auto* lb_cmd = app.add_subcommand("library-build", "solve a grid of targets offline");
  lb_cmd->add_option("--tasks", lib_tasks, "comma separated tasks or all");
  lb_cmd->add_option("--step", lb.step, "target grid step (m)");
  lb_cmd->add_option_function<std::string>(
      "--x", [&lb](const std::string& s) { lb.x_range = s; }, "\"min max\" of target x");
  lb_cmd->add_option_function<std::string>(
      "--z", [&lb](const std::string& s) { lb.z_range = s; }, "\"min max\" of target z");
  lb_cmd->add_option_function<std::uint64_t>(
      "--seed", [&lb](std::uint64_t s) { lb.seed = s; }, "first seed");
  optional_path(lb_cmd, "--params", lb.params, "robot parameter YAML");
  optional_path(lb_cmd, "--config", lb.config, "solver config YAML");
  lb_cmd->add_option("--out", lb.out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*cs_cmd) return cspace_build(cs, out, err);
    if (*pl_cmd) return plan(pl, out, err);
    if (*va_cmd) return validate(va, out, err);
    if (*be_cmd) {
      if (!bench_tasks.empty()) be.tasks = parse_tasks(bench_tasks);
      return bench(be, out, err);
    }
    if (*lb_cmd) {
      lb.tasks = parse_tasks(lib_tasks);
      return library_build(lb, out, err);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace jumpplan::cli
