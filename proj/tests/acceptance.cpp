// Acceptance run: one PASS/FAIL line per criterion. Criteria can be selected
// by number on the command line; all run by default.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "jumpplan/cli.hpp"
#include "jumpplan/cspace.hpp"
#include "jumpplan/error.hpp"
#include "jumpplan/grf.hpp"
#include "jumpplan/optimizer.hpp"
#include "jumpplan/premotion.hpp"
#include "jumpplan/rng.hpp"
#include "jumpplan/sampling.hpp"
#include "jumpplan/text.hpp"
#include "jumpplan/trajectory_io.hpp"
#include "test_support.hpp"

using namespace jumpplan;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Record {
  JumpTask task = JumpTask::front;
  Vec3 target = Vec3::Zero();
  SolveResult result;
};

struct Context {
  RobotParams params;
  SolveConfig cfg;
  std::map<JumpTask, CSpaceGrid> grids;
  std::optional<PremotionLibrary> library;
  /// Every solve of the run, for the elitism check.
  std::vector<Record> solves;
  std::vector<std::vector<double>> curves;

  const CSpaceGrid& grid(JumpTask task) {
    auto it = grids.find(task);
    if (it == grids.end()) it = grids.emplace(task, cspace::build(params, task)).first;
    return it->second;
  }

  SolveResult solve(JumpTask task, const Vec3& target, std::uint64_t seed,
                    const PremotionLibrary* lib) {
    SolveConfig c = cfg;
    c.seed = seed;
    const Problem problem = make_problem(task, params, grid(task), target);
    SolveResult r = optimizer::solve(problem, c, lib);
    solves.push_back({task, target, r});
    return r;
  }
};

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string num(double v, int digits = 4) { return text::number(v, digits); }

// The desk library: front targets over x [0.5, 0.7], z [0.2, 0.4] at 0.05 m.
const PremotionLibrary& desk_library(Context& ctx) {
  if (ctx.library) return *ctx.library;
  const fs::path stock = fs::path(JUMPPLAN_DATA_DIR) / "library" / "index.yaml";
  TargetSpec spec = default_target_spec(JumpTask::front, 0.05);
  spec.x = {0.5, 0.7};
  spec.z = {0.2, 0.4};
  const std::vector<Vec3> wanted = spec.targets();
  try {
    PremotionLibrary lib = premotion::load(stock, ctx.params);
    std::size_t found = 0;
    for (const Vec3& t : wanted) {
      found += std::any_of(lib.entries.begin(), lib.entries.end(), [&](const PremotionEntry& e) {
        return e.task == JumpTask::front && (e.target - t).norm() < 1e-9;
      });
    }
    if (found == wanted.size()) {
      std::cout << "  using stored library " << stock.string() << "\n";
      ctx.library = std::move(lib);
      return *ctx.library;
    }
  } catch (const std::exception& e) {
    std::cout << "  stored library unusable (" << e.what() << ")\n";
  }
  std::cout << "  building library over " << wanted.size() << " targets\n";
  const std::vector<CSpaceGrid> grids{ctx.grid(JumpTask::front)};
  ctx.library = premotion::build_library(std::span(&spec, 1), ctx.params, ctx.cfg, grids);
  return *ctx.library;
}

Outcome warm_start_speedup(Context& ctx) {
  const PremotionLibrary& lib = desk_library(ctx);
  const auto targets = cli::perturbed_targets(lib, JumpTask::front, 20, 0.05, 101);
  std::vector<double> cold, warm;
  std::size_t warm_started = 0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    cold.push_back(ctx.solve(JumpTask::front, targets[i], 200 + i, nullptr).wall_time);
    const SolveResult w = ctx.solve(JumpTask::front, targets[i], 200 + i, &lib);
    warm.push_back(w.wall_time);
    warm_started += w.warm_started ? 1 : 0;
  }
  const double mc = median(cold), mw = median(warm);
  return {mw <= mc / 3.0, "cold median " + num(mc) + " s, library median " + num(mw) +
                              " s, speedup " + num(mc / mw, 3) + "x, warm started " +
                              std::to_string(warm_started) + "/20"};
}

Outcome lhs_ordering(Context& ctx) {
  SolveConfig c = ctx.cfg;
  c.seed = 1;
  const Problem problem =
      make_problem(JumpTask::front, ctx.params, ctx.grid(JumpTask::front), {0.6, 0.2, 0.0});
  const InitComparison cmp = optimizer::compare_init(problem, c, 20);
  for (const auto& row : cmp.first) ctx.curves.push_back(row);
  for (const auto& row : cmp.second) ctx.curves.push_back(row);
  std::vector<double> g_lhs, g_uni;
  std::size_t wins = 0;
  for (std::size_t t = 0; t < 20; ++t) {
    g_lhs.push_back(static_cast<double>(cmp.first_generations[t]));
    g_uni.push_back(static_cast<double>(cmp.second_generations[t]));
    wins += cmp.first_generations[t] < cmp.second_generations[t] ? 1 : 0;
  }
  const double ml = median(g_lhs), mu = median(g_uni);
  return {ml <= mu && wins >= 12, "median generations lhs " + num(ml) + " vs uniform " + num(mu) +
                                      ", lhs wins " + std::to_string(wins) + "/20"};
}

Outcome cspace_construction(Context& ctx) {
  FeasibilityStats stats;
  const CSpaceGrid fine = cspace::build(ctx.params, JumpTask::front,
                                        cspace::default_ranges(default_initial_state(JumpTask::front)),
                                        50, &stats);
  std::size_t mismatches = 0, cells = 0;
  for (JumpTask task : kAllTasks) {
    const CSpaceGrid g = cspace::build(ctx.params, task, 10);
    const auto pairs = cspace::grid_pairs(task);
    for (std::size_t ix = 0; ix < 10; ++ix) {
      for (std::size_t iz = 0; iz < 10; ++iz) {
        for (std::size_t it = 0; it < 10; ++it) {
          const bool want = testing::oracle(ctx.params, g.stance, pairs, g.center(ix, iz, it));
          mismatches += want != g.occupancy[g.index(ix, iz, it)] ? 1 : 0;
          ++cells;
        }
      }
    }
  }
  return {stats.evaluated == 125000 && fine.occupancy.size() == 125000 && mismatches == 0,
          std::to_string(stats.evaluated) + " points at 50 divisions, " +
              std::to_string(mismatches) + " oracle mismatches over " + std::to_string(cells) +
              " cells of 8 tasks"};
}

Outcome transform_round_trip(Context& ctx) {
  std::mt19937_64 gen(2024);
  double worst = 0.0;
  std::size_t done = 0;
  for (JumpTask task : {JumpTask::front, JumpTask::side_left, JumpTask::flip_back}) {
    const BodyState init = default_initial_state(task);
    const Stance st = make_stance(ctx.params, task, init);
    const std::size_t share = task == JumpTask::flip_back ? 334 : 333;
    for (std::size_t i = 0; i < share; ++i, ++done) {
      const GrfProfile prof = testing::random_profile(gen);
      const DOpt d = grf::profile_to_dopt(prof, init, st, ctx.params);
      const GrfProfile back = grf::dopt_to_profile(d, init, st, ctx.params);
      const auto a = prof.coefficients();
      const auto b = back.coefficients();
      for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
    }
  }
  return {done == 1000 && worst <= 1e-9,
          std::to_string(done) + " profiles, max coefficient error " + num(worst, 3)};
}

Outcome dynamic_feasibility(Context& ctx) {
  struct Sweep {
    JumpTask task;
    AxisRange x, z;
    double theta;
  };
  const std::vector<Sweep> sweeps{{JumpTask::front, {0.3, 0.7}, {0.2, 0.35}, 0.0},
                                  {JumpTask::two_contact, {0.3, 0.7}, {0.2, 0.35}, 0.0},
                                  {JumpTask::flip_back, {-0.1, 0.1}, {0.25, 0.35},
                                   -2 * std::numbers::pi}};
  Rng rng(55);
  std::size_t start = ctx.solves.size();
  for (const Sweep& s : sweeps) {
    for (std::size_t i = 0; i < 20; ++i) {
      const Vec3 target(rng.uniform(s.x.min, s.x.max), rng.uniform(s.z.min, s.z.max), s.theta);
      ctx.solve(s.task, target, 300 + i, nullptr);
    }
  }
  std::map<JumpTask, std::size_t> checked;
  std::size_t failed = 0;
  std::string first_failure;
  for (std::size_t i = start; i < ctx.solves.size(); ++i) {
    const Record& rec = ctx.solves[i];
    if (!rec.result.converged) continue;
    const Problem problem =
        make_problem(rec.task, ctx.params, ctx.grid(rec.task), rec.target);
    const TrajectoryTable table =
        trajectory_io::tabulate(rec.result.trajectory, problem.stance, ctx.params);
    const cli::ValidationReport rep = cli::validate(table, problem.stance.plane, ctx.params);
    const TrajectoryRow& end = table.rows.back();
    std::vector<std::string> problems = rep.violations;
    if (std::abs(end.x_c - rec.target.x()) > 0.05 || std::abs(end.z_c - rec.target.y()) > 0.05 ||
        std::abs(end.theta - rec.target.z()) > 0.1) {
      problems.push_back("terminal (" + num(end.x_c) + ", " + num(end.z_c) + ", " +
                         num(end.theta) + ")");
    }
    if (rep.max_torque > ctx.params.torque_limit) problems.push_back("torque " + num(rep.max_torque));
    if (rep.min_normal_force < 0.0 || rep.min_friction_margin < -1e-9) {
      problems.push_back("cone margin " + num(rep.min_friction_margin));
    }
    if (!(rep.ballistic_deviation < 1e-3)) {
      problems.push_back("ballistic " + num(rep.ballistic_deviation));
    }
    ++checked[rec.task];
    if (!problems.empty()) {
      ++failed;
      if (first_failure.empty()) {
        first_failure = "; first failure " + std::string(to_string(rec.task)) + ": " + problems[0];
      }
    }
  }
  std::size_t total = 0;
  std::string per_task;
  for (const auto& [task, n] : checked) {
    total += n;
    per_task += " " + std::string(to_string(task)) + "=" + std::to_string(n);
  }
  const bool spans = checked.size() == 3;
  return {total >= 50 && spans && failed == 0,
          std::to_string(total) + " of 60 solves converged and checked (" + per_task.substr(1) +
              "), " + std::to_string(failed) + " failed" + first_failure};
}

Outcome lhs_stratification(Context& ctx) {
  const Problem problem =
      make_problem(JumpTask::front, ctx.params, ctx.grid(JumpTask::front), {0.6, 0.2, 0.0});
  const Bounds box = problem.bounds();
  const std::size_t n = 60;
  std::size_t bad = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    const auto pts = sampling::lhs_box(box, n, rng);
    for (std::size_t d = 0; d < box.dim(); ++d) {
      std::vector<int> count(n, 0);
      for (const Point& p : pts) {
        const double f = (p[d] - box.lower[d]) / (box.upper[d] - box.lower[d]) * n;
        ++count[std::min(n - 1, static_cast<std::size_t>(std::floor(f)))];
      }
      bad += std::all_of(count.begin(), count.end(), [](int c) { return c == 1; }) ? 0 : 1;
    }
  }
  return {box.dim() == 12 && bad == 0,
          "100 batches of 60 in " + std::to_string(box.dim()) + "-D, " + std::to_string(bad) +
              " dimensions with an empty or doubled stratum"};
}

bool same_result(const SolveResult& a, const SolveResult& b) {
  return a.d_res == b.d_res && a.fitness == b.fitness && a.epsilon == b.epsilon &&
         a.generations == b.generations && a.history == b.history &&
         a.warm_started == b.warm_started && a.converged == b.converged &&
         a.scores.sigma == b.scores.sigma && a.scores.energy == b.scores.energy &&
         a.profile.coefficients() == b.profile.coefficients() &&
         a.trajectory.states.size() == b.trajectory.states.size();
}

Outcome elitism_and_determinism(Context& ctx) {
  if (ctx.solves.empty()) {
    ctx.solve(JumpTask::front, {0.55, 0.25, 0.0}, 7, nullptr);
    ctx.solve(JumpTask::flip_back, {0.0, 0.3, -2 * std::numbers::pi}, 7, nullptr);
  }
  std::size_t runs = 0, increases = 0;
  auto scan = [&](const std::vector<double>& h) {
    ++runs;
    for (std::size_t g = 1; g < h.size(); ++g) increases += h[g] > h[g - 1] ? 1 : 0;
  };
  for (const Record& r : ctx.solves) scan(r.result.history);
  for (const auto& c : ctx.curves) scan(c);

  std::size_t mismatched = 0, pairs = 0;
  const std::vector<std::pair<JumpTask, Vec3>> cases{
      {JumpTask::front, {0.6, 0.2, 0.0}},
      {JumpTask::two_contact, {0.45, 0.3, 0.0}},
      {JumpTask::flip_back, {0.05, 0.3, -2 * std::numbers::pi}}};
  for (const auto& [task, target] : cases) {
    const Problem problem = make_problem(task, ctx.params, ctx.grid(task), target);
    SolveConfig c = ctx.cfg;
    c.seed = 99;
    const SolveResult a = optimizer::solve(problem, c);
    const SolveResult b = optimizer::solve(problem, c);
    TrajectoryTable ta, tb;
    if (a.scores.transform_ok) ta = trajectory_io::tabulate(a.trajectory, problem.stance, ctx.params);
    if (b.scores.transform_ok) tb = trajectory_io::tabulate(b.trajectory, problem.stance, ctx.params);
    ta.infeasible = !a.converged;
    tb.infeasible = !b.converged;
    ++pairs;
    if (!same_result(a, b) || trajectory_io::to_csv(ta) != trajectory_io::to_csv(tb)) ++mismatched;
    scan(a.history);
  }
  return {increases == 0 && mismatched == 0,
          std::to_string(runs) + " logged runs with " + std::to_string(increases) +
              " increases of the best fitness; " + std::to_string(mismatched) + "/" +
              std::to_string(pairs) + " repeated seeds differ"};
}

Outcome perturbation_robustness(Context& ctx) {
  const PremotionLibrary& lib = desk_library(ctx);
  const auto targets = cli::perturbed_targets(lib, JumpTask::front, 100, 0.05, 808);
  std::size_t converged = 0, warm = 0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const SolveResult r = ctx.solve(JumpTask::front, targets[i], 400 + i, &lib);
    converged += r.converged ? 1 : 0;
    warm += r.warm_started ? 1 : 0;
  }
  const double share = static_cast<double>(converged) / static_cast<double>(targets.size());
  return {share >= 0.9, std::to_string(converged) + "/" + std::to_string(targets.size()) +
                            " converged within " + std::to_string(ctx.cfg.max_generations) +
                            " generations (" + std::to_string(warm) + " warm started)"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome(Context&)>>> criteria{
      {"warm-start speedup", warm_start_speedup},
      {"lhs convergence ordering", lhs_ordering},
      {"c-space construction", cspace_construction},
      {"transform round trip", transform_round_trip},
      {"dynamic feasibility", dynamic_feasibility},
      {"lhs stratification", lhs_stratification},
      {"elitism and determinism", elitism_and_determinism},
      {"perturbation robustness", perturbation_robustness},
  };
  std::set<std::size_t> selected;
  for (int i = 1; i < argc; ++i) {
    const std::size_t k = std::stoul(argv[i]);
    if (k < 1 || k > criteria.size()) {
      std::cerr << "unknown criterion " << argv[i] << "\n";
      return 1;
    }
    selected.insert(k);
  }
  if (selected.empty()) {
    for (std::size_t k = 1; k <= criteria.size(); ++k) selected.insert(k);
  }

  Context ctx;
  std::size_t failed = 0;
  for (std::size_t k : selected) {
    const auto& [name, check] = criteria[k - 1];
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check(ctx);
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "criterion " << k << " " << name << ": " << (o.pass ? "PASS" : "FAIL") << " ("
              << o.detail << ") [" << num(s, 3) << " s]" << std::endl;
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
