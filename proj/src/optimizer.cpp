#include "jumpplan/optimizer.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "jumpplan/error.hpp"
#include "jumpplan/premotion.hpp"
#include "jumpplan/text.hpp"

namespace jumpplan {

Bounds Problem::bounds() const {
  Bounds b;
  for (int copy = 0; copy < 3; ++copy) {
    for (const AxisRange& r : grid->ranges) {
      b.lower.push_back(r.min);
      b.upper.push_back(r.max);
    }
  }
  for (int i = 0; i < 3; ++i) {
    b.lower.push_back(time_space.lower);
    b.upper.push_back(time_space.upper);
  }
  return b;
}

bool Problem::admissible(const Point& p) const {
  for (std::size_t i = 0; i < 3; ++i) {
    if (!cspace::contains(*grid, Vec3(p[3 * i], p[3 * i + 1], p[3 * i + 2]))) return false;
  }
  return true;
}

Problem make_problem(JumpTask task, const RobotParams& params, const CSpaceGrid& grid,
                     const Vec3& target, std::optional<BodyState> initial) {
  params.validate();
  if (grid.task != task) {
    throw ContractError("C-space grid was built for task " + std::string(to_string(grid.task)) +
                        ", not " + std::string(to_string(task)));
  }
  if (grid.params_hash != params.hash()) {
    throw ContractError("C-space grid was built with different robot parameters");
  }
  if (!target.allFinite()) throw ContractError("target must be finite");
  Problem p;
  p.task = task;
  p.params = params;
  p.initial = initial.value_or(default_initial_state(task));
  p.stance = make_stance(params, task, p.initial);
  if ((p.stance.lead_foot - grid.stance.lead_foot).norm() > 1e-9 ||
      (p.stance.push_foot - grid.stance.push_foot).norm() > 1e-9) {
    throw ContractError("C-space grid was built for a different stance");
  }
  p.target = target;
  p.grid = &grid;
  return p;
}

void SolveConfig::validate() const {
  if (population < 4) throw ContractError("solve: population must be at least 4");
  if (max_generations < 1) throw ContractError("solve: max_generations must be at least 1");
  if (!(mutation > 0.0) || !std::isfinite(mutation)) {
    throw ContractError("solve: mutation factor must be positive");
  }
  if (!(crossover > 0.0 && crossover <= 1.0)) {
    throw ContractError("solve: crossover rate must lie in (0, 1]");
  }
  if (!(warm_radius > 0.0)) throw ContractError("solve: warm_radius must be positive");
  if (epsilon && !std::isfinite(*epsilon)) throw ContractError("solve: epsilon must be finite");
  if (max_attempts < 1) throw ContractError("solve: max_attempts must be positive");
}

SolveConfig solve_config_from_yaml(const std::string& text_in) {
  YAML::Node root;
  try {
    root = YAML::Load(text_in);
  } catch (const YAML::ParserException& e) {
    throw ParseError("solver config: " + e.msg, static_cast<std::size_t>(e.mark.line + 1));
  }
  SolveConfig cfg;
  if (root.IsNull()) return cfg;
  if (!root.IsMap()) throw ContractError("solver config: top level must be a mapping");
  try {
    for (const auto& kv : root) {
      const auto key = kv.first.as<std::string>();
      const YAML::Node& v = kv.second;
      if (key == "population") {
        cfg.population = v.as<std::size_t>();
      } else if (key == "max_generations") {
        cfg.max_generations = v.as<std::size_t>();
      } else if (key == "mutation") {
        cfg.mutation = v.as<double>();
      } else if (key == "crossover") {
        cfg.crossover = v.as<double>();
      } else if (key == "epsilon") {
        if (v.as<std::string>() == "auto") {
          cfg.epsilon.reset();
        } else {
          cfg.epsilon = v.as<double>();
        }
      } else if (key == "warm_radius") {
        cfg.warm_radius = v.as<double>();
      } else if (key == "seed") {
        cfg.seed = v.as<std::uint64_t>();
      } else if (key == "init") {
        const auto mode = v.as<std::string>();
        if (mode == "lhs") {
          cfg.init = InitMode::lhs;
        } else if (mode == "uniform") {
          cfg.init = InitMode::uniform;
        } else {
          throw ContractError("solver config: init must be lhs or uniform");
        }
      } else if (key == "max_attempts") {
        cfg.max_attempts = v.as<std::size_t>();
      } else {
        throw ContractError("solver config: unknown key '" + key + "'");
      }
    }
  } catch (const YAML::Exception& e) {
    throw ParseError("solver config: " + e.msg, static_cast<std::size_t>(e.mark.line + 1));
  }
  cfg.validate();
  return cfg;
}

std::string solve_config_to_yaml(const SolveConfig& cfg) {
  std::ostringstream out;
  out << "population: " << cfg.population << "\n";
  out << "max_generations: " << cfg.max_generations << "\n";
  out << "mutation: " << text::number(cfg.mutation) << "\n";
  out << "crossover: " << text::number(cfg.crossover) << "\n";
  out << "epsilon: " << (cfg.epsilon ? text::number(*cfg.epsilon) : std::string("auto")) << "\n";
  out << "warm_radius: " << text::number(cfg.warm_radius) << "\n";
  out << "seed: " << cfg.seed << "\n";
  out << "init: " << optimizer::to_string(cfg.init) << "\n";
  out << "max_attempts: " << cfg.max_attempts << "\n";
  return out.str();
}

SolveConfig load_solve_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open solver config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return solve_config_from_yaml(buf.str());
}

namespace optimizer {

std::string_view to_string(InitMode mode) {
  return mode == InitMode::lhs ? "lhs" : "uniform";
}

EvolutionResult evolve(const Objective& objective, const Bounds& bounds,
                       std::vector<Point> population, const SolveConfig& cfg, double epsilon,
                       Rng& rng) {
  cfg.validate();
  const std::size_t np = population.size();
  const std::size_t dim = bounds.dim();
  if (np < 4) throw ContractError("evolve: population must hold at least 4 points");
  for (const Point& p : population) {
    if (p.size() != dim) throw ContractError("evolve: population dimension mismatch");
  }

  auto score = [&](Point& p) {
    const double f = objective(p);
    if (!std::isfinite(f)) throw InternalError("evolve: objective returned a non-finite value");
    return f;
  };

  std::vector<double> fit(np);
  for (std::size_t i = 0; i < np; ++i) fit[i] = score(population[i]);
  auto best_index = [&] {
    return static_cast<std::size_t>(std::min_element(fit.begin(), fit.end()) - fit.begin());
  };

  EvolutionResult out;
  std::size_t best = best_index();
  out.generations = 1;
  out.history.push_back(fit[best]);

  std::vector<Point> trials(np, Point(dim));
  std::vector<double> trial_fit(np);
  while (!(fit[best] < epsilon) && out.generations < cfg.max_generations) {
    for (std::size_t i = 0; i < np; ++i) {
      std::size_t r1, r2, r3;
      do r1 = rng.below(np); while (r1 == i);
      do r2 = rng.below(np); while (r2 == i || r2 == r1);
      do r3 = rng.below(np); while (r3 == i || r3 == r1 || r3 == r2);
      const std::size_t forced = rng.below(dim);
      Point& u = trials[i];
      for (std::size_t j = 0; j < dim; ++j) {
        const bool take = rng.uniform() < cfg.crossover || j == forced;
        u[j] = take ? population[r1][j] + cfg.mutation * (population[r2][j] - population[r3][j])
                    : population[i][j];
        u[j] = std::clamp(u[j], bounds.lower[j], bounds.upper[j]);
      }
    }
    for (std::size_t i = 0; i < np; ++i) trial_fit[i] = score(trials[i]);
    for (std::size_t i = 0; i < np; ++i) {
      if (trial_fit[i] < fit[i]) {
        population[i] = trials[i];
        fit[i] = trial_fit[i];
      }
    }
    best = best_index();
    ++out.generations;
    out.history.push_back(fit[best]);
  }
  out.best = population[best];
  out.best_fitness = fit[best];
  out.converged = fit[best] < epsilon;
  return out;
}

std::vector<Point> initial_population(const Problem& problem, const SolveConfig& cfg,
                                      InitMode mode, Rng& rng) {
  const Bounds b = problem.bounds();
  const Predicate admissible = [&problem](const Point& p) { return problem.admissible(p); };
  return mode == InitMode::lhs
             ? sampling::lhs_feasible(b, cfg.population, admissible, rng, cfg.max_attempts)
             : sampling::uniform_feasible(b, cfg.population, admissible, rng, cfg.max_attempts);
}

namespace {

DOpt to_dopt(const Point& p) {
  DOpt d;
  std::copy(p.begin(), p.end(), d.values.begin());
  return d;
}

Point to_point(const DOpt& d) { return Point(d.values.begin(), d.values.end()); }

Objective make_objective(const Problem& problem) {
  return [&problem](Point& p) {
    DOpt d = to_dopt(p);
    repair(d, problem);
    p[8] = d.values[8];
    return fitness(d, problem);
  };
}

struct Outcome {
  EvolutionResult evolution;
  bool warm = false;
};

Outcome run(const Problem& problem, const SolveConfig& cfg, const PremotionLibrary* library,
            InitMode mode) {
  cfg.validate();
  problem.layers.validate();
  if (problem.grid == nullptr) throw ContractError("solve: problem has no C-space grid");
  const double eps = cfg.epsilon.value_or(problem.layers.epsilon());
  Rng init_rng(Rng::derive(cfg.seed, 1));
  Rng evo_rng(Rng::derive(cfg.seed, 2));
  const Bounds b = problem.bounds();

  Outcome out;
  std::vector<Point> population;
  std::optional<PremotionEntry> hit;
  if (library != nullptr) hit = premotion::lookup(*library, problem.target, problem.task);
  if (hit) {
    // Stored solutions need not have their D_opt states inside the grid (the
    // repaired pitch often leaves it), so the ball itself is the only filter.
    const Point stored = to_point(hit->d_res);
    const Predicate anywhere = [](const Point&) { return true; };
    population = sampling::lhs_neighborhood(b.clamp(stored), cfg.warm_radius, b, cfg.population,
                                            anywhere, init_rng, cfg.max_attempts);
    population.front() = stored;
    out.warm = true;
  } else {
    population = initial_population(problem, cfg, mode, init_rng);
  }
  out.evolution = evolve(make_objective(problem), b, std::move(population), cfg, eps, evo_rng);
  return out;
}

}  // namespace

SolveResult solve(const Problem& problem, const SolveConfig& cfg, const PremotionLibrary* library) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o = run(problem, cfg, library, cfg.init);

  SolveResult r;
  r.d_res = to_dopt(o.evolution.best);
  r.scores = layer_scores(r.d_res, problem);
  r.fitness = fitness(r.scores, problem.layers);
  if (r.fitness != o.evolution.best_fitness) {
    throw InternalError("solve: re-evaluation of the best point changed its fitness");
  }
  r.epsilon = cfg.epsilon.value_or(problem.layers.epsilon());
  r.generations = o.evolution.generations;
  r.history = std::move(o.evolution.history);
  r.converged = o.evolution.converged;
  r.warm_started = o.warm;
  if (r.scores.transform_ok) {
    r.profile = grf::solve_profile(r.d_res, problem.initial, problem.stance, problem.params).profile;
    r.trajectory = model::rollout(embed(problem.initial), r.profile, problem.stance, problem.params,
                                  problem.dt);
  }
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

namespace {

std::vector<double> padded(std::vector<double> h, std::size_t n) {
  if (h.empty()) h.push_back(std::numeric_limits<double>::infinity());
  h.resize(n, h.back());
  return h;
}

std::vector<double> column_median(const std::vector<std::vector<double>>& rows, std::size_t n) {
  std::vector<double> out(n);
  std::vector<double> col(rows.size());
  for (std::size_t g = 0; g < n; ++g) {
    for (std::size_t i = 0; i < rows.size(); ++i) col[i] = rows[i][g];
    std::sort(col.begin(), col.end());
    const std::size_t m = col.size() / 2;
    out[g] = col.size() % 2 == 1 ? col[m] : 0.5 * (col[m - 1] + col[m]);
  }
  return out;
}

}  // namespace

InitComparison compare_init(const Problem& problem, const SolveConfig& cfg, std::size_t trials,
                            InitMode first, InitMode second) {
  if (trials < 2) throw ContractError("compare_init: need at least 2 trials");
  InitComparison out;
  out.first_mode = first;
  out.second_mode = second;
  const std::size_t n = cfg.max_generations;
  for (std::size_t t = 0; t < trials; ++t) {
    SolveConfig c = cfg;
    c.seed = cfg.seed + t;
    for (int arm = 0; arm < 2; ++arm) {
      const Outcome o = run(problem, c, nullptr, arm == 0 ? first : second);
      const std::size_t gens = o.evolution.converged ? o.evolution.generations : n + 1;
      (arm == 0 ? out.first : out.second).push_back(padded(o.evolution.history, n));
      (arm == 0 ? out.first_generations : out.second_generations).push_back(gens);
    }
  }
  out.first_median = column_median(out.first, n);
  out.second_median = column_median(out.second, n);
  return out;
}

}  // namespace optimizer
}  // namespace jumpplan
