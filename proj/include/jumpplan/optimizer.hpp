#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jumpplan/cspace.hpp"
#include "jumpplan/grf.hpp"
#include "jumpplan/rollout.hpp"
#include "jumpplan/sampling.hpp"
#include "jumpplan/task.hpp"

namespace jumpplan {

struct PremotionLibrary;

/// Layers of the priority fitness, lowest priority first. Layer n contributes
/// 10^(n-3) * sigma_n * W_n.
enum class FitnessLayer : std::size_t {
  terminal = 0,     ///< terminal configuration against the target
  consistency = 1,  ///< transform residual
  actuation = 2,    ///< reachability, joint limits, joint clearance, torque limit
  contact = 3,      ///< friction cone, unilateral contact, C-space along stance, time box
};

struct FitnessLayers {
  /// Highest layer index L; layers run from 3 to L.
  static constexpr int kTopLayer = 6;
  static constexpr std::size_t kCount = kTopLayer - 2;

  std::array<double, kCount> weights{1.0, 1.0, 1.0, 1.0};
  double energy_weight = 1e-6;

  /// Accepted terminal error per component (x, z, theta).
  Vec3 terminal_tolerance{0.05, 0.05, 0.1};
  /// Fraction of the tolerances the planner aims for, so that replaying the
  /// plan on a slightly different integrator still lands inside.
  double planning_margin = 0.9;
  double consistency_tolerance = 1e-6;
  double consistency_scale = 1e-3;
  double reach_scale = 0.05;
  double joint_scale = 0.5;
  double clearance_scale = 0.05;
  /// Torque violations are measured above torque_margin * limit, in units of the limit.
  double torque_margin = 0.99;
  /// Friction is planned against friction_margin * mu.
  double friction_margin = 0.95;
  /// Slack between the all-satisfied fitness and the stopping threshold. It
  /// also bounds the admissible energy term.
  double stop_margin = 1e-3;

  /// Stopping threshold: reachable only with every sigma equal to 1.
  double epsilon() const;
  void validate() const;
};

/// 10^(L+2) - sum_i 10^i W_i sigma_i + energy_weight * energy, for L layers.
/// Any layer count is accepted: sigma[i] and weights[i] belong to
/// layer i + 3.
double hierarchical_fitness(std::span<const double> sigma, std::span<const double> weights,
                            double energy, double energy_weight);

/// Aggregate violation of each constraint behind the contact and actuation layers.
struct ConstraintViolations {
  double friction = 0.0;
  double region = 0.0;
  double time_box = 0.0;
  double reach = 0.0;
  double joints = 0.0;
  double clearance = 0.0;
  double torque = 0.0;
};

struct LayerScores {
  std::array<double, FitnessLayers::kCount> sigma{};
  /// Raw aggregate violation per layer (0 when satisfied).
  std::array<double, FitnessLayers::kCount> violation{};
  ConstraintViolations constraints;
  double energy = 0.0;
  /// False when the candidate could not be turned into a finite profile.
  bool transform_ok = false;

  double operator[](FitnessLayer layer) const { return sigma[static_cast<std::size_t>(layer)]; }
  bool all_satisfied() const;
};

/// Everything the fitness needs besides the candidate.
struct Problem {
  JumpTask task = JumpTask::front;
  RobotParams params;
  BodyState initial;
  Stance stance;
  Vec3 target = Vec3::Zero();
  /// Must outlive the problem.
  const CSpaceGrid* grid = nullptr;
  TimeSpace time_space;
  FitnessLayers layers;
  /// Rollout step of the fitness and of the final trajectory.
  double dt = 1e-3;

  /// Search box: three copies of the C-space ranges, then the time box.
  Bounds bounds() const;
  /// The three configurations of `p` lie in the C-space.
  bool admissible(const Point& p) const;
};

/// Checks grid and params compatibility. Throws ContractError.
Problem make_problem(JumpTask task, const RobotParams& params, const CSpaceGrid& grid,
                     const Vec3& target, std::optional<BodyState> initial = std::nullopt);

enum class InitMode { lhs, uniform };

struct SolveConfig {
  std::size_t population = 60;
  std::size_t max_generations = 300;
  double mutation = 0.5;
  double crossover = 0.9;
  /// Defaults to FitnessLayers::epsilon().
  std::optional<double> epsilon;
  /// Radius of the warm-start ball around a library solution.
  double warm_radius = 0.1;
  std::uint64_t seed = 1;
  InitMode init = InitMode::lhs;
  std::size_t max_attempts = 1000;

  void validate() const;
};

SolveConfig solve_config_from_yaml(const std::string& text);
std::string solve_config_to_yaml(const SolveConfig& cfg);
SolveConfig load_solve_config(const std::filesystem::path& path);

struct SolveResult {
  DOpt d_res;
  double fitness = 0.0;
  double epsilon = 0.0;
  std::size_t generations = 0;
  LayerScores scores;
  GrfProfile profile;
  Trajectory trajectory;
  /// Best fitness after each generation.
  std::vector<double> history;
  double wall_time = 0.0;
  bool warm_started = false;
  bool converged = false;

  /// Generation at which the threshold was reached; max_generations + 1 when never.
  std::size_t generations_to_epsilon(std::size_t max_generations) const {
    return converged ? generations : max_generations + 1;
  }
};

struct EvolutionResult {
  Point best;
  double best_fitness = 0.0;
  std::size_t generations = 0;
  std::vector<double> history;
  bool converged = false;
};

/// Objective for the DE loop. It may rewrite its argument in place (repair);
/// the rewritten point is what enters the population.
using Objective = std::function<double(Point&)>;

struct InitComparison {
  /// Best-so-far fitness per generation, padded to max_generations; one row per trial.
  std::vector<std::vector<double>> first;
  std::vector<std::vector<double>> second;
  std::vector<double> first_median;
  std::vector<double> second_median;
  std::vector<std::size_t> first_generations;
  std::vector<std::size_t> second_generations;
  InitMode first_mode = InitMode::lhs;
  InitMode second_mode = InitMode::uniform;
};

namespace optimizer {

LayerScores layer_scores(const DOpt& d, const Problem& problem);
double fitness(const LayerScores& scores, const FitnessLayers& layers);
double fitness(const DOpt& d, const Problem& problem);

/// Replaces the pitch at t2 with the value the other entries imply. A failed
/// transform leaves `d` unchanged.
void repair(DOpt& d, const Problem& problem);

/// Trapezoidal integral of |tau . qdot| over equally spaced samples.
double energy(std::span<const Vec2> torque, std::span<const Vec2> rate, double dt);

/// Violation of one torque sample against the planning limit, in units of the limit.
double torque_violation(const Vec2& torque, double limit, double margin);
/// 1 / (1 + v): equals 1 only without violation and keeps decreasing beyond the scale.
double sigma_from_violation(double violation);

/// DE/rand/1/bin with clamping and greedy selection. Stops once the best
/// fitness drops below `epsilon` or after max_generations generations; the
/// evaluated initial population counts as generation 1. Throws InternalError
/// on a non-finite fitness.
EvolutionResult evolve(const Objective& objective, const Bounds& bounds,
                       std::vector<Point> population, const SolveConfig& cfg, double epsilon,
                       Rng& rng);

/// Initial population over the C-space and time box.
std::vector<Point> initial_population(const Problem& problem, const SolveConfig& cfg,
                                      InitMode mode, Rng& rng);

/// Cold or warm solve. A library entry of the same task within its lookup
/// threshold seeds the population around its stored solution.
SolveResult solve(const Problem& problem, const SolveConfig& cfg,
                  const PremotionLibrary* library = nullptr);

/// Runs `trials` cold solves with seeds cfg.seed, cfg.seed + 1, ... for each
/// initialization mode. Everything except the mode is shared.
InitComparison compare_init(const Problem& problem, const SolveConfig& cfg, std::size_t trials,
                            InitMode first = InitMode::lhs, InitMode second = InitMode::uniform);

std::string_view to_string(InitMode mode);
std::string_view layer_name(FitnessLayer layer);

}  // namespace optimizer
}  // namespace jumpplan
