#include "jumpplan/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "jumpplan/error.hpp"

namespace jumpplan {

bool Bounds::contains(const Point& p) const {
  if (p.size() != dim()) return false;
  for (std::size_t d = 0; d < dim(); ++d) {
    if (!(p[d] >= lower[d] && p[d] <= upper[d])) return false;
  }
  return true;
}

Point Bounds::clamp(Point p) const {
  for (std::size_t d = 0; d < dim(); ++d) p[d] = std::clamp(p[d], lower[d], upper[d]);
  return p;
}

namespace sampling {
namespace {

void check(const Bounds& bounds, std::size_t n) {
  if (n == 0) throw ContractError("sampling: n must be at least 1");
  if (bounds.upper.size() != bounds.lower.size()) {
    throw ContractError("sampling: bounds dimension mismatch");
  }
  for (std::size_t d = 0; d < bounds.dim(); ++d) {
    if (!(bounds.lower[d] <= bounds.upper[d])) {
      throw ContractError("sampling: bounds need min <= max in every dimension");
    }
  }
}

double in_stratum(const Bounds& b, std::size_t d, std::size_t stratum, std::size_t n, Rng& rng) {
  const double w = (b.upper[d] - b.lower[d]) / static_cast<double>(n);
  const double v = b.lower[d] + (static_cast<double>(stratum) + rng.uniform()) * w;
  return std::min(v, b.upper[d]);
}

// strata[d][i] is the stratum of point i along dimension d.
std::vector<Point> lhs_with_strata(const Bounds& b, std::size_t n, Rng& rng,
                                   std::vector<std::vector<std::size_t>>& strata) {
  std::vector<Point> pts(n, Point(b.dim()));
  strata.assign(b.dim(), std::vector<std::size_t>(n));
  for (std::size_t d = 0; d < b.dim(); ++d) {
    std::iota(strata[d].begin(), strata[d].end(), std::size_t{0});
    rng.shuffle(std::span<std::size_t>(strata[d]));
    for (std::size_t i = 0; i < n; ++i) pts[i][d] = in_stratum(b, d, strata[d][i], n, rng);
  }
  return pts;
}

// Replaces rejected points by perturbed copies of accepted ones.
void repair(const Bounds& b, std::size_t n, const Predicate& predicate, Rng& rng,
            std::size_t max_attempts, std::vector<Point>& pts, const std::vector<bool>& ok) {
  std::vector<std::size_t> accepted;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (ok[i]) accepted.push_back(i);
  }
  if (accepted.empty()) {
    throw InfeasibleRegionError("sampling: no feasible point found in " +
                                std::to_string(pts.size()) + " strata after " +
                                std::to_string(max_attempts) + " attempts each");
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (ok[i]) continue;
    const Point& base = pts[accepted[rng.below(accepted.size())]];
    Point candidate = base;
    bool found = false;
    for (std::size_t a = 0; a < max_attempts && !found; ++a) {
      for (std::size_t d = 0; d < b.dim(); ++d) {
        const double w = (b.upper[d] - b.lower[d]) / static_cast<double>(n);
        candidate[d] = std::clamp(base[d] + (rng.uniform() - 0.5) * w, b.lower[d], b.upper[d]);
      }
      found = predicate(candidate);
    }
    pts[i] = found ? candidate : base;
  }
}

}  // namespace

std::vector<Point> lhs_box(const Bounds& bounds, std::size_t n, Rng& rng) {
  check(bounds, n);
  std::vector<std::vector<std::size_t>> strata;
  return lhs_with_strata(bounds, n, rng, strata);
}

std::vector<Point> lhs_feasible(const Bounds& bounds, std::size_t n, const Predicate& predicate,
                                Rng& rng, std::size_t max_attempts) {
  check(bounds, n);
  if (max_attempts == 0) throw ContractError("sampling: max_attempts must be positive");
  std::vector<std::vector<std::size_t>> strata;
  std::vector<Point> pts = lhs_with_strata(bounds, n, rng, strata);
  std::vector<bool> ok(n, false);
  std::vector<std::size_t> rejected;
  for (std::size_t i = 0; i < n; ++i) {
    ok[i] = predicate(pts[i]);
    if (!ok[i]) rejected.push_back(i);
  }
  // Rejected points trade their strata among themselves, so the batch stays
  // one point per stratum while each retry lands in a fresh cell.
  std::vector<std::size_t> pool(rejected.size());
  for (std::size_t a = 1; a < max_attempts && !rejected.empty(); ++a) {
    for (std::size_t d = 0; d < bounds.dim(); ++d) {
      for (std::size_t j = 0; j < rejected.size(); ++j) pool[j] = strata[d][rejected[j]];
      rng.shuffle(std::span<std::size_t>(pool.data(), rejected.size()));
      for (std::size_t j = 0; j < rejected.size(); ++j) {
        const std::size_t i = rejected[j];
        strata[d][i] = pool[j];
        pts[i][d] = in_stratum(bounds, d, strata[d][i], n, rng);
      }
    }
    std::size_t kept = 0;
    for (std::size_t i : rejected) {
      ok[i] = predicate(pts[i]);
      if (!ok[i]) rejected[kept++] = i;
    }
    rejected.resize(kept);
  }
  if (!rejected.empty()) repair(bounds, n, predicate, rng, max_attempts, pts, ok);
  return pts;
}

std::vector<Point> lhs_neighborhood(const Point& center, double r, const Bounds& bounds,
                                    std::size_t n, const Predicate& predicate, Rng& rng,
                                    std::size_t max_attempts) {
  if (!(r > 0.0)) throw ContractError("lhs_neighborhood: radius must be positive");
  if (center.size() != bounds.dim()) throw ContractError("lhs_neighborhood: center dimension");
  const double half = r / std::sqrt(static_cast<double>(bounds.dim()));
  Bounds box = bounds;
  for (std::size_t d = 0; d < bounds.dim(); ++d) {
    box.lower[d] = std::max(bounds.lower[d], center[d] - half);
    box.upper[d] = std::min(bounds.upper[d], center[d] + half);
    if (!(box.lower[d] <= box.upper[d])) {
      throw InfeasibleRegionError("lhs_neighborhood: center is farther than r from the bounds");
    }
  }
  const Predicate in_ball = [&](const Point& p) {
    double sq = 0.0;
    for (std::size_t d = 0; d < p.size(); ++d) sq += (p[d] - center[d]) * (p[d] - center[d]);
    return std::sqrt(sq) < r && predicate(p);
  };
  return lhs_feasible(box, n, in_ball, rng, max_attempts);
}

std::vector<Point> uniform_feasible(const Bounds& bounds, std::size_t n,
                                    const Predicate& predicate, Rng& rng,
                                    std::size_t max_attempts) {
  check(bounds, n);
  if (max_attempts == 0) throw ContractError("sampling: max_attempts must be positive");
  std::vector<Point> pts(n, Point(bounds.dim()));
  std::vector<bool> ok(n, false);
  bool all = true;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < max_attempts && !ok[i]; ++a) {
      for (std::size_t d = 0; d < bounds.dim(); ++d) {
        pts[i][d] = rng.uniform(bounds.lower[d], bounds.upper[d]);
      }
      ok[i] = predicate(pts[i]);
    }
    all = all && ok[i];
  }
  if (!all) repair(bounds, n, predicate, rng, max_attempts, pts, ok);
  return pts;
}

}  // namespace sampling
}  // namespace jumpplan
