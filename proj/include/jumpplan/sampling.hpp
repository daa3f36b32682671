#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "jumpplan/rng.hpp"

namespace jumpplan {

using Point = std::vector<double>;

struct Bounds {
  Point lower;
  Point upper;

  std::size_t dim() const { return lower.size(); }
  bool contains(const Point& p) const;
  Point clamp(Point p) const;
};

using Predicate = std::function<bool(const Point&)>;

namespace sampling {

/// Latin hypercube sample: in every dimension the n points fall one per
/// stratum. Per dimension, a stratum permutation is drawn, then n offsets.
std::vector<Point> lhs_box(const Bounds& bounds, std::size_t n, Rng& rng);

/// Latin hypercube sample filtered by `predicate`. Up to `max_attempts` times
/// in total, the rejected points re-permute the strata they hold and redraw
/// within them, so accepted points never move and the batch stays Latin.
/// Points still rejected become perturbed copies of accepted points. Throws
/// InfeasibleRegionError when nothing is accepted.
std::vector<Point> lhs_feasible(const Bounds& bounds, std::size_t n, const Predicate& predicate,
                                Rng& rng, std::size_t max_attempts = 32);

/// lhs_feasible inside `bounds` restricted to the box center +- r / sqrt(d)
/// (the largest cube inside the radius-r ball) and filtered by the ball
/// ||p - center|| < r.
std::vector<Point> lhs_neighborhood(const Point& center, double r, const Bounds& bounds,
                                    std::size_t n, const Predicate& predicate, Rng& rng,
                                    std::size_t max_attempts = 32);

/// I.i.d. uniform counterpart of lhs_feasible with the same repair rules.
std::vector<Point> uniform_feasible(const Bounds& bounds, std::size_t n,
                                    const Predicate& predicate, Rng& rng,
                                    std::size_t max_attempts = 32);

}  // namespace sampling
}  // namespace jumpplan
