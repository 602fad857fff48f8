#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qhm/embed.hpp"
#include "qhm/measures.hpp"
#include "qhm/metric.hpp"

namespace qhm {

/// n points, all at mutual distance 1.
DistanceMatrix gen_discrete(Index n);

/// k equally spaced points on a circle of radius ρ with the arc-length metric.
DistanceMatrix gen_circle(Index k, double radius);

struct BoxCorners {
  PointConfig config;
  DistanceMatrix metric;
  /// Positions (in `config`) of the affinely independent corners
  /// (a₁,…,a_m) and its single-sign flips that are present.
  std::vector<Index> canonical;
};

/// Corners (±a₁, …, ±a_m) of a rectangular box; corner c negates axis j iff
/// bit j of c is set, so corner 0 is (a₁,…,a_m) and corner 2ʲ flips axis j.
/// `subset` selects corners by that numbering, in the given order. The metric
/// is squared euclidean distance.
BoxCorners gen_box_corners(const std::vector<double>& half_sides,
                           const std::optional<std::vector<Index>>& subset = std::nullopt);

struct StarSpace {
  PointConfig config;  ///< e₁, −e₁, …, eₙ, −eₙ, z = 0 in (Rⁿ, ‖·‖₁)
  DistanceMatrix metric;
  WeightVector measure;  ///< ½ on each ±eᵢ, −(n−1) on z
};

StarSpace gen_star(Index n);

struct JoinSpec {
  DistanceMatrix first;
  DistanceMatrix second;
  double cross = 0.0;
};

/// Disjoint union with constant distance `cross` between the blocks. Needs
/// 2·cross ≥ max(diam₁, diam₂) and cross > 0.
DistanceMatrix gen_join(const JoinSpec& spec);

/// discrete(m) joined to discrete(2) at c = (m−1)/(2m) + ¼ + ε; strictly
/// quasihypermetric with diameter 1 for 0 < ε ≤ (m+2)/(4m). An ε outside
/// that range throws InvalidInput reporting the diameter it would give.
DistanceMatrix gen_join_discrete_pair(Index m, double eps);

/// discrete(m) joined to circle(4, 2/(πm)) at c = ½ + ε; quasihypermetric,
/// not strictly, diameter 1 for 0 < ε ≤ ½.
DistanceMatrix gen_join_discrete_circle(Index m, double eps);

/// n ≤ 2^dim points in R^dim with no obtuse angle. Samples the cube
/// [−1, 1]^dim and repairs obtuse vertices by moving them along the gradient
/// of the violated dot product; resamples up to `attempts` times.
/// Deterministic in `seed`. Throws InvalidInput when n > 2^dim and
/// BudgetExceeded when attempts run out.
PointConfig gen_random_nonobtuse(Index n, Index dim, std::uint64_t seed, int attempts = 200);

}  // namespace qhm
