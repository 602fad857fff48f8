#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qhm/embed.hpp"

namespace qhm {

/// Type (n, r): n points, diameter 1, quasihypermetric, M finite, maximal
/// strictly quasihypermetric subspaces of size r. Spaces of this type exist
/// exactly when 2 ≤ r ≤ n ≤ 2^{r−1}.
bool knr_feasible(int n, int r);

/// Cells where M is unbounded over spaces of type (n, r):
/// n ≥ 5 and ⌈(n+5)/2⌉ ≤ r ≤ n.
bool knr_known_infinite(int n, int r);

struct KnrOptions {
  std::int64_t budget = 100000;  ///< total moves, split evenly over restarts
  std::uint64_t seed = 1;
  int restarts = 8;
  /// Known-infinite cells stop once this ratio is exceeded.
  double threshold = 5.0;
  /// Eigenvalue tolerance for the type certificate; tighter than the
  /// default so accepted spaces are well conditioned.
  double certificate_tol = 1e-6;
  int threads = 0;  ///< 0 = hardware concurrency
};

struct KnrResult {
  int n = 0;
  int r = 0;
  bool found = false;  ///< some feasible configuration was reached
  double best_ratio = 0.0;
  PointConfig config;  ///< scaled so its squared-distance space has diameter 1
  std::vector<std::pair<std::int64_t, double>> history;  ///< (move, best ratio) at improvements
  std::int64_t moves = 0;
  int best_restart = -1;
  bool threshold_reached = false;
};

/// M/D of the space of squared distances of `config` when it has type
/// (n, r) with `r` as given, checked through the angle, M and subspace
/// machinery; nullopt otherwise.
std::optional<double> type_ratio(const PointConfig& config, int r, double tol = 1e-6);

/// Randomized hill-climb for large M/D among spaces of type (n, r).
///
/// Configurations are kept on the unit sphere of R^{r−1} (an S-embedding
/// spanning R^{r−1} on a sphere of radius ρ has M = 2ρ²). Restarts are seeded
/// from box-corner subsets, products of simplices, acute configurations
/// lifted onto the sphere and random spherical samples. Moves perturb one
/// point, stretch along a principal axis or apply a near-identity linear
/// map; right angles that a move would open into obtuse ones are held
/// fixed through tangent projection and Newton correction. A periodic
/// radius-growth step flattens the configuration toward its mean direction,
/// which is the same as lifting it onto a larger sphere at fixed diameter.
/// A move is kept when the type certificate holds and M/D does not drop.
///
/// Throws InvalidInput for infeasible (n, r).
KnrResult knr_lower_bound_search(int n, int r, const KnrOptions& options = {});

struct MonotonicityReport {
  int r = 0;
  std::vector<KnrResult> cells;  ///< one per n, ascending
  /// Whether the empirical lower bounds are weakly decreasing in n. Being
  /// lower bounds, a failure is informational only.
  bool consistent = true;
  std::vector<std::string> notes;
};

MonotonicityReport knr_monotonicity_probe(int r, int n_first, int n_last,
                                          const KnrOptions& options = {});

}  // namespace qhm
