#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qhm/embed.hpp"
#include "qhm/measures.hpp"
#include "qhm/metric.hpp"

namespace qhm {

/// Pairwise ‖xᵢ − xⱼ‖₁. Throws InvalidInput on coincident points.
DistanceMatrix l1_metric(const PointConfig& config);

/// D(P_s(X)) = max − min of coordinate s, for every s.
Eigen::VectorXd coordinate_diameters(const PointConfig& config);

/// Upper bounds on M for a finite subset of (Rⁿ, ‖·‖₁) with k points.
struct BoundsReport {
  Index points = 0;      ///< k
  Index dimension = 0;   ///< n
  double diameter = 0.0;
  double sum_proj_bound = 0.0;  ///< ½ Σ_s D(P_s(X))
  double dim_bound = 0.0;       ///< n·D(X)/2
  double card_bound = 0.0;      ///< (k/4)·D(X)
  std::optional<double> refined_bound;     ///< min(k/4, n/2 − ¼)·D(X), n ≥ 2, k ≤ 2n
  std::optional<double> four_point_bound;  ///< ¾·D(X), k ≤ 4
  double m_actual = 0.0;
};

/// All applicable bounds plus the actual M. A bound below M (beyond
/// tol·D(X)) throws NumericalFault.
BoundsReport l1_upper_bounds(const PointConfig& config, double tol = 1e-9);

enum class FoldSide { Low, High };

/// Σᵢⱼ αᵢ αⱼ |xᵢ − xⱼ|, accumulated pairwise.
double one_dim_energy(std::span<const double> xs, std::span<const double> weights);

/// Merges the negative end weight into its neighbour: the low side needs
/// α₁ < 0 and drops x₁; the high side needs αₙ < 0 and drops xₙ. The
/// one-dimensional energy does not decrease. xs must be ascending and the
/// weights must sum to 1; violations throw InvalidInput.
std::pair<std::vector<double>, std::vector<double>> fold_negative_weight(
    std::span<const double> xs, std::span<const double> weights, FoldSide side);

/// ½(x_s − x_r) with r, s the first and last indices of nonnegative weight
/// (xs ascending, Σα = 1). Throws NumericalFault if the energy exceeds it.
double one_dim_energy_bound(std::span<const double> xs, std::span<const double> weights);

/// Necessary condition for L1-embeddability of an abstract finite metric:
/// M(X) ≤ (k/4)·D(X). Reported, not decided.
struct L1Flag {
  MStatus status = MStatus::NotQuasihypermetric;
  double m = 0.0;
  double bound = 0.0;
  /// False when the space is certainly not L1-embeddable.
  bool consistent_with_l1 = false;
};

L1Flag l1_necessary_condition(const DistanceMatrix& d, double tol = 1e-9);

}  // namespace qhm
