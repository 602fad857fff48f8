#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

#include "qhm/measures.hpp"
#include "qhm/metric.hpp"

namespace qhm {

/// Spectrum of the distance form restricted to the mass-zero hyperplane.
/// Eigenvalues are decreasing; `directions` holds the matching unit
/// mass-zero vectors in point coordinates (n × (n−1)).
struct CenteredSpectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXd directions;
  double scale = 0.0;  ///< max |λ|
};

CenteredSpectrum centered_spectrum(const DistanceMatrix& d);

struct FormVerdict {
  bool holds = false;
  /// Mass-zero witness against the property: positive energy for the
  /// quasihypermetric test, (near) zero energy for the strict test.
  std::optional<WeightVector> witness;
};

/// αᵀDα ≤ 0 on {Σα = 0}, i.e. the top restricted eigenvalue is at most
/// tol · max|λ|.
FormVerdict is_quasihypermetric(const DistanceMatrix& d, double tol = kEigTol);

/// The restricted form is negative definite: every restricted eigenvalue is
/// below −tol · max|λ|. True for n = 1.
FormVerdict is_strictly_quasihypermetric(const DistanceMatrix& d, double tol = kEigTol);

/// Numerical rank of D (eigenvalues above tol · max|λ|).
int rank_distance_matrix(const DistanceMatrix& d, double tol = kEigTol);

struct HypermetricVerdict {
  /// First integer vector b (Σb = 1, |bᵢ| ≤ bound) with bᵀDb > 0, in order of
  /// increasing ‖b‖₁ and lexicographic within a level.
  std::optional<std::vector<int>> violation;
  double violation_value = 0.0;
  std::int64_t checked = 0;
};

inline constexpr std::int64_t kHypermetricBudget = 20'000'000;

/// Necessary-condition check of Kelly's hypermetric inequalities up to
/// coefficient bound B. Never a proof of hypermetricity. Throws
/// BudgetExceeded when the candidate count exceeds `budget`.
HypermetricVerdict hypermetric_check_bounded(const DistanceMatrix& d, int bound,
                                             std::int64_t budget = kHypermetricBudget);

enum class MFiniteness { Finite, Infinite, NotApplicable };

struct Classification {
  bool quasihypermetric = false;
  bool strictly_quasihypermetric = false;
  MFiniteness m_finite = MFiniteness::NotApplicable;
  int rank = 0;
  std::optional<WeightVector> certificate;
  Eigen::VectorXd spectrum;  ///< restricted (centered) eigenvalues, decreasing
};

/// Fills every field and cross-checks, for n > 1, that the spectral
/// strictness verdict equals (QH ∧ M < ∞ ∧ rank = n). A disagreement throws
/// NumericalFault.
Classification classify(const DistanceMatrix& d, double tol = kEigTol);

}  // namespace qhm
