#pragma once

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qhm/errors.hpp"
#include "qhm/measures.hpp"
#include "qhm/metric.hpp"

namespace qhm {

enum class Norm { Euclidean, L1 };

/// k labeled points in R^dim, one per row.
struct PointConfig {
  Eigen::MatrixXd points;
  std::vector<std::string> labels;  ///< empty or one per point
  Norm norm = Norm::Euclidean;

  Index count() const { return points.rows(); }
  Index dim() const { return points.cols(); }
  std::string label(Index i) const;
};

/// Relative tolerance for angle tests, scaled by the squared diameter.
inline constexpr double kAngleTol = 1e-9;

/// Thrown when a Gram matrix has a significantly negative eigenvalue.
class NotQuasihypermetricError : public InvalidInput {
 public:
  NotQuasihypermetricError(const std::string& what, WeightVector witness)
      : InvalidInput(what), witness_(std::move(witness)) {}
  const WeightVector& witness() const { return witness_; }

 private:
  WeightVector witness_;
};

/// Vertex q of (p, q, r) sees p and r at an obtuse angle.
class ObtuseConfigurationError : public InvalidInput {
 public:
  ObtuseConfigurationError(const std::string& what, std::array<Index, 3> triple)
      : InvalidInput(what), triple_(triple) {}
  const std::array<Index, 3>& triple() const { return triple_; }

 private:
  std::array<Index, 3> triple_;
};

/// Isometric embedding of (X, d^{1/2}) in euclidean space by classical
/// scaling of G = −½·P·D·P. The dimension is the numerical rank of G;
/// coordinates follow decreasing eigenvalue with the first non-negligible
/// entry of each axis made positive. Eigenvalues in [−tol·λmax, 0] are
/// clamped; anything more negative throws NotQuasihypermetricError.
PointConfig schoenberg_embed(const DistanceMatrix& d, double tol = kEigTol);

struct AngleClass {
  enum class Kind { Acute, NonObtuse, Obtuse };
  Kind kind = Kind::Acute;
  /// For Obtuse: first (p, q, r), p < r, in lexicographic order, with the
  /// obtuse angle at q.
  std::optional<std::array<Index, 3>> witness;
};

std::string to_string(AngleClass::Kind kind);

/// Angle at q in (p, q, r) is obtuse iff (p−q)·(r−q) < −tol·diam², right iff
/// within ±tol·diam² of zero. Fewer than three points are vacuously acute.
/// Throws InvalidInput on coincident points.
AngleClass angle_classification(const PointConfig& config, double tol = kAngleTol);

/// Squared euclidean distances. Throws ObtuseConfigurationError when an
/// obtuse angle would break the triangle inequality.
DistanceMatrix config_to_metric(const PointConfig& config, double tol = kAngleTol);

struct SphereFit {
  Eigen::VectorXd center;
  double radius = 0.0;
  double max_residual = 0.0;
};

inline constexpr double kSphereTol = 1e-8;

/// Least-squares sphere through all points, centered in their affine hull.
/// Present only when every point is within tol·radius of the sphere.
std::optional<SphereFit> circumsphere(const PointConfig& config, double tol = kSphereTol);

/// First pair i < j with ‖pᵢ + pⱼ − 2c‖ ≤ tol·radius.
std::optional<std::pair<Index, Index>> antipodal_pair(const PointConfig& config,
                                                      const SphereFit& sphere,
                                                      double tol = kSphereTol);

/// Dimension of the affine hull of the points.
int affine_dimension(const PointConfig& config, double tol = kEigTol);

}  // namespace qhm
