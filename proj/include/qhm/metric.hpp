#pragma once

#include <Eigen/Dense>

#include <array>
#include <span>
#include <string>
#include <vector>

namespace qhm {

using Index = Eigen::Index;

/// Default tolerance for metric axioms, relative to the diameter.
inline constexpr double kMetricTol = 1e-9;

/// A finite space (X, d) given by its n × n distance matrix. Construction
/// only checks shape; use validate_metric (or require_metric) for the axioms.
class DistanceMatrix {
 public:
  explicit DistanceMatrix(Eigen::MatrixXd d);

  Index size() const { return d_.rows(); }
  double operator()(Index i, Index j) const { return d_(i, j); }
  const Eigen::MatrixXd& matrix() const { return d_; }

  /// Subspace on the given indices, in the given order.
  DistanceMatrix restricted(std::span<const Index> indices) const;
  DistanceMatrix scaled(double factor) const;

  friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

 private:
  Eigen::MatrixXd d_;
};

enum class ViolationKind { Diagonal, Symmetry, Positivity, Triangle, NonFinite };

std::string to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  /// (i, j, k) for triangle violations d[i][k] > d[i][j] + d[j][k];
  /// (i, j, j) for pair violations and (i, i, i) for diagonal ones.
  std::array<Index, 3> where;
  double magnitude;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Reports every diagonal, symmetry, positivity and triangle violation whose
/// magnitude exceeds tol · max(diameter, 1e-300).
ValidationReport validate_metric(const DistanceMatrix& d, double tol = kMetricTol);

/// Throws InvalidInput describing the first violation, if any.
void require_metric(const DistanceMatrix& d, double tol = kMetricTol);

/// Largest distance; 0 for a one-point space.
double diameter(const DistanceMatrix& d);

/// Rescales to diameter 1. Throws InvalidInput for n = 1 or zero diameter.
DistanceMatrix normalize_diameter(const DistanceMatrix& d);

}  // namespace qhm
