#pragma once

#include <cstdint>
#include <vector>

#include "qhm/measures.hpp"
#include "qhm/metric.hpp"

namespace qhm {

struct SubspaceResult {
  std::vector<Index> indices;  ///< ascending
  int cardinality = 0;
  int rank = 0;                ///< rank of the full distance matrix
  bool m_finite = false;
  int predicted_cardinality = 0;  ///< r if M < ∞, r − 1 otherwise (1 when n = 1)
};

/// Greedy scan in index order: a point joins Y when Y stays strictly
/// quasihypermetric. The result is maximal, and its size is checked against
/// the rank law |Y| = r (M finite) or r − 1 (M infinite); a mismatch throws
/// NumericalFault. Throws InvalidInput if D is not quasihypermetric.
SubspaceResult maximal_strict_subspace(const DistanceMatrix& d, double tol = kEigTol);

struct EnumerationCap {
  int max_points = 12;
  std::int64_t max_subsets = 4096;
};

/// Every maximal strictly quasihypermetric subset, in lexicographic order.
/// All share one cardinality; a disagreement throws NumericalFault.
std::vector<std::vector<Index>> enumerate_maximal_strict_subspaces(
    const DistanceMatrix& d, double tol = kEigTol, EnumerationCap cap = {});

/// The unique mass-one μₓ supported on Y with I(μₓ − δₓ) = 0, as a
/// full-length weight vector. Requires Y strictly quasihypermetric and
/// Y ∪ {x} not; otherwise throws InvalidInput.
WeightVector extension_measure(const DistanceMatrix& d, const std::vector<Index>& subspace,
                               Index x, double tol = kEigTol);

struct PreservationReport {
  double m_subspace = 0.0;
  double m_space = 0.0;
  /// max − min of the potential on X of Y's invariant measure (extended by 0).
  double potential_spread = 0.0;
};

/// Checks M(Y) = M(X) and that Y's invariant measure has constant potential
/// on all of X, both to tol · M(X). Throws InvalidInput when M(X) is not
/// finite or Y is not strictly quasihypermetric, NumericalFault when either
/// identity fails.
PreservationReport verify_m_preservation(const DistanceMatrix& d,
                                         const std::vector<Index>& subspace,
                                         double tol = 1e-8);

}  // namespace qhm
