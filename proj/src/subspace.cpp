#include "qhm/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qhm/classify.hpp"
#include "qhm/errors.hpp"

namespace qhm {

namespace {

bool strict_on(const DistanceMatrix& d, const std::vector<Index>& idx, double tol) {
  if (idx.size() <= 1) return true;
  return is_strictly_quasihypermetric(d.restricted(idx), tol).holds;
}

std::string format_set(const std::vector<Index>& idx) {
  std::ostringstream out;
  out << "{";
  for (std::size_t i = 0; i < idx.size(); ++i) out << (i ? "," : "") << idx[i];
  out << "}";
  return out.str();
}

}  // namespace

SubspaceResult maximal_strict_subspace(const DistanceMatrix& d, double tol) {
  const MValue m = m_value(d, tol);
  if (m.status == MStatus::NotQuasihypermetric)
    throw InvalidInput("maximal strict subspaces require a quasihypermetric space");

  SubspaceResult out;
  for (Index i = 0; i < d.size(); ++i) {
    out.indices.push_back(i);
    if (!strict_on(d, out.indices, tol)) out.indices.pop_back();
  }
  out.cardinality = static_cast<int>(out.indices.size());
  out.rank = rank_distance_matrix(d, tol);
  out.m_finite = m.status == MStatus::Finite;
  out.predicted_cardinality = d.size() == 1 ? 1 : (out.m_finite ? out.rank : out.rank - 1);
  if (out.cardinality != out.predicted_cardinality) {
    std::ostringstream msg;
    msg << "maximal strict subspace " << format_set(out.indices) << " has "
        << out.cardinality << " points but the rank law predicts "
        << out.predicted_cardinality;
    throw NumericalFault(msg.str());
  }
  return out;
}

std::vector<std::vector<Index>> enumerate_maximal_strict_subspaces(const DistanceMatrix& d,
                                                                   double tol,
                                                                   EnumerationCap cap) {
  require_metric(d);
  const Index n = d.size();
  if (n > cap.max_points || (std::int64_t{1} << n) > cap.max_subsets) {
    std::ostringstream msg;
    msg << "subset enumeration over " << n << " points exceeds the cap ("
        << cap.max_points << " points, " << cap.max_subsets << " subsets)";
    throw BudgetExceeded(msg.str());
  }
  if (!is_quasihypermetric(d, tol).holds)
    throw InvalidInput("maximal strict subspaces require a quasihypermetric space");

  const std::uint64_t full = (std::uint64_t{1} << n);
  std::vector<char> strict(full, 0);
  auto members = [n](std::uint64_t mask) {
    std::vector<Index> idx;
    for (Index i = 0; i < n; ++i)
      if (mask >> i & 1u) idx.push_back(i);
    return idx;
  };

  // Strictness is hereditary, so a set is only tested when every subset
  // obtained by dropping one point is strict. Masks ascend, so those
  // subsets are already decided.
  for (std::uint64_t mask = 1; mask < full; ++mask) {
    bool candidate = true;
    for (Index i = 0; i < n && candidate; ++i)
      if ((mask >> i & 1u) && (mask & ~(std::uint64_t{1} << i)) != 0)
        candidate = strict[mask & ~(std::uint64_t{1} << i)] != 0;
    strict[mask] = candidate && strict_on(d, members(mask), tol);
  }

  std::vector<std::vector<Index>> out;
  for (std::uint64_t mask = 1; mask < full; ++mask) {
    if (!strict[mask]) continue;
    bool maximal = true;
    for (Index i = 0; i < n && maximal; ++i)
      if (!(mask >> i & 1u) && strict[mask | (std::uint64_t{1} << i)]) maximal = false;
    if (maximal) out.push_back(members(mask));
  }
  std::sort(out.begin(), out.end());

  for (const auto& s : out) {
    if (s.size() != out.front().size())
      throw NumericalFault("maximal strict subspaces " + format_set(out.front()) + " and " +
                           format_set(s) + " differ in cardinality");
  }
  return out;
}

WeightVector extension_measure(const DistanceMatrix& d, const std::vector<Index>& subspace,
                               Index x, double tol) {
  require_metric(d);
  if (x < 0 || x >= d.size()) throw InvalidInput("extension point out of range");
  if (std::find(subspace.begin(), subspace.end(), x) != subspace.end())
    throw InvalidInput("extension point lies in the subspace");
  if (!strict_on(d, subspace, tol))
    throw InvalidInput("subspace " + format_set(subspace) + " is not strictly quasihypermetric");

  std::vector<Index> joined = subspace;
  joined.push_back(x);
  const DistanceMatrix restricted = d.restricted(joined);
  const FormVerdict strict = is_strictly_quasihypermetric(restricted, tol);
  if (strict.holds)
    throw InvalidInput("subspace " + format_set(subspace) + " is not maximal: adding point " +
                       std::to_string(x) + " keeps it strictly quasihypermetric");
  if (!is_quasihypermetric(restricted, tol).holds)
    throw InvalidInput("space is not quasihypermetric");

  // The witness spans the null direction of the form on Y ∪ {x}; it has
  // mass 0 and a nonzero coefficient at x because Y alone is strict.
  const Eigen::VectorXd& v = strict.witness->weights();
  const double at_x = v[static_cast<Index>(subspace.size())];
  if (std::abs(at_x) <= 1e-12 * v.cwiseAbs().maxCoeff())
    throw NumericalFault("null direction does not involve the extension point");

  Eigen::VectorXd mu = Eigen::VectorXd::Zero(d.size());
  for (std::size_t a = 0; a < subspace.size(); ++a)
    mu[subspace[a]] = -v[static_cast<Index>(a)] / at_x;
  return WeightVector(std::move(mu));
}

PreservationReport verify_m_preservation(const DistanceMatrix& d,
                                         const std::vector<Index>& subspace, double tol) {
  const MValue whole = m_value(d);
  if (whole.status != MStatus::Finite)
    throw InvalidInput("M-preservation needs a quasihypermetric space with M finite");
  if (subspace.empty() || !strict_on(d, subspace, kEigTol))
    throw InvalidInput("subspace " + format_set(subspace) + " is not strictly quasihypermetric");
  for (Index x = 0; x < d.size(); ++x) {
    if (std::find(subspace.begin(), subspace.end(), x) != subspace.end()) continue;
    std::vector<Index> grown = subspace;
    grown.push_back(x);
    if (strict_on(d, grown, kEigTol))
      throw InvalidInput("subspace " + format_set(subspace) + " is not maximal");
  }

  const MValue part = m_value(d.restricted(subspace));
  if (part.status != MStatus::Finite)
    throw NumericalFault("strict subspace has M infinite");

  Eigen::VectorXd extended = Eigen::VectorXd::Zero(d.size());
  for (std::size_t a = 0; a < subspace.size(); ++a)
    extended[subspace[a]] = part.invariant[static_cast<Index>(a)];
  const Eigen::VectorXd pot = potential(d, WeightVector(extended));

  PreservationReport report{part.value, whole.value, pot.maxCoeff() - pot.minCoeff()};
  const double slack = tol * std::max(whole.value, 1e-300);
  if (std::abs(report.m_subspace - report.m_space) > slack)
    throw NumericalFault("M(Y) = " + std::to_string(report.m_subspace) +
                         " differs from M(X) = " + std::to_string(report.m_space));
  if (report.potential_spread > slack)
    throw NumericalFault("invariant measure of the subspace is not invariant on the space");
  return report;
}

}  // namespace qhm
