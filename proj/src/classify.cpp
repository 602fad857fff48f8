#include "qhm/classify.hpp"

#include <cmath>
#include <functional>

#include "qhm/errors.hpp"
#include "qhm/linalg.hpp"

namespace qhm {

CenteredSpectrum centered_spectrum(const DistanceMatrix& d) {
  const Eigen::MatrixXd basis = linalg::mass_zero_basis(d.size());
  const Eigen::MatrixXd form = basis.transpose() * d.matrix() * basis;
  const linalg::SymmetricEigen eig = linalg::jacobi_eigen(form);
  CenteredSpectrum out;
  out.values = eig.values;
  out.directions = basis * eig.vectors;
  out.scale = linalg::spectral_scale(eig.values);
  return out;
}

namespace {

// Scales so the largest entry has magnitude 1 and the first entry of
// non-negligible size is positive.
WeightVector canonical_witness(Eigen::VectorXd v) {
  const double big = v.cwiseAbs().maxCoeff();
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-9 * big) {
      if (v[i] < 0) v = -v;
      break;
    }
  }
  return WeightVector(v / big);
}

}  // namespace

FormVerdict is_quasihypermetric(const DistanceMatrix& d, double tol) {
  require_metric(d);
  if (d.size() == 1) return {true, std::nullopt};
  const CenteredSpectrum spec = centered_spectrum(d);
  if (spec.values[0] <= tol * spec.scale) return {true, std::nullopt};
  return {false, canonical_witness(spec.directions.col(0))};
}

FormVerdict is_strictly_quasihypermetric(const DistanceMatrix& d, double tol) {
  require_metric(d);
  if (d.size() == 1) return {true, std::nullopt};
  const CenteredSpectrum spec = centered_spectrum(d);
  if (spec.values[0] < -tol * spec.scale) return {true, std::nullopt};
  return {false, canonical_witness(spec.directions.col(0))};
}

int rank_distance_matrix(const DistanceMatrix& d, double tol) {
  return linalg::numerical_rank(linalg::jacobi_eigen(d.matrix()).values, tol);
}

namespace {

// Number of integer vectors of length `len` with entries in [−B, B] and a
// given sum, used to enforce the enumeration budget up front.
std::int64_t count_with_sum(int len, int bound, int sum) {
  const int span = len * bound;
  std::vector<std::int64_t> ways(static_cast<std::size_t>(2 * span + 1), 0);
  ways[static_cast<std::size_t>(span)] = 1;  // offset so index span ↔ sum 0
  for (int k = 0; k < len; ++k) {
    std::vector<std::int64_t> next(ways.size(), 0);
    for (std::size_t s = 0; s < ways.size(); ++s) {
      if (ways[s] == 0) continue;
      for (int v = -bound; v <= bound; ++v) {
        const auto t = static_cast<std::int64_t>(s) + v;
        if (t < 0 || t >= static_cast<std::int64_t>(next.size())) continue;
        next[static_cast<std::size_t>(t)] =
            std::min<std::int64_t>(next[static_cast<std::size_t>(t)] + ways[s],
                                   std::numeric_limits<std::int64_t>::max() / 4);
      }
    }
    ways = std::move(next);
  }
  const int idx = sum + span;
  if (idx < 0 || idx >= static_cast<int>(ways.size())) return 0;
  return ways[static_cast<std::size_t>(idx)];
}

}  // namespace

HypermetricVerdict hypermetric_check_bounded(const DistanceMatrix& d, int bound,
                                             std::int64_t budget) {
  require_metric(d);
  if (bound < 1) throw InvalidInput("hypermetric bound must be at least 1");
  const int n = static_cast<int>(d.size());
  const std::int64_t total = count_with_sum(n, bound, 1);
  if (total > budget)
    throw BudgetExceeded("hypermetric enumeration needs " + std::to_string(total) +
                         " candidates, budget is " + std::to_string(budget));

  const Eigen::MatrixXd& D = d.matrix();
  const double slack = kMetricTol * std::max(diameter(d), 1e-300);
  HypermetricVerdict out;
  std::vector<int> b(static_cast<std::size_t>(n), 0);
  int level = 1;

  // Fill positions [pos, n) so the remaining sum and remaining ‖·‖₁ are met
  // exactly; values ascend so vectors appear in lexicographic order.
  std::function<bool(int, int, int)> fill = [&](int pos, int sum_left, int l1_left) -> bool {
    const int slots = n - pos;
    if (slots == 0) {
      if (sum_left != 0 || l1_left != 0) return false;
      ++out.checked;
      double value = 0.0;
      for (int i = 0; i < n; ++i) {
        if (b[static_cast<std::size_t>(i)] == 0) continue;
        for (int j = 0; j < n; ++j)
          value += b[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)] * D(i, j);
      }
      if (value > slack * static_cast<double>(level * level)) {
        out.violation = b;
        out.violation_value = value;
        return true;
      }
      return false;
    }
    if (std::abs(sum_left) > l1_left || l1_left > slots * bound) return false;
    for (int v = -bound; v <= bound; ++v) {
      const int rest_l1 = l1_left - std::abs(v);
      if (rest_l1 < 0) continue;
      b[static_cast<std::size_t>(pos)] = v;
      if (fill(pos + 1, sum_left - v, rest_l1)) return true;
    }
    b[static_cast<std::size_t>(pos)] = 0;
    return false;
  };

  for (level = 1; level <= n * bound; level += 2)
    if (fill(0, 1, level)) return out;
  return out;
}

Classification classify(const DistanceMatrix& d, double tol) {
  require_metric(d);
  Classification out;
  const Index n = d.size();
  if (n == 1) {
    out.quasihypermetric = true;
    out.strictly_quasihypermetric = true;
    out.m_finite = MFiniteness::Finite;
    out.rank = 0;
    out.spectrum = Eigen::VectorXd(0);
    return out;
  }

  const CenteredSpectrum spec = centered_spectrum(d);
  out.spectrum = spec.values;
  out.quasihypermetric = spec.values[0] <= tol * spec.scale;
  out.strictly_quasihypermetric = spec.values[0] < -tol * spec.scale;
  out.rank = rank_distance_matrix(d, tol);
  if (!out.strictly_quasihypermetric)
    out.certificate = canonical_witness(spec.directions.col(0));

  if (!out.quasihypermetric) {
    out.m_finite = MFiniteness::NotApplicable;
    return out;
  }
  const MValue m = m_value(d, tol);
  out.m_finite = m.status == MStatus::Finite ? MFiniteness::Finite : MFiniteness::Infinite;

  const bool criterion = out.m_finite == MFiniteness::Finite && out.rank == n;
  if (criterion != out.strictly_quasihypermetric)
    throw NumericalFault(
        "strictness from the restricted spectrum disagrees with (QH, M finite, D "
        "non-singular); the input is too ill-conditioned for tolerance " +
        std::to_string(tol));
  return out;
}

}  // namespace qhm
