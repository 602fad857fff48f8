#include "qhm/l1geom.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qhm/errors.hpp"

namespace qhm {

DistanceMatrix l1_metric(const PointConfig& config) {
  const Index k = config.count();
  if (k == 0) throw InvalidInput("empty point set");
  Eigen::MatrixXd d(k, k);
  for (Index i = 0; i < k; ++i) {
    d(i, i) = 0.0;
    for (Index j = i + 1; j < k; ++j) {
      const double dist = (config.points.row(i) - config.points.row(j)).lpNorm<1>();
      if (dist == 0.0)
        throw InvalidInput("coincident points " + config.label(i) + " and " + config.label(j));
      d(i, j) = dist;
      d(j, i) = dist;
    }
  }
  return DistanceMatrix(std::move(d));
}

Eigen::VectorXd coordinate_diameters(const PointConfig& config) {
  if (config.count() == 0) return Eigen::VectorXd::Zero(config.dim());
  return (config.points.colwise().maxCoeff() - config.points.colwise().minCoeff()).transpose();
}

BoundsReport l1_upper_bounds(const PointConfig& config, double tol) {
  const DistanceMatrix d = l1_metric(config);
  BoundsReport r;
  r.points = config.count();
  r.dimension = config.dim();
  r.diameter = diameter(d);
  const double k = static_cast<double>(r.points);
  const double n = static_cast<double>(r.dimension);
  r.sum_proj_bound = 0.5 * coordinate_diameters(config).sum();
  r.dim_bound = n * r.diameter / 2.0;
  r.card_bound = k / 4.0 * r.diameter;
  if (r.dimension >= 2 && r.points <= 2 * r.dimension)
    r.refined_bound = std::min(k / 4.0, n / 2.0 - 0.25) * r.diameter;
  if (r.points <= 4) r.four_point_bound = 0.75 * r.diameter;

  const MValue m = m_value(d);
  if (m.status != MStatus::Finite)
    throw NumericalFault("L1 point set produced a space without finite M");
  r.m_actual = m.value;

  const double slack = tol * std::max(r.diameter, 1e-300);
  auto check = [&](double bound, const char* name) {
    if (r.m_actual > bound + slack) {
      std::ostringstream msg;
      msg << "M = " << r.m_actual << " exceeds the " << name << " bound " << bound;
      throw NumericalFault(msg.str());
    }
  };
  check(r.sum_proj_bound, "projection-sum");
  check(r.dim_bound, "dimension");
  check(r.card_bound, "cardinality");
  if (r.refined_bound) check(*r.refined_bound, "refined cardinality");
  if (r.four_point_bound) check(*r.four_point_bound, "four-point");
  return r;
}

namespace {

// Pairwise (cascade) summation.
double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) return std::accumulate(v.begin(), v.end(), 0.0);
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

void check_weights(std::span<const double> xs, std::span<const double> weights) {
  if (xs.size() != weights.size()) throw DimensionMismatch("positions and weights differ in length");
  if (xs.empty()) throw InvalidInput("empty weight list");
  const double mass = std::accumulate(weights.begin(), weights.end(), 0.0);
  double size = 0.0;
  for (double w : weights) size += std::abs(w);
  if (std::abs(mass - 1.0) > 1e-9 * std::max(1.0, size))
    throw InvalidInput("weights must sum to 1");
}

void check_ascending(std::span<const double> xs) {
  if (!std::is_sorted(xs.begin(), xs.end())) throw InvalidInput("positions must be ascending");
}

}  // namespace

double one_dim_energy(std::span<const double> xs, std::span<const double> weights) {
  if (xs.size() != weights.size()) throw DimensionMismatch("positions and weights differ in length");
  std::vector<double> terms;
  terms.reserve(xs.size() * xs.size() / 2);
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j)
      terms.push_back(2.0 * weights[i] * weights[j] * std::abs(xs[i] - xs[j]));
  return pairwise_sum(terms);
}

std::pair<std::vector<double>, std::vector<double>> fold_negative_weight(
    std::span<const double> xs, std::span<const double> weights, FoldSide side) {
  check_weights(xs, weights);
  check_ascending(xs);
  if (xs.size() < 2) throw InvalidInput("folding needs at least two points");
  std::vector<double> x(xs.begin(), xs.end());
  std::vector<double> w(weights.begin(), weights.end());
  if (side == FoldSide::Low) {
    if (!(w.front() < 0.0)) throw InvalidInput("low fold needs a negative first weight");
    w[1] += w[0];
    x.erase(x.begin());
    w.erase(w.begin());
  } else {
    if (!(w.back() < 0.0)) throw InvalidInput("high fold needs a negative last weight");
    w[w.size() - 2] += w.back();
    x.pop_back();
    w.pop_back();
  }
  return {std::move(x), std::move(w)};
}

double one_dim_energy_bound(std::span<const double> xs, std::span<const double> weights) {
  check_weights(xs, weights);
  check_ascending(xs);
  std::size_t r = xs.size();
  std::size_t s = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (weights[i] >= 0.0) {
      r = std::min(r, i);
      s = i;
    }
  }
  if (r == xs.size()) throw InvalidInput("no nonnegative weight");
  const double bound = 0.5 * (xs[s] - xs[r]);
  const double e = one_dim_energy(xs, weights);
  const double spread = xs.back() - xs.front();
  if (e > bound + 1e-12 * std::max(spread, 1.0))
    throw NumericalFault("one-dimensional energy exceeds ½(x_s − x_r)");
  return bound;
}

L1Flag l1_necessary_condition(const DistanceMatrix& d, double tol) {
  L1Flag flag;
  const MValue m = m_value(d);
  flag.status = m.status;
  flag.bound = static_cast<double>(d.size()) / 4.0 * diameter(d);
  if (m.status == MStatus::Finite) {
    flag.m = m.value;
    flag.consistent_with_l1 = m.value <= flag.bound + tol * diameter(d);
  }
  // Non-QH spaces and infinite M both rule out L1-embeddability.
  return flag;
}

}  // namespace qhm
