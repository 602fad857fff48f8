#include "qhm/generators.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "qhm/errors.hpp"

namespace qhm {

DistanceMatrix gen_discrete(Index n) {
  if (n < 1) throw InvalidInput("discrete space needs at least one point");
  return DistanceMatrix(Eigen::MatrixXd::Ones(n, n) - Eigen::MatrixXd::Identity(n, n));
}

DistanceMatrix gen_circle(Index k, double radius) {
  if (k < 2) throw InvalidInput("circle needs at least two points");
  if (!(radius > 0.0)) throw InvalidInput("circle radius must be positive");
  const double arc = 2.0 * std::numbers::pi * radius / static_cast<double>(k);
  Eigen::MatrixXd d(k, k);
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j) {
      const Index gap = std::abs(i - j);
      d(i, j) = arc * static_cast<double>(std::min(gap, k - gap));
    }
  return DistanceMatrix(std::move(d));
}

BoxCorners gen_box_corners(const std::vector<double>& half_sides,
                           const std::optional<std::vector<Index>>& subset) {
  const auto m = static_cast<Index>(half_sides.size());
  if (m < 1 || m > 20) throw InvalidInput("box dimension must be between 1 and 20");
  for (double a : half_sides)
    if (!(a > 0.0)) throw InvalidInput("box half-sides must be positive");

  const Index total = Index{1} << m;
  std::vector<Index> corners;
  if (subset) {
    corners = *subset;
    for (Index c : corners)
      if (c < 0 || c >= total) throw InvalidInput("box corner index " + std::to_string(c) + " out of range");
    for (std::size_t i = 0; i < corners.size(); ++i)
      for (std::size_t j = i + 1; j < corners.size(); ++j)
        if (corners[i] == corners[j]) throw InvalidInput("box corner repeated in subset");
  } else {
    for (Index c = 0; c < total; ++c) corners.push_back(c);
  }

  BoxCorners out{PointConfig{}, DistanceMatrix(Eigen::MatrixXd::Zero(1, 1)), {}};
  out.config.points.resize(static_cast<Index>(corners.size()), m);
  for (std::size_t row = 0; row < corners.size(); ++row) {
    const Index c = corners[row];
    std::string label = "c";
    for (Index j = 0; j < m; ++j) {
      const bool negate = (c >> j) & 1;
      out.config.points(static_cast<Index>(row), j) =
          negate ? -half_sides[static_cast<std::size_t>(j)] : half_sides[static_cast<std::size_t>(j)];
      label += negate ? '-' : '+';
    }
    out.config.labels.push_back(label);
    const bool canonical = c == 0 || (c & (c - 1)) == 0;
    if (canonical) out.canonical.push_back(static_cast<Index>(row));
  }
  out.metric = config_to_metric(out.config);
  return out;
}

StarSpace gen_star(Index n) {
  if (n < 2) throw InvalidInput("star space needs n >= 2");
  StarSpace out{PointConfig{}, DistanceMatrix(Eigen::MatrixXd::Zero(1, 1)), WeightVector{}};
  out.config.norm = Norm::L1;
  out.config.points = Eigen::MatrixXd::Zero(2 * n + 1, n);
  Eigen::VectorXd mu(2 * n + 1);
  for (Index i = 0; i < n; ++i) {
    out.config.points(2 * i, i) = 1.0;
    out.config.points(2 * i + 1, i) = -1.0;
    out.config.labels.push_back("+e" + std::to_string(i + 1));
    out.config.labels.push_back("-e" + std::to_string(i + 1));
    mu[2 * i] = 0.5;
    mu[2 * i + 1] = 0.5;
  }
  out.config.labels.push_back("z");
  mu[2 * n] = -static_cast<double>(n - 1);

  Eigen::MatrixXd d(2 * n + 1, 2 * n + 1);
  for (Index i = 0; i <= 2 * n; ++i)
    for (Index j = 0; j <= 2 * n; ++j)
      d(i, j) = (out.config.points.row(i) - out.config.points.row(j)).lpNorm<1>();
  out.metric = DistanceMatrix(std::move(d));
  out.measure = WeightVector(std::move(mu));
  return out;
}

DistanceMatrix gen_join(const JoinSpec& spec) {
  if (!(spec.cross > 0.0)) throw InvalidInput("join cross distance must be positive");
  const double widest = std::max(diameter(spec.first), diameter(spec.second));
  if (2.0 * spec.cross < widest * (1.0 - kMetricTol)) {
    std::ostringstream msg;
    msg << "join cross distance " << spec.cross << " is below half the block diameter "
        << widest << "; the triangle inequality would fail";
    throw InvalidInput(msg.str());
  }
  const Index a = spec.first.size();
  const Index b = spec.second.size();
  Eigen::MatrixXd d = Eigen::MatrixXd::Constant(a + b, a + b, spec.cross);
  d.topLeftCorner(a, a) = spec.first.matrix();
  d.bottomRightCorner(b, b) = spec.second.matrix();
  DistanceMatrix out(std::move(d));
  require_metric(out);
  return out;
}

DistanceMatrix gen_join_discrete_pair(Index m, double eps) {
  if (m < 3) throw InvalidInput("discrete block needs m >= 3");
  const double md = static_cast<double>(m);
  const double cross = (md - 1.0) / (2.0 * md) + 0.25 + eps;
  if (!(eps > 0.0) || eps > (md + 2.0) / (4.0 * md)) {
    std::ostringstream msg;
    msg << "eps = " << eps << " outside (0, (m+2)/(4m)] gives diameter "
        << std::max(1.0, cross) << " (cross distance " << cross << "), not 1";
    throw InvalidInput(msg.str());
  }
  return gen_join({gen_discrete(m), gen_discrete(2), cross});
}

DistanceMatrix gen_join_discrete_circle(Index m, double eps) {
  if (m < 3) throw InvalidInput("discrete block needs m >= 3");
  const double cross = 0.5 + eps;
  if (!(eps > 0.0) || eps > 0.5) {
    std::ostringstream msg;
    msg << "eps = " << eps << " outside (0, 1/2] gives diameter " << std::max(1.0, cross)
        << " (cross distance " << cross << "), not 1";
    throw InvalidInput(msg.str());
  }
  const double radius = 2.0 / (std::numbers::pi * static_cast<double>(m));
  return gen_join({gen_discrete(m), gen_circle(4, radius), cross});
}

namespace {

// One pass of obtuse-vertex repair; returns false when no angle was obtuse.
bool repair_pass(Eigen::MatrixXd& p, double slack) {
  bool touched = false;
  const Index k = p.rows();
  for (Index q = 0; q < k; ++q)
    for (Index a = 0; a < k; ++a) {
      if (a == q) continue;
      for (Index c = a + 1; c < k; ++c) {
        if (c == q) continue;
        const double f = (p.row(a) - p.row(q)).dot(p.row(c) - p.row(q));
        if (f >= -slack) continue;
        // ∂f/∂q = 2q − a − c; a Newton step to f = 0, slightly overshot.
        const Eigen::RowVectorXd grad = 2.0 * p.row(q) - p.row(a) - p.row(c);
        const double g2 = grad.squaredNorm();
        if (g2 == 0.0) continue;
        p.row(q) += (-f / g2) * 1.05 * grad;
        touched = true;
      }
    }
  return touched;
}

}  // namespace

PointConfig gen_random_nonobtuse(Index n, Index dim, std::uint64_t seed, int attempts) {
  if (n < 1 || dim < 1) throw InvalidInput("need at least one point and one dimension");
  if (dim < 63 && n > (Index{1} << dim)) {
    std::ostringstream msg;
    msg << n << " points cannot form a non-obtuse configuration in R^" << dim
        << " (at most 2^" << dim << " = " << (Index{1} << dim) << ")";
    throw InvalidInput(msg.str());
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  for (int attempt = 0; attempt < attempts; ++attempt) {
    PointConfig config;
    config.points.resize(n, dim);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < dim; ++j) config.points(i, j) = unit(rng);

    for (int pass = 0; pass < 200; ++pass) {
      const double diam2 = [&] {
        double best = 0.0;
        for (Index i = 0; i < n; ++i)
          for (Index j = i + 1; j < n; ++j)
            best = std::max(best, (config.points.row(i) - config.points.row(j)).squaredNorm());
        return best;
      }();
      if (!repair_pass(config.points, 0.1 * kAngleTol * diam2)) break;
    }

    // Reject near-coincident points; they make every downstream test fragile.
    double min2 = std::numeric_limits<double>::infinity();
    double max2 = 0.0;
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j) {
        const double d2 = (config.points.row(i) - config.points.row(j)).squaredNorm();
        min2 = std::min(min2, d2);
        max2 = std::max(max2, d2);
      }
    if (n > 1 && !(min2 > 1e-4 * max2)) continue;
    if (n > 1 && !std::isfinite(max2)) continue;
    try {
      // Accept with margin so the squared-distance space passes the default
      // metric check downstream.
      if (angle_classification(config, 0.1 * kAngleTol).kind != AngleClass::Kind::Obtuse)
        return config;
    } catch (const InvalidInput&) {
    }
  }
  throw BudgetExceeded("no non-obtuse configuration of " + std::to_string(n) + " points in R^" +
                       std::to_string(dim) + " after " + std::to_string(attempts) + " attempts");
}

}  // namespace qhm
