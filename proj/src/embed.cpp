#include "qhm/embed.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qhm/linalg.hpp"

namespace qhm {

std::string PointConfig::label(Index i) const {
  if (static_cast<std::size_t>(i) < labels.size()) return labels[static_cast<std::size_t>(i)];
  return "p" + std::to_string(i);
}

PointConfig schoenberg_embed(const DistanceMatrix& d, double tol) {
  require_metric(d);
  const Index n = d.size();
  const Eigen::MatrixXd centering =
      Eigen::MatrixXd::Identity(n, n) -
      Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  const Eigen::MatrixXd gram = -0.5 * centering * d.matrix() * centering;
  const linalg::SymmetricEigen eig = linalg::jacobi_eigen(gram);

  const double scale = linalg::spectral_scale(eig.values);
  const double floor = tol * scale;
  if (n > 1 && eig.values[n - 1] < -floor) {
    std::ostringstream msg;
    msg << "Gram matrix has eigenvalue " << eig.values[n - 1]
        << "; the space is not quasihypermetric";
    throw NotQuasihypermetricError(msg.str(), WeightVector(Eigen::VectorXd(eig.vectors.col(n - 1))));
  }

  Index dim = 0;
  while (dim < n && eig.values[dim] > floor) ++dim;

  PointConfig out;
  out.points.resize(n, dim);
  for (Index k = 0; k < dim; ++k) {
    Eigen::VectorXd axis = eig.vectors.col(k) * std::sqrt(eig.values[k]);
    const double big = axis.cwiseAbs().maxCoeff();
    for (Index i = 0; i < n; ++i) {
      if (std::abs(axis[i]) > 1e-9 * big) {
        if (axis[i] < 0) axis = -axis;
        break;
      }
    }
    out.points.col(k) = axis;
  }
  return out;
}

std::string to_string(AngleClass::Kind kind) {
  switch (kind) {
    case AngleClass::Kind::Acute: return "acute";
    case AngleClass::Kind::NonObtuse: return "non-obtuse";
    case AngleClass::Kind::Obtuse: return "obtuse";
  }
  return "unknown";
}

namespace {

double squared_diameter(const Eigen::MatrixXd& p) {
  double best = 0.0;
  for (Index i = 0; i < p.rows(); ++i)
    for (Index j = i + 1; j < p.rows(); ++j)
      best = std::max(best, (p.row(i) - p.row(j)).squaredNorm());
  return best;
}

}  // namespace

AngleClass angle_classification(const PointConfig& config, double tol) {
  const Eigen::MatrixXd& p = config.points;
  const Index k = p.rows();
  const double diam2 = squared_diameter(p);
  for (Index i = 0; i < k; ++i)
    for (Index j = i + 1; j < k; ++j)
      if ((p.row(i) - p.row(j)).squaredNorm() <= tol * diam2 || diam2 == 0.0)
        throw InvalidInput("coincident points " + config.label(i) + " and " + config.label(j));

  AngleClass out;
  if (k < 3) return out;
  const double slack = tol * diam2;
  for (Index a = 0; a < k; ++a) {
    for (Index q = 0; q < k; ++q) {
      if (q == a) continue;
      for (Index c = a + 1; c < k; ++c) {
        if (c == q) continue;
        const double dot = (p.row(a) - p.row(q)).dot(p.row(c) - p.row(q));
        if (dot < -slack) {
          out.kind = AngleClass::Kind::Obtuse;
          out.witness = std::array<Index, 3>{a, q, c};
          return out;
        }
        if (dot <= slack) out.kind = AngleClass::Kind::NonObtuse;
      }
    }
  }
  return out;
}

DistanceMatrix config_to_metric(const PointConfig& config, double tol) {
  const AngleClass angles = angle_classification(config, tol);
  if (angles.kind == AngleClass::Kind::Obtuse) {
    const auto& w = *angles.witness;
    throw ObtuseConfigurationError("obtuse angle at " + config.label(w[1]) + " between " +
                                       config.label(w[0]) + " and " + config.label(w[2]),
                                   w);
  }
  const Index k = config.count();
  Eigen::MatrixXd d(k, k);
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j) d(i, j) = (config.points.row(i) - config.points.row(j)).squaredNorm();
  DistanceMatrix out(std::move(d));
  // A dot product of -tol·D at a vertex is a triangle excess of 2·tol·D.
  require_metric(out, std::max(kMetricTol, 2.0 * tol));
  return out;
}

std::optional<SphereFit> circumsphere(const PointConfig& config, double tol) {
  const Eigen::MatrixXd& p = config.points;
  const Index k = p.rows();
  if (k < 2) throw InvalidInput("circumsphere needs at least two points");

  // 2(pᵢ − p₀)·x = ‖pᵢ − p₀‖² for x = c − p₀; the minimum-norm solution lies
  // in the span of the differences, i.e. the center is in the affine hull.
  const Eigen::MatrixXd diff = p.bottomRows(k - 1).rowwise() - p.row(0);
  const Eigen::VectorXd rhs = diff.rowwise().squaredNorm();
  const Eigen::VectorXd x = (2.0 * diff).completeOrthogonalDecomposition().solve(rhs);

  SphereFit fit;
  fit.center = p.row(0).transpose() + x;
  Eigen::VectorXd dist(k);
  for (Index i = 0; i < k; ++i) dist[i] = (p.row(i).transpose() - fit.center).norm();
  fit.radius = dist.mean();
  fit.max_residual = (dist.array() - fit.radius).abs().maxCoeff();
  if (!(fit.radius > 0.0) || fit.max_residual > tol * fit.radius) return std::nullopt;
  return fit;
}

std::optional<std::pair<Index, Index>> antipodal_pair(const PointConfig& config,
                                                      const SphereFit& sphere, double tol) {
  const Eigen::MatrixXd& p = config.points;
  for (Index i = 0; i < p.rows(); ++i)
    for (Index j = i + 1; j < p.rows(); ++j)
      if ((p.row(i).transpose() + p.row(j).transpose() - 2.0 * sphere.center).norm() <=
          tol * sphere.radius)
        return std::pair{i, j};
  return std::nullopt;
}

int affine_dimension(const PointConfig& config, double tol) {
  return linalg::affine_rank(config.points, tol);
}

}  // namespace qhm
