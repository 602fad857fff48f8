#include "qhm/metric.hpp"

#include <cmath>
#include <sstream>

#include "qhm/errors.hpp"

namespace qhm {

DistanceMatrix::DistanceMatrix(Eigen::MatrixXd d) : d_(std::move(d)) {
  if (d_.rows() != d_.cols())
    throw DimensionMismatch("distance matrix must be square");
  if (d_.rows() == 0) throw InvalidInput("distance matrix must have at least one point");
}

DistanceMatrix DistanceMatrix::restricted(std::span<const Index> indices) const {
  const auto k = static_cast<Index>(indices.size());
  Eigen::MatrixXd sub(k, k);
  for (Index a = 0; a < k; ++a) {
    for (Index b = 0; b < k; ++b) {
      const Index i = indices[static_cast<std::size_t>(a)];
      const Index j = indices[static_cast<std::size_t>(b)];
      if (i < 0 || i >= size() || j < 0 || j >= size())
        throw InvalidInput("subspace index out of range");
      sub(a, b) = d_(i, j);
    }
  }
  return DistanceMatrix(std::move(sub));
}

DistanceMatrix DistanceMatrix::scaled(double factor) const {
  return DistanceMatrix(d_ * factor);
}

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::Diagonal: return "diagonal";
    case ViolationKind::Symmetry: return "symmetry";
    case ViolationKind::Positivity: return "positivity";
    case ViolationKind::Triangle: return "triangle";
    case ViolationKind::NonFinite: return "non-finite";
  }
  return "unknown";
}

ValidationReport validate_metric(const DistanceMatrix& dm, double tol) {
  const Eigen::MatrixXd& d = dm.matrix();
  const Index n = dm.size();
  ValidationReport report;

  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (!std::isfinite(d(i, j)))
        report.violations.push_back({ViolationKind::NonFinite, {i, j, j}, 0.0});
  if (!report.ok()) return report;

  const double scale = std::max(d.cwiseAbs().maxCoeff(), 1e-300);
  const double slack = tol * scale;

  for (Index i = 0; i < n; ++i)
    if (std::abs(d(i, i)) > slack)
      report.violations.push_back({ViolationKind::Diagonal, {i, i, i}, std::abs(d(i, i))});

  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double asym = std::abs(d(i, j) - d(j, i));
      if (asym > slack) report.violations.push_back({ViolationKind::Symmetry, {i, j, j}, asym});
      const double smaller = std::min(d(i, j), d(j, i));
      if (smaller <= slack)
        report.violations.push_back({ViolationKind::Positivity, {i, j, j}, slack - smaller});
    }
  }

  for (Index i = 0; i < n; ++i)
    for (Index k = i + 1; k < n; ++k)
      for (Index j = 0; j < n; ++j) {
        if (j == i || j == k) continue;
        const double excess = d(i, k) - d(i, j) - d(j, k);
        if (excess > slack)
          report.violations.push_back({ViolationKind::Triangle, {i, j, k}, excess});
      }
  return report;
}

void require_metric(const DistanceMatrix& d, double tol) {
  const ValidationReport report = validate_metric(d, tol);
  if (report.ok()) return;
  const Violation& v = report.violations.front();
  std::ostringstream msg;
  msg << "not a metric: " << to_string(v.kind) << " violation at (" << v.where[0] << ","
      << v.where[1] << "," << v.where[2] << "), magnitude " << v.magnitude;
  if (report.violations.size() > 1)
    msg << " (+" << report.violations.size() - 1 << " more)";
  throw InvalidInput(msg.str());
}

double diameter(const DistanceMatrix& d) { return d.matrix().maxCoeff(); }

DistanceMatrix normalize_diameter(const DistanceMatrix& d) {
  if (d.size() < 2) throw InvalidInput("cannot normalize a one-point space");
  const double diam = diameter(d);
  if (!(diam > 0.0)) throw InvalidInput("cannot normalize a space of zero diameter");
  return d.scaled(1.0 / diam);
}

}  // namespace qhm
