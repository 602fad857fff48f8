#include "qhm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace qhm::linalg {

SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& a, int max_sweeps) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd m = a.selfadjointView<Eigen::Upper>();
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += m(p, q) * m(p, q);
    const double diag = m.diagonal().squaredNorm();
    if (off <= 1e-32 * diag || off == 0.0) break;

    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = m(p, q);
        if (apq == 0.0) continue;
        const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (Eigen::Index k = 0; k < n; ++k) {
          const double mkp = m(k, p);
          const double mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double mpk = m(p, k);
          const double mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
        m(p, q) = 0.0;
        m(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return m(i, i) > m(j, j); });

  SymmetricEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values[k] = m(order[k], order[k]);
    out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

double spectral_scale(const Eigen::VectorXd& eigenvalues) {
  return eigenvalues.size() == 0 ? 0.0 : eigenvalues.cwiseAbs().maxCoeff();
}

int numerical_rank(const Eigen::VectorXd& eigenvalues, double rel_tol) {
  const double cutoff = rel_tol * spectral_scale(eigenvalues);
  int rank = 0;
  for (double lambda : eigenvalues)
    if (std::abs(lambda) > cutoff) ++rank;
  return rank;
}

Eigen::VectorXd pinv_solve(const SymmetricEigen& eig, const Eigen::VectorXd& b,
                           double rel_tol) {
  const double cutoff = rel_tol * spectral_scale(eig.values);
  Eigen::VectorXd coeffs = eig.vectors.transpose() * b;
  for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
    const double lambda = eig.values[k];
    coeffs[k] = std::abs(lambda) > cutoff ? coeffs[k] / lambda : 0.0;
  }
  return eig.vectors * coeffs;
}

Eigen::MatrixXd mass_zero_basis(Eigen::Index n) {
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(n, std::max<Eigen::Index>(n - 1, 0));
  for (Eigen::Index k = 1; k < n; ++k) {
    const double norm = std::sqrt(static_cast<double>(k * (k + 1)));
    for (Eigen::Index i = 0; i < k; ++i) basis(i, k - 1) = 1.0 / norm;
    basis(k, k - 1) = -static_cast<double>(k) / norm;
  }
  return basis;
}

int affine_rank(const Eigen::MatrixXd& points, double rel_tol) {
  if (points.rows() <= 1) return 0;
  const Eigen::MatrixXd centered = points.rowwise() - points.row(0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered.bottomRows(points.rows() - 1));
  const Eigen::VectorXd& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  int rank = 0;
  for (double sigma : s)
    if (sigma > rel_tol * s[0]) ++rank;
  return rank;
}

}  // namespace qhm::linalg
