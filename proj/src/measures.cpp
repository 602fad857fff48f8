#include "qhm/measures.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "qhm/classify.hpp"
#include "qhm/errors.hpp"
#include "qhm/linalg.hpp"

namespace qhm {

WeightVector::WeightVector(Eigen::VectorXd weights)
    : w_(std::move(weights)), mass_(w_.sum()) {}

WeightVector WeightVector::point_mass(Index n, Index at) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  w[at] = 1.0;
  return WeightVector(std::move(w));
}

WeightVector WeightVector::uniform(Index n) {
  return WeightVector(Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)));
}

WeightVector WeightVector::operator-(const WeightVector& other) const {
  if (size() != other.size()) throw DimensionMismatch("weight vectors differ in length");
  return WeightVector(w_ - other.w_);
}

WeightVector WeightVector::operator*(double factor) const {
  return WeightVector(w_ * factor);
}

namespace {

void check_length(const DistanceMatrix& d, const WeightVector& mu) {
  if (mu.size() != d.size()) {
    std::ostringstream msg;
    msg << "weight vector has length " << mu.size() << ", space has " << d.size()
        << " points";
    throw DimensionMismatch(msg.str());
  }
}

}  // namespace

double energy_pair(const DistanceMatrix& d, const WeightVector& mu, const WeightVector& nu) {
  check_length(d, mu);
  check_length(d, nu);
  return mu.weights().dot(d.matrix() * nu.weights());
}

double energy(const DistanceMatrix& d, const WeightVector& mu) {
  return energy_pair(d, mu, mu);
}

Eigen::VectorXd potential(const DistanceMatrix& d, const WeightVector& mu) {
  check_length(d, mu);
  return d.matrix() * mu.weights();
}

namespace {

struct OnesSolve {
  Eigen::VectorXd alpha;
  bool consistent;
};

OnesSolve solve_for_ones(const DistanceMatrix& d, double tol) {
  const Index n = d.size();
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  const linalg::SymmetricEigen eig = linalg::jacobi_eigen(d.matrix());
  Eigen::VectorXd alpha = linalg::pinv_solve(eig, ones, tol);
  const double residual = (d.matrix() * alpha - ones).norm() / ones.norm();
  return {std::move(alpha), residual <= kResidualTol};
}

// Zero mass, relative to the size of the solution.
bool massless(const Eigen::VectorXd& alpha) {
  return std::abs(alpha.sum()) <= 1e-9 * std::max(alpha.lpNorm<1>(), 1e-300);
}

}  // namespace

std::optional<InvariantMeasure> invariant_measure(const DistanceMatrix& d, double tol) {
  if (d.size() == 1) return InvariantMeasure{WeightVector::point_mass(1, 0), 0.0};
  OnesSolve solve = solve_for_ones(d, tol);
  if (!solve.consistent || massless(solve.alpha)) return std::nullopt;
  const double mass = solve.alpha.sum();
  return InvariantMeasure{WeightVector(solve.alpha / mass), 1.0 / mass};
}

MValue m_value(const DistanceMatrix& d, double tol) {
  require_metric(d);
  MValue out;
  if (d.size() == 1) {
    out.status = MStatus::Finite;
    out.value = 0.0;
    out.invariant = WeightVector::point_mass(1, 0);
    return out;
  }
  const CenteredSpectrum spec = centered_spectrum(d);
  const double cut = tol * spec.scale;
  if (spec.values[0] > cut) {
    out.status = MStatus::NotQuasihypermetric;
    return out;
  }

  // A mass-1 measure is e + Vβ with e uniform and Vβ of mass zero, so
  // I = h + 2gᵀβ + βᵀΛβ with h = I(e), g = VᵀDe and Λ ≤ 0 diagonal. A
  // direction with λ = 0 and g ≠ 0 makes I unbounded; otherwise the
  // maximum is h + Σ g²/|λ| at β = −g/λ.
  const Index n = d.size();
  const Eigen::VectorXd e = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  const Eigen::VectorXd de = d.matrix() * e;
  const Eigen::VectorXd g = spec.directions.transpose() * de;
  const double root_n = std::sqrt(static_cast<double>(n));
  double value = e.dot(de);
  Eigen::VectorXd alpha = e;
  for (Index k = 0; k < spec.values.size(); ++k) {
    const double lambda = spec.values[k];
    if (lambda >= -cut) {
      if (std::abs(g[k]) * root_n > cut) {
        out.status = MStatus::Infinite;
        return out;
      }
      continue;
    }
    value += g[k] * g[k] / -lambda;
    alpha -= (g[k] / lambda) * spec.directions.col(k);
  }
  if (!(value > 0.0))
    throw NumericalFault("invariant value is not positive on a space with more than one point");
  out.status = MStatus::Finite;
  out.value = value;
  out.invariant = WeightVector(std::move(alpha));
  return out;
}

double m_value_oracle(const DistanceMatrix& d, const OracleOptions& options) {
  const Index n = d.size();
  if (n == 1) return 0.0;
  const Eigen::MatrixXd& D = d.matrix();
  // Hessian of αᵀDα is 2D; its spectral bound fixes the step.
  const double lipschitz =
      2.0 * linalg::spectral_scale(linalg::jacobi_eigen(D).values);
  const double step = 1.0 / lipschitz;
  const double inv_n = 1.0 / static_cast<double>(n);

  auto project = [&](Eigen::VectorXd g) {
    g.array() -= g.sum() * inv_n;
    return g;
  };

  double best = -std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  for (int restart = 0; restart < options.restarts; ++restart) {
    Eigen::VectorXd alpha(n);
    for (Index i = 0; i < n; ++i) alpha[i] = normal(rng);
    alpha.array() += (1.0 - alpha.sum()) * inv_n;

    // Nesterov-accelerated projected ascent.
    Eigen::VectorXd previous = alpha;
    double momentum = 1.0;
    for (int it = 0; it < options.max_iterations; ++it) {
      const double next_momentum = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
      const Eigen::VectorXd probe =
          alpha + ((momentum - 1.0) / next_momentum) * (alpha - previous);
      const Eigen::VectorXd grad = project(2.0 * (D * probe));
      previous = alpha;
      alpha = probe + step * grad;
      momentum = next_momentum;
      // Restart momentum when the objective decreases.
      if (alpha.dot(D * alpha) < previous.dot(D * previous)) {
        momentum = 1.0;
        alpha = previous;
        const Eigen::VectorXd plain = project(2.0 * (D * alpha));
        alpha += step * plain;
      }
      if (project(2.0 * (D * alpha)).norm() <= options.gradient_tol) break;
    }
    const double value = alpha.dot(D * alpha);
    if (value > best) best = value;
  }
  return best;
}

}  // namespace qhm
