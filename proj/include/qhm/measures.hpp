#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>

#include "qhm/metric.hpp"

namespace qhm {

/// Relative eigenvalue threshold separating zero from nonzero spectrum.
inline constexpr double kEigTol = 1e-8;
/// Relative residual accepted for the linear system D·α = 1.
inline constexpr double kResidualTol = 1e-8;

/// Signed measure μ = Σ αᵢ δ_{xᵢ} on a finite space.
class WeightVector {
 public:
  WeightVector() = default;
  explicit WeightVector(Eigen::VectorXd weights);

  static WeightVector point_mass(Index n, Index at);
  static WeightVector uniform(Index n);

  Index size() const { return w_.size(); }
  double operator[](Index i) const { return w_[i]; }
  const Eigen::VectorXd& weights() const { return w_; }
  double mass() const { return mass_; }

  WeightVector operator-(const WeightVector& other) const;
  WeightVector operator*(double factor) const;

 private:
  Eigen::VectorXd w_;
  double mass_ = 0.0;
};

/// I(μ, ν) = Σᵢⱼ αᵢ βⱼ d(xᵢ, xⱼ).
double energy_pair(const DistanceMatrix& d, const WeightVector& mu, const WeightVector& nu);
/// I(μ) = I(μ, μ).
double energy(const DistanceMatrix& d, const WeightVector& mu);
/// d_μ sampled at every point, i.e. D·α.
Eigen::VectorXd potential(const DistanceMatrix& d, const WeightVector& mu);

struct InvariantMeasure {
  WeightVector measure;  ///< mass 1
  double value;          ///< the constant c with d_μ ≡ c
};

/// Mass-one measure with constant potential, if one exists.
///
/// Solves D·α = 1 by minimum-norm least squares. When the solution has
/// nonzero mass, α/Σα is d-invariant with value 1/Σα. Returns nullopt when
/// the system is inconsistent or its solutions all have zero mass (then no
/// mass-one measure has constant potential). For n = 1 returns (δ, 0).
std::optional<InvariantMeasure> invariant_measure(const DistanceMatrix& d,
                                                  double tol = kEigTol);

enum class MStatus { Finite, Infinite, NotQuasihypermetric };

struct MValue {
  MStatus status = MStatus::NotQuasihypermetric;
  double value = 0.0;      ///< valid when Finite
  WeightVector invariant;  ///< valid when Finite; mass 1, maximal measure
};

/// M(X) = sup { I(μ) : μ(X) = 1 }.
///
/// For quasihypermetric X a measure is maximal exactly when it is
/// d-invariant, and then M(X) is its value. The maximum is taken in closed
/// form over the eigenbasis of the form on mass-zero measures; M(X) = ∞
/// when some null direction ν of that form has d_ν ≠ 0 (then d_ν is a
/// nonzero constant and ν/d_ν solves D·α = 1 with zero mass).
MValue m_value(const DistanceMatrix& d, double tol = kEigTol);

struct OracleOptions {
  int restarts = 32;
  int max_iterations = 10000;
  double gradient_tol = 1e-10;
  std::uint64_t seed = 0x5eed;
};

/// Independent lower bound on M(X): projected gradient ascent of αᵀDα over
/// {Σα = 1}, with random restarts. Restarts are reduced by max with ties
/// going to the lowest restart index.
double m_value_oracle(const DistanceMatrix& d, const OracleOptions& options = {});

}  // namespace qhm
