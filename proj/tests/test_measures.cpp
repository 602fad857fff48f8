#include <doctest.h>

#include <random>

#include "qhm/classify.hpp"
#include "qhm/embed.hpp"
#include "qhm/errors.hpp"
#include "qhm/generators.hpp"
#include "qhm/measures.hpp"
#include "support/corpus.hpp"
#include "test_helpers.hpp"

using namespace qhm;
using qhm::testing::matrix_of;

TEST_CASE("energy examples") {
  const DistanceMatrix two = matrix_of({{0, 1}, {1, 0}});
  CHECK(energy(two, WeightVector::point_mass(2, 0)) == 0.0);
  for (Index n = 2; n <= 6; ++n) {
    const StarSpace star = gen_star(n);
    CHECK(energy(star.metric, star.measure) == doctest::Approx(static_cast<double>(n)));
  }
  const WeightVector nu(Eigen::Vector4d(1, -1, 1, -1));
  CHECK(std::abs(energy(gen_circle(4, 1.0), nu)) < 1e-14);
}

TEST_CASE("energy_pair of point masses is the distance") {
  const DistanceMatrix d = gen_star(3).metric;
  for (Index x = 0; x < d.size(); ++x)
    for (Index y = 0; y < d.size(); ++y)
      CHECK(energy_pair(d, WeightVector::point_mass(d.size(), x),
                        WeightVector::point_mass(d.size(), y)) == d(x, y));
}

TEST_CASE("energy functions reject mismatched lengths") {
  const DistanceMatrix d = gen_discrete(3);
  CHECK_THROWS_AS(energy(d, WeightVector::uniform(4)), DimensionMismatch);
  CHECK_THROWS_AS(potential(d, WeightVector::uniform(2)), DimensionMismatch);
  CHECK_THROWS_AS(energy_pair(d, WeightVector::uniform(3), WeightVector::uniform(2)),
                  DimensionMismatch);
  CHECK_THROWS_AS(WeightVector::uniform(3) - WeightVector::uniform(2), DimensionMismatch);
}

TEST_CASE("potential examples") {
  for (Index n = 2; n <= 6; ++n) {
    const StarSpace star = gen_star(n);
    const Eigen::VectorXd p = potential(star.metric, star.measure);
    CHECK((p.array() - static_cast<double>(n)).abs().maxCoeff() < 1e-13);
  }
  for (double rho : {0.3, 1.0, 2.0}) {
    const Eigen::VectorXd p = potential(gen_circle(4, rho), WeightVector(Eigen::Vector4d(1, -1, 1, -1)));
    CHECK(p.cwiseAbs().maxCoeff() < 1e-14);
  }
  for (Index n = 2; n <= 7; ++n) {
    const Eigen::VectorXd p = potential(gen_discrete(n), WeightVector::uniform(n));
    const double expected = static_cast<double>(n - 1) / static_cast<double>(n);
    CHECK((p.array() - expected).abs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("energy equals the potential integrated against the measure") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  const auto corpus = qhm::testing::make_corpus(40, 11);
  for (const auto& item : corpus) {
    Eigen::VectorXd a(item.metric.size());
    for (Index i = 0; i < a.size(); ++i) a[i] = normal(rng);
    const WeightVector mu(a);
    const double direct = energy(item.metric, mu);
    const double via_potential = a.dot(potential(item.metric, mu));
    CHECK(direct == doctest::Approx(via_potential).epsilon(1e-12));
  }
}

TEST_CASE("invariant_measure examples") {
  const auto two = invariant_measure(matrix_of({{0, 1}, {1, 0}}));
  REQUIRE(two);
  CHECK(two->measure.weights().isApprox(Eigen::Vector2d(0.5, 0.5)));
  CHECK(two->value == doctest::Approx(0.5));

  for (Index n = 2; n <= 6; ++n) {
    const auto inv = invariant_measure(gen_discrete(n));
    REQUIRE(inv);
    CHECK(inv->measure.weights().isApprox(WeightVector::uniform(n).weights(), 1e-12));
    CHECK(inv->value == doctest::Approx(static_cast<double>(n - 1) / static_cast<double>(n)));
  }

  const auto join = invariant_measure(gen_join_discrete_pair(3, 0.1));
  REQUIRE(join);
  const double expected = (1.0 / 3.2) * (1.0 / 9.0) + 1.0 / 3.0 + 0.25 + 0.05;
  CHECK(join->value == doctest::Approx(expected).epsilon(1e-12));
  const Eigen::VectorXd p = potential(gen_join_discrete_pair(3, 0.1), join->measure);
  CHECK((p.array() - expected).abs().maxCoeff() < 1e-12);
}

TEST_CASE("m_value examples") {
  CHECK(m_value(matrix_of({{0}})).value == 0.0);
  const MValue d4 = m_value(gen_discrete(4));
  CHECK(d4.status == MStatus::Finite);
  CHECK(d4.value == doctest::Approx(0.75).epsilon(1e-12));
  for (Index n = 2; n <= 6; ++n) {
    const MValue m = m_value(gen_star(n).metric);
    CHECK(m.status == MStatus::Finite);
    CHECK(m.value == doctest::Approx(static_cast<double>(n)).epsilon(1e-12));
  }
  const BoxCorners square = gen_box_corners({0.5, 0.5});
  const MValue sq = m_value(square.metric);
  CHECK(sq.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sq.value / diameter(square.metric) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("m_value statuses") {
  // A subset of the line: M = D/2.
  const DistanceMatrix line = matrix_of({{0, 1, 3}, {1, 0, 2}, {3, 2, 0}});
  CHECK(m_value(line).status == MStatus::Finite);
  CHECK(m_value(line).value == doctest::Approx(1.5).epsilon(1e-12));

  // Graph metric of K_{2,3}: the form is positive on (1,1,-2/3,-2/3,-2/3).
  const DistanceMatrix k23 = matrix_of({{0, 2, 1, 1, 1},
                                        {2, 0, 1, 1, 1},
                                        {1, 1, 0, 2, 2},
                                        {1, 1, 2, 0, 2},
                                        {1, 1, 2, 2, 0}});
  CHECK(m_value(k23).status == MStatus::NotQuasihypermetric);

  const MValue circle = m_value(gen_circle(4, 1.0));
  CHECK(circle.status == MStatus::Finite);
  CHECK(circle.value == doctest::Approx(M_PI / 2).epsilon(1e-12));
}

TEST_CASE("M is infinite exactly for configurations off every sphere in their hull") {
  int infinite = 0;
  for (const auto& item : qhm::testing::make_corpus(200, 5)) {
    const MValue m = m_value(item.metric);
    REQUIRE(m.status != MStatus::NotQuasihypermetric);
    if (m.status == MStatus::Infinite) ++infinite;
    CHECK(circumsphere(item.config).has_value() == (m.status == MStatus::Finite));
  }
  CHECK(infinite > 0);
}

TEST_CASE("invariant measure is unique on strict spaces") {
  for (const auto& item : qhm::testing::make_corpus(100, 21)) {
    if (!is_strictly_quasihypermetric(item.metric).holds) continue;
    CHECK(rank_distance_matrix(item.metric) == item.metric.size());
    const MValue m = m_value(item.metric);
    REQUIRE(m.status == MStatus::Finite);
    const auto other = invariant_measure(item.metric);
    REQUIRE(other);
    CHECK((other->measure.weights() - m.invariant.weights()).cwiseAbs().maxCoeff() < 1e-7);
  }
}

TEST_CASE("a mass-zero measure on Y with constant potential on Y has constant potential on X") {
  int checked = 0;
  for (const auto& item : qhm::testing::make_corpus(150, 33)) {
    const Index n = item.metric.size();
    if (n < 4) continue;
    // Every proper subset that is not strict carries such a measure: the
    // null direction of its form.
    for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
      std::vector<Index> y;
      for (Index i = 0; i < n; ++i)
        if (mask >> i & 1u) y.push_back(i);
      if (y.size() < 3) continue;
      const CenteredSpectrum s = centered_spectrum(item.metric.restricted(y));
      if (s.values[0] < -1e-9 * s.scale) continue;
      Eigen::VectorXd nu = Eigen::VectorXd::Zero(n);
      for (std::size_t a = 0; a < y.size(); ++a) nu[y[a]] = s.directions(static_cast<Index>(a), 0);
      const Eigen::VectorXd p = item.metric.matrix() * nu;
      CHECK(p.maxCoeff() - p.minCoeff() < 1e-8 * s.scale);
      ++checked;
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("m_value_oracle examples") {
  CHECK(m_value_oracle(gen_discrete(3)) == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
  CHECK(m_value_oracle(gen_star(2).metric) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("oracle never exceeds m_value") {
  for (const auto& item : qhm::testing::make_corpus(60, 77)) {
    const MValue m = m_value(item.metric);
    if (m.status != MStatus::Finite) continue;
    OracleOptions opts;
    opts.restarts = 4;
    CHECK(m_value_oracle(item.metric, opts) <= m.value * (1 + 1e-9));
  }
}
