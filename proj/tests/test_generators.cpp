#include <doctest.h>

#include <cmath>

#include "qhm/classify.hpp"
#include "qhm/embed.hpp"
#include "qhm/errors.hpp"
#include "qhm/generators.hpp"
#include "qhm/measures.hpp"
#include "qhm/subspace.hpp"

using namespace qhm;

namespace {

double join_pair_formula(double m, double eps) {
  const double t = (m - 2) / m;
  return t * t / (32 * eps) + (m - 1) / (2 * m) + 0.25 + eps / 2;
}

double join_circle_formula(double m, double eps) {
  const double t = (m - 2) / m;
  return t * t / (8 * eps) + 0.5 + eps / 2;
}

}  // namespace

TEST_CASE("gen_discrete values") {
  CHECK(m_value(gen_discrete(2)).value == doctest::Approx(0.5));
  CHECK(m_value(gen_discrete(3)).value == doctest::Approx(2.0 / 3.0));
  CHECK(m_value(gen_discrete(4)).value == doctest::Approx(0.75));
  CHECK_THROWS_AS(gen_discrete(0), InvalidInput);
}

TEST_CASE("gen_circle examples") {
  const DistanceMatrix c = gen_circle(4, 2.0 / (M_PI * 3));
  CHECK(c(0, 1) == doctest::Approx(1.0 / 3));
  CHECK(c(0, 2) == doctest::Approx(2.0 / 3));
  CHECK(c(0, 3) == doctest::Approx(1.0 / 3));
  CHECK_FALSE(is_strictly_quasihypermetric(gen_circle(4, 1.0)).holds);
  CHECK(m_value(gen_circle(4, 1.0)).value == doctest::Approx(M_PI / 2));
  CHECK_THROWS_AS(gen_circle(3, -1.0), InvalidInput);
}

TEST_CASE("gen_box_corners") {
  const BoxCorners sq = gen_box_corners({0.5, 0.5});
  CHECK(sq.metric.size() == 4);
  CHECK(m_value(sq.metric).value / diameter(sq.metric) == doctest::Approx(0.5));
  for (int m = 1; m <= 4; ++m) {
    std::vector<double> a;
    for (int j = 0; j < m; ++j) a.push_back(0.3 + 0.4 * j);
    const BoxCorners box = gen_box_corners(a);
    CHECK(box.canonical.size() == static_cast<std::size_t>(m + 1));
    const DistanceMatrix y = box.metric.restricted(box.canonical);
    CHECK(is_strictly_quasihypermetric(y).holds);
    CHECK(maximal_strict_subspace(box.metric).cardinality == m + 1);
  }
  CHECK(gen_box_corners({1, 1}, std::vector<Index>{0, 3}).metric.size() == 2);
  CHECK_THROWS_AS(gen_box_corners({1, 1}, std::vector<Index>{0, 4}), InvalidInput);
  CHECK_THROWS_AS(gen_box_corners({1, 0}), InvalidInput);
}

TEST_CASE("gen_star") {
  const StarSpace s2 = gen_star(2);
  CHECK(s2.metric.size() == 5);
  CHECK(m_value(s2.metric).value == doctest::Approx(2.0));
  CHECK(diameter(s2.metric) == 2.0);
  for (Index n = 2; n <= 6; ++n) {
    const StarSpace s = gen_star(n);
    CHECK(s.metric.size() == 2 * n + 1);
    CHECK(s.measure.mass() == doctest::Approx(1.0));
    const Eigen::VectorXd p = potential(s.metric, s.measure);
    CHECK((p.array() - static_cast<double>(n)).abs().maxCoeff() < 1e-12);
  }
  CHECK_THROWS_AS(gen_star(1), InvalidInput);
}

TEST_CASE("join formulas") {
  for (int m = 3; m <= 6; ++m) {
    for (double eps : {0.1, 0.01}) {
      const DistanceMatrix z1 = gen_join_discrete_pair(m, eps);
      CHECK(diameter(z1) == doctest::Approx(1.0));
      CHECK(is_strictly_quasihypermetric(z1).holds);
      CHECK(m_value(z1).value == doctest::Approx(join_pair_formula(m, eps)).epsilon(1e-10));

      const DistanceMatrix z2 = gen_join_discrete_circle(m, eps);
      CHECK(diameter(z2) == doctest::Approx(1.0));
      const Classification c = classify(z2);
      CHECK(c.quasihypermetric);
      CHECK_FALSE(c.strictly_quasihypermetric);
      CHECK(m_value(z2).value == doctest::Approx(join_circle_formula(m, eps)).epsilon(1e-10));
      std::vector<Index> drop_one_circle_point;
      for (Index i = 0; i < m + 3; ++i) drop_one_circle_point.push_back(i);
      CHECK(is_strictly_quasihypermetric(z2.restricted(drop_one_circle_point)).holds);
    }
  }
}

TEST_CASE("join value grows without bound at diameter one") {
  double previous = 0.0;
  for (double eps : {0.1, 0.01, 0.001}) {
    const DistanceMatrix z = gen_join_discrete_pair(3, eps);
    CHECK(diameter(z) == doctest::Approx(1.0));
    const double m = m_value(z).value;
    CHECK(m > previous);
    previous = m;
  }
  CHECK(previous > 4.0);
}

TEST_CASE("join parameter range is enforced") {
  CHECK_NOTHROW(gen_join_discrete_pair(3, 5.0 / 12.0));
  CHECK_THROWS_AS(gen_join_discrete_pair(3, 0.5), InvalidInput);
  CHECK_THROWS_AS(gen_join_discrete_pair(3, 0.0), InvalidInput);
  CHECK_THROWS_AS(gen_join_discrete_circle(3, 0.6), InvalidInput);
  try {
    gen_join_discrete_pair(4, 1.0);
    FAIL("expected InvalidInput");
  } catch (const InvalidInput& e) {
    CHECK(std::string(e.what()).find("diameter") != std::string::npos);
  }
}

TEST_CASE("gen_join validates its blocks") {
  JoinSpec spec{gen_discrete(2), gen_discrete(2), 0.6};
  CHECK(gen_join(spec).size() == 4);
  spec.cross = 0.2;  // 1 > 0.2 + 0.2 breaks the triangle inequality
  CHECK_THROWS_AS(gen_join(spec), InvalidInput);
}

TEST_CASE("gen_random_nonobtuse") {
  const PointConfig rect = gen_random_nonobtuse(4, 2, 1, 2000);
  CHECK(angle_classification(rect).kind != AngleClass::Kind::Obtuse);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const PointConfig tri = gen_random_nonobtuse(3, 2, seed);
    CHECK(angle_classification(tri).kind != AngleClass::Kind::Obtuse);
  }
  CHECK_THROWS_AS(gen_random_nonobtuse(9, 3, 1), InvalidInput);
  CHECK(gen_random_nonobtuse(6, 4, 5).points == gen_random_nonobtuse(6, 4, 5).points);
}

TEST_CASE("generator outputs are metrics") {
  std::vector<DistanceMatrix> all{gen_discrete(1), gen_discrete(6), gen_circle(7, 0.3),
                                  gen_star(4).metric, gen_box_corners({1, 2, 3}).metric,
                                  gen_join_discrete_pair(5, 0.2), gen_join_discrete_circle(4, 0.3)};
  for (std::uint64_t s = 0; s < 20; ++s) all.push_back(config_to_metric(gen_random_nonobtuse(5, 3, s)));
  for (const DistanceMatrix& d : all) CHECK(validate_metric(d).ok());
}
