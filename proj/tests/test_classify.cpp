#include <doctest.h>

#include <random>

#include "qhm/classify.hpp"
#include "qhm/errors.hpp"
#include "qhm/generators.hpp"
#include "qhm/l1geom.hpp"
#include "qhm/measures.hpp"
#include "support/corpus.hpp"
#include "test_helpers.hpp"

using namespace qhm;
using qhm::testing::matrix_of;

namespace {

const DistanceMatrix kK23 = matrix_of({{0, 2, 1, 1, 1},
                                       {2, 0, 1, 1, 1},
                                       {1, 1, 0, 2, 2},
                                       {1, 1, 2, 0, 2},
                                       {1, 1, 2, 2, 0}});

PointConfig random_l1(std::mt19937_64& rng, Index k, Index dim) {
  std::uniform_int_distribution<int> coord(-4, 4);
  for (;;) {
    PointConfig p;
    p.norm = Norm::L1;
    p.points.resize(k, dim);
    for (Index i = 0; i < k; ++i)
      for (Index j = 0; j < dim; ++j) p.points(i, j) = coord(rng);
    bool distinct = true;
    for (Index i = 0; i < k && distinct; ++i)
      for (Index j = i + 1; j < k && distinct; ++j)
        distinct = (p.points.row(i) - p.points.row(j)).cwiseAbs().sum() > 0;
    if (distinct) return p;
  }
}

}  // namespace

TEST_CASE("is_quasihypermetric examples") {
  CHECK(is_quasihypermetric(gen_discrete(4)).holds);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const PointConfig p = random_l1(rng, 2 + trial % 7, 1 + trial % 4);
    CHECK(is_quasihypermetric(l1_metric(p)).holds);
  }
  // The 4-cycle graph metric; the sampled oracle finds no positive value.
  const DistanceMatrix path = matrix_of({{0, 1, 2, 1}, {1, 0, 1, 2}, {2, 1, 0, 1}, {1, 2, 1, 0}});
  const bool oracle = qhm::testing::sampled_top_centered(path, 200000, 1) <= 1e-12;
  CHECK(is_quasihypermetric(path).holds == oracle);
  CHECK(oracle);
}

TEST_CASE("is_quasihypermetric returns a witness for K_{2,3}") {
  const FormVerdict v = is_quasihypermetric(kK23);
  CHECK_FALSE(v.holds);
  REQUIRE(v.witness);
  CHECK(std::abs(v.witness->mass()) < 1e-12);
  CHECK(energy(kK23, *v.witness) > 0.0);
}

TEST_CASE("is_strictly_quasihypermetric examples") {
  const FormVerdict circle = is_strictly_quasihypermetric(gen_circle(4, 1.0));
  CHECK_FALSE(circle.holds);
  REQUIRE(circle.witness);
  CHECK(circle.witness->weights().isApprox(Eigen::Vector4d(1, -1, 1, -1), 1e-9));
  for (Index n = 2; n <= 8; ++n) CHECK(is_strictly_quasihypermetric(gen_discrete(n)).holds);
  CHECK(is_strictly_quasihypermetric(matrix_of({{0}})).holds);
  CHECK(is_quasihypermetric(matrix_of({{0}})).holds);
}

TEST_CASE("witnesses reproduce their form value") {
  for (const DistanceMatrix& d :
       {gen_circle(4, 1.0), gen_join_discrete_circle(3, 0.1), gen_box_corners({1, 2}).metric,
        kK23}) {
    const FormVerdict strict = is_strictly_quasihypermetric(d);
    REQUIRE(strict.witness);
    const CenteredSpectrum s = centered_spectrum(d);
    const double norm2 = strict.witness->weights().squaredNorm();
    CHECK(energy(d, *strict.witness) == doctest::Approx(s.values[0] * norm2).epsilon(1e-9).scale(s.scale));
  }
}

TEST_CASE("spectral verdict agrees with Eigen and the sampled oracle for n <= 6") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(1.0, 2.0);
  int nonqh = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Index n = 2 + trial % 5;
    // Entries in [1, 2] always satisfy the triangle inequality. Every third
    // trial perturbs K_{2,3} shifted by 0.1 off the diagonal, which keeps
    // slack in its tight triangles and stays non-quasihypermetric.
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    if (trial % 3 == 0 && n == 5) {
      std::uniform_real_distribution<double> noise(-0.025, 0.025);
      for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j) m(i, j) = m(j, i) = kK23(i, j) + 0.1 + noise(rng);
    } else {
      for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j) m(i, j) = m(j, i) = u(rng);
    }
    const DistanceMatrix d(m);
    const double ref = qhm::testing::reference_top_centered(d);
    const CenteredSpectrum s = centered_spectrum(d);
    CHECK(s.values[0] == doctest::Approx(ref).scale(s.scale).epsilon(1e-12));
    const bool qh = is_quasihypermetric(d).holds;
    if (!qh) ++nonqh;
    const double sampled = qhm::testing::sampled_top_centered(d, 4000, trial);
    if (sampled > 1e-9) CHECK_FALSE(qh);
    if (qh) CHECK(sampled <= 1e-9);
  }
  CHECK(nonqh > 0);
}

TEST_CASE("the form is non-positive on random mass-zero vectors of generated spaces") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> normal;
  std::vector<DistanceMatrix> spaces{gen_discrete(5), gen_circle(6, 1.0), gen_star(4).metric,
                                     gen_join_discrete_pair(4, 0.05),
                                     gen_join_discrete_circle(5, 0.2)};
  for (const auto& item : qhm::testing::make_corpus(50, 2)) spaces.push_back(item.metric);
  for (const DistanceMatrix& d : spaces) {
    for (int s = 0; s < 50; ++s) {
      Eigen::VectorXd a(d.size());
      for (Index i = 0; i < a.size(); ++i) a[i] = normal(rng);
      a.array() -= a.mean();
      CHECK(a.dot(d.matrix() * a) <= kEigTol * a.squaredNorm() * diameter(d) * d.size());
    }
  }
}

TEST_CASE("hypermetric_check_bounded") {
  const HypermetricVerdict d3 = hypermetric_check_bounded(gen_discrete(3), 1);
  CHECK_FALSE(d3.violation);
  CHECK(d3.checked > 0);

  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const PointConfig p = random_l1(rng, 3 + trial % 4, 2);
    CHECK_FALSE(hypermetric_check_bounded(l1_metric(p), 2).violation);
  }

  // K_{2,3} violates the 5-point inequality b = (1,1,-1,-1,1) up to ordering.
  const HypermetricVerdict k = hypermetric_check_bounded(kK23, 2);
  REQUIRE(k.violation);
  int sum = 0;
  for (int b : *k.violation) sum += b;
  CHECK(sum == 1);
  CHECK(k.violation_value > 0.0);

  CHECK_THROWS_AS(hypermetric_check_bounded(gen_discrete(12), 6, 1000), BudgetExceeded);
}

TEST_CASE("hypermetric first violation is deterministic") {
  const HypermetricVerdict a = hypermetric_check_bounded(kK23, 3);
  const HypermetricVerdict b = hypermetric_check_bounded(kK23, 3);
  REQUIRE(a.violation);
  CHECK(*a.violation == *b.violation);
  CHECK(a.checked == b.checked);
}

TEST_CASE("classify examples") {
  const Classification d4 = classify(gen_discrete(4));
  CHECK(d4.quasihypermetric);
  CHECK(d4.strictly_quasihypermetric);
  CHECK(d4.m_finite == MFiniteness::Finite);
  CHECK(d4.rank == 4);

  const Classification c4 = classify(gen_circle(4, 1.0));
  CHECK(c4.quasihypermetric);
  CHECK_FALSE(c4.strictly_quasihypermetric);
  CHECK(c4.m_finite == MFiniteness::Finite);
  CHECK(c4.certificate);

  const Classification join = classify(gen_join_discrete_circle(3, 0.1));
  CHECK(join.quasihypermetric);
  CHECK_FALSE(join.strictly_quasihypermetric);
  CHECK(join.m_finite == MFiniteness::Finite);

  const Classification k = classify(kK23);
  CHECK_FALSE(k.quasihypermetric);
  CHECK(k.m_finite == MFiniteness::NotApplicable);
  CHECK(k.certificate);
}

TEST_CASE("rank_distance_matrix examples") {
  for (Index n = 2; n <= 8; ++n) CHECK(rank_distance_matrix(gen_discrete(n)) == n);
  CHECK(rank_distance_matrix(gen_circle(4, 1.0)) == 3);
  CHECK(rank_distance_matrix(matrix_of({{0}})) == 0);
}

TEST_CASE("strictness equals QH, M finite and full rank on the corpus") {
  for (const auto& item : qhm::testing::make_corpus(300, 17)) {
    const Classification c = classify(item.metric);
    const bool rhs = c.quasihypermetric && c.m_finite == MFiniteness::Finite &&
                     c.rank == item.metric.size();
    CHECK(c.strictly_quasihypermetric == rhs);
  }
}
