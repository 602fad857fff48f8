#include <doctest.h>

#include <algorithm>
#include <random>

#include "qhm/classify.hpp"
#include "qhm/errors.hpp"
#include "qhm/generators.hpp"
#include "qhm/l1geom.hpp"
#include "test_helpers.hpp"

using namespace qhm;
using qhm::testing::matrix_of;

namespace {

PointConfig l1_points(std::initializer_list<std::initializer_list<double>> rows) {
  PointConfig p;
  p.norm = Norm::L1;
  p.points.resize(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
  Index i = 0;
  for (const auto& row : rows) {
    Index j = 0;
    for (double v : row) p.points(i, j++) = v;
    ++i;
  }
  return p;
}

}  // namespace

TEST_CASE("l1_metric examples") {
  CHECK(l1_metric(l1_points({{0}, {1}})) == matrix_of({{0, 1}, {1, 0}}));
  const StarSpace star = gen_star(2);
  const DistanceMatrix d = l1_metric(star.config);
  for (Index i = 0; i < 4; ++i) {
    CHECK(d(i, 4) == 1.0);
    for (Index j = 0; j < 4; ++j)
      if (i != j) CHECK(d(i, j) == 2.0);
  }
  const DistanceMatrix sq = l1_metric(l1_points({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
  CHECK(sq(0, 1) == 1.0);
  CHECK(sq(0, 2) == 2.0);
  CHECK_THROWS_AS(l1_metric(l1_points({{0, 1}, {0, 1}})), InvalidInput);
}

TEST_CASE("coordinate_diameters examples") {
  for (Index n = 2; n <= 5; ++n)
    CHECK(coordinate_diameters(gen_star(n).config) == Eigen::VectorXd::Constant(n, 2.0));
  CHECK(coordinate_diameters(l1_points({{0, 0}, {1, 3}})) == Eigen::Vector2d(1, 3));
}

TEST_CASE("l1_upper_bounds is tight for the star") {
  for (Index n = 2; n <= 6; ++n) {
    const BoundsReport b = l1_upper_bounds(gen_star(n).config);
    CHECK(b.m_actual == doctest::Approx(static_cast<double>(n)));
    CHECK(b.dim_bound == doctest::Approx(static_cast<double>(n)));
    CHECK(b.sum_proj_bound == doctest::Approx(static_cast<double>(n)));
    CHECK_FALSE(b.refined_bound);  // k = 2n + 1 > 2n
  }
}

TEST_CASE("l1_upper_bounds fields for a small set") {
  const BoundsReport b = l1_upper_bounds(l1_points({{0, 0}, {1, 0}, {0, 1}}));
  CHECK(b.points == 3);
  CHECK(b.dimension == 2);
  CHECK(b.diameter == 2.0);
  CHECK(b.card_bound == doctest::Approx(1.5));
  REQUIRE(b.refined_bound);
  CHECK(*b.refined_bound == doctest::Approx(std::min(0.75, 0.75) * 2.0));
  REQUIRE(b.four_point_bound);
  CHECK(*b.four_point_bound == doctest::Approx(1.5));
  CHECK(b.m_actual <= *b.refined_bound);
}

TEST_CASE("fold_negative_weight examples") {
  const std::vector<double> xs{0, 1};
  const std::vector<double> w{-1, 2};
  CHECK(one_dim_energy(xs, w) == doctest::Approx(-4.0));
  const auto [fx, fw] = fold_negative_weight(xs, w, FoldSide::Low);
  CHECK(fx == std::vector<double>{1});
  CHECK(fw == std::vector<double>{1});
  CHECK(one_dim_energy(fx, fw) == 0.0);

  const std::vector<double> pos{0.2, 0.3, 0.5};
  const std::vector<double> at{0, 1, 4};
  CHECK_THROWS_AS(fold_negative_weight(at, pos, FoldSide::Low), InvalidInput);
  CHECK(one_dim_energy(at, pos) <= 0.5 * 4.0);
}

TEST_CASE("one_dim_energy_bound examples") {
  const std::vector<double> one{3};
  const std::vector<double> unit{1};
  CHECK(one_dim_energy_bound(one, unit) == 0.0);
  CHECK(one_dim_energy(one, unit) == 0.0);
  const std::vector<double> xs{0, 1, 2};
  const std::vector<double> w{0.5, 0, 0.5};
  CHECK(one_dim_energy_bound(xs, w) == doctest::Approx(1.0));
  CHECK(one_dim_energy(xs, w) == doctest::Approx(1.0));
  const std::vector<double> bad{0.5, 0.2};
  CHECK_THROWS_AS(one_dim_energy_bound(std::vector<double>{0, 1}, bad), InvalidInput);
  CHECK_THROWS_AS(one_dim_energy_bound(std::vector<double>{1, 0}, std::vector<double>{0.5, 0.5}),
                  InvalidInput);
}

TEST_CASE("one-dimensional lemmas on random instances") {
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> x(-5.0, 5.0);
  std::normal_distribution<double> a(0.0, 1.5);
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t k = 1 + trial % 8;
    std::vector<double> xs(k);
    for (double& v : xs) v = x(rng);
    std::sort(xs.begin(), xs.end());
    std::vector<double> w(k);
    for (double& v : w) v = a(rng);
    double rest = 0;
    for (std::size_t i = 0; i + 1 < k; ++i) rest += w[i];
    w.back() = 1.0 - rest;
    const double e = one_dim_energy(xs, w);
    const double spread = xs.back() - xs.front();
    const double slack = 1e-12 * std::max(1.0, spread);

    CHECK(e <= 0.5 * spread + slack);
    bool has_nonnegative = std::any_of(w.begin(), w.end(), [](double v) { return v >= 0; });
    if (has_nonnegative) CHECK_NOTHROW(one_dim_energy_bound(xs, w));
    if (k >= 2 && w.front() < 0) {
      const auto [fx, fw] = fold_negative_weight(xs, w, FoldSide::Low);
      CHECK(e <= one_dim_energy(fx, fw) + slack);
    }
    if (k >= 2 && w.back() < 0) {
      const auto [fx, fw] = fold_negative_weight(xs, w, FoldSide::High);
      CHECK(e <= one_dim_energy(fx, fw) + slack);
    }
    double pair_sum = 0;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j) pair_sum += std::abs(xs[i] - xs[j]);
    CHECK(pair_sum >= static_cast<double>(k - 1) * spread - slack * static_cast<double>(k * k));
  }
}

TEST_CASE("L1 spaces are QH and pass the small hypermetric check") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> c(-2.0, 2.0);
  for (int trial = 0; trial < 60; ++trial) {
    PointConfig p;
    p.norm = Norm::L1;
    p.points.resize(3 + trial % 5, 1 + trial % 3);
    for (Index i = 0; i < p.points.rows(); ++i)
      for (Index j = 0; j < p.points.cols(); ++j) p.points(i, j) = c(rng);
    const DistanceMatrix d = l1_metric(p);
    CHECK(is_quasihypermetric(d).holds);
    CHECK_FALSE(hypermetric_check_bounded(d, 2).violation);
    const BoundsReport b = l1_upper_bounds(p);
    CHECK(b.sum_proj_bound <= b.dim_bound * (1 + 1e-12));
  }
}

TEST_CASE("l1_necessary_condition flags the large join") {
  const L1Flag big = l1_necessary_condition(gen_join_discrete_pair(3, 3e-4));
  CHECK(big.status == MStatus::Finite);
  CHECK(big.bound == doctest::Approx(1.25));
  CHECK_FALSE(big.consistent_with_l1);
  const L1Flag small = l1_necessary_condition(gen_discrete(5));
  CHECK(small.consistent_with_l1);
}
