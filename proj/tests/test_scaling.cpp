#include <cmath>

#include "doctest.h"
#include "fpl/measures.hpp"
#include "fpl/rng.hpp"
#include "fpl/scaling.hpp"

using fpl::Cover;

namespace {

Cover interval(double lo, double hi, int level) {
  const double h = std::ldexp(1.0, -level);
  const auto [a, b] = fpl::covering_range(lo, hi, h);
  std::vector<fpl::Cell> cells;
  for (auto k = a; k <= b; ++k) cells.push_back({k, 0, 0});
  return Cover(1, level, 2, cells);
}

}  // namespace

TEST_CASE("box dimension oracles") {
  const auto full = fpl::box_dimension(interval(0, 1, 12), 3, 11);
  CHECK(full.slope == doctest::Approx(1.0).epsilon(0.01));
  CHECK(full.r2 > 0.999);
  const auto point = fpl::box_dimension(Cover(1, 12, 2, {{7, 0, 0}}), 3, 11);
  CHECK(point.slope == doctest::Approx(0.0));
  const auto cantor = fpl::box_dimension(fpl::cantor_digit_set(3, {0, 2}, 12), 4, 11);
  CHECK(std::abs(cantor.slope - std::log(2.0) / std::log(3.0)) <= 0.05);
}

TEST_CASE("box dimension errors") {
  CHECK_THROWS_AS(fpl::box_dimension(Cover(1, 4), 1, 5), std::invalid_argument);
  CHECK_THROWS_AS(fpl::box_dimension(interval(0, 1, 8), 3, 5), std::invalid_argument);
  CHECK_THROWS_AS(fpl::box_dimension(Eigen::MatrixXd(2, 0), 1, 5), std::invalid_argument);
}

TEST_CASE("box dimension of a point set") {
  Eigen::MatrixXd p(2, 4096);
  for (int i = 0; i < 4096; ++i) p.col(i) << (i + 0.5) / 4096, 0.25;
  CHECK(fpl::box_dimension(p, 2, 10).slope == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("fit_counts") {
  const auto fit = fpl::fit_counts({1, 2, 3, 4}, {2, 4, 8, 16});
  CHECK(fit.slope == doctest::Approx(1.0));
  CHECK(fit.intercept == doctest::Approx(0.0).scale(1));
  CHECK(fit.r2 == doctest::Approx(1.0));
}

TEST_CASE("measure estimates") {
  CHECK(fpl::measure_estimate(interval(0, 1, 7)) == 1.0);
  CHECK(fpl::measure_estimate(Cover(1, 7)) == 0.0);
  for (int k : {1, 4, 9})
    CHECK(fpl::measure_estimate(fpl::cantor_digit_set(3, {0, 2}, k)) == doctest::Approx(std::pow(2.0 / 3, k)));
}

TEST_CASE("intersections and unions of covers") {
  const auto p = interval(0, 0.5, 4), q = interval(0.25, 1, 4);
  const auto both = fpl::intersect_covers(p, q);
  CHECK(fpl::measure_estimate(both) == doctest::Approx(0.25));
  CHECK(fpl::intersect_covers(interval(0, 0.25, 4), interval(0.5, 1, 4)).empty());
  CHECK(fpl::intersect_covers(p, interval(0, 1, 4)) == p);
  // The finer cover is coarsened to the coarser level.
  CHECK(fpl::intersect_covers(interval(0, 0.5, 6), q).level() == 4);
  CHECK_THROWS_AS(fpl::intersect_covers(p, Cover(2, 4)), std::invalid_argument);
  CHECK_THROWS_AS(fpl::intersect_covers(p, fpl::cantor_digit_set(3, {0}, 2)), std::invalid_argument);
}

TEST_CASE("interior runs") {
  CHECK(fpl::interior_run(interval(0, 1, 5)) == 32);
  std::vector<fpl::Cell> alternating;
  for (int k = 0; k < 32; k += 2) alternating.push_back({k, 0, 0});
  CHECK(fpl::interior_run(Cover(1, 5, 2, alternating)) == 1);
  CHECK(fpl::interior_run(Cover(1, 5)) == 0);
}

TEST_CASE("stable positive measure needs both levels above tau") {
  CHECK(fpl::stable_positive_measure(interval(0, 0.1, 8), interval(0, 0.1, 9), 0.01));
  CHECK_FALSE(fpl::stable_positive_measure(interval(0, 0.1, 8), Cover(1, 9), 0.01));
}

TEST_CASE("product dimension is the sum of factor dimensions") {
  const auto c = fpl::cantor_digit_set(3, {0, 2}, 8);
  const auto cc = fpl::product_cover(c, c);
  const double sum = 2 * fpl::box_dimension(c, 4, 11).slope;
  const auto fit = fpl::box_dimension(cc, 4, 11);
  CHECK(std::abs(fit.slope - sum) <= 0.1);
  CHECK(std::abs(fit.slope - 2 * std::log(2.0) / std::log(3.0)) <= 0.07);
}

TEST_CASE("property: union counts are bounded by the parts") {
  for (std::uint64_t trial = 0; trial < 30; ++trial) {
    fpl::RandomStream rng(13, trial);
    std::vector<fpl::Cell> a, b;
    for (int i = 0; i < 40; ++i) a.push_back({static_cast<std::int64_t>(rng.below(100)), 0, 0});
    for (int i = 0; i < 25; ++i) b.push_back({static_cast<std::int64_t>(rng.below(100)), 0, 0});
    const Cover p(1, 7, 2, a), q(1, 7, 2, b);
    const auto u = fpl::union_covers(p, q);
    CHECK(u.size() >= std::max(p.size(), q.size()));
    CHECK(u.size() <= p.size() + q.size());
    CHECK(fpl::measure_estimate(fpl::intersect_covers(p, q)) <= fpl::measure_estimate(p));
  }
}

TEST_CASE("property: measure estimates never grow under refinement of the same points") {
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    fpl::RandomStream rng(17, trial);
    Eigen::MatrixXd pts(1, 50);
    for (int j = 0; j < 50; ++j) pts(0, j) = rng.uniform();
    double previous = 2;
    for (int level = 2; level <= 12; ++level) {
      const double m = fpl::measure_estimate(fpl::cover_points(pts, level));
      CHECK(m <= previous);
      previous = m;
    }
  }
}

TEST_CASE("property: covers of point sets that are disjoint stay disjoint when refined") {
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    fpl::RandomStream rng(19, trial);
    Eigen::MatrixXd p(2, 30), q(2, 30);
    for (int j = 0; j < 30; ++j) {
      p.col(j) << rng.uniform(), rng.uniform();
      q.col(j) << rng.uniform(), rng.uniform();
    }
    for (int level = 2; level < 10; ++level) {
      if (!fpl::intersect_covers(fpl::cover_points(p, level), fpl::cover_points(q, level)).empty()) continue;
      CHECK(fpl::intersect_covers(fpl::cover_points(p, level + 1), fpl::cover_points(q, level + 1)).empty());
    }
  }
}
