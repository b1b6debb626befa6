#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fpl/grassmannian.hpp"
#include "fpl/measures.hpp"
#include "fpl/rng.hpp"
#include "fpl/scaling.hpp"

using fpl::Subspace;
constexpr double pi = std::numbers::pi;

TEST_CASE("lines are unoriented") {
  const auto a = Subspace::line_at_angle(0.7);
  const auto b = Subspace::line_at_angle(0.7 + pi);
  CHECK(a.angle() == doctest::Approx(0.7));
  CHECK(b.angle() == doctest::Approx(0.7));
  CHECK(Subspace::line_at_angle(-0.2).angle() == doctest::Approx(pi - 0.2));
  const auto c = Subspace::line_along(Eigen::Vector3d(0, 0, -2));
  CHECK(c.basis()(2, 0) == doctest::Approx(1.0));
}

TEST_CASE("plane from a normal is orthonormal and orthogonal to it") {
  const Eigen::Vector3d n = Eigen::Vector3d(1, -2, 0.5).normalized();
  const auto v = Subspace::plane_normal_to(n);
  CHECK(v.dim() == 2);
  CHECK((v.basis().transpose() * n).cwiseAbs().maxCoeff() < 1e-12);
  const Eigen::Vector3d back = v.complement().col(0);
  CHECK(std::abs(std::abs(back.dot(n)) - 1) < 1e-12);
}

TEST_CASE("from_basis validates orthonormality and shape") {
  Eigen::MatrixXd bad(2, 1);
  bad << 1, 1;
  CHECK_THROWS_AS(Subspace::from_basis(bad), std::invalid_argument);
  Eigen::MatrixXd wide(2, 2);
  wide.setIdentity();
  CHECK_THROWS_AS(Subspace::from_basis(wide), std::invalid_argument);
  CHECK_THROWS_AS(Subspace::line_along(Eigen::Vector3d::Zero()), std::invalid_argument);
}

TEST_CASE("subspace text round trip") {
  for (const auto& v : {Subspace::line_at_angle(1.25), Subspace::line_along(Eigen::Vector3d(1, 2, 3)),
                        Subspace::plane_normal_to(Eigen::Vector3d(0.2, -1, 0.4))}) {
    const auto back = fpl::parse_subspace(fpl::format_subspace(v));
    CHECK((back.basis() * back.basis().transpose() - v.basis() * v.basis().transpose()).cwiseAbs().maxCoeff() <
          1e-12);
  }
  CHECK_THROWS(fpl::parse_subspace("2 2 1"));
  CHECK_THROWS(fpl::parse_subspace("3 1 0 0"));
}

TEST_CASE("sampled lines are deterministic and roughly uniform") {
  const auto a = fpl::sample_subspaces(2, 1, 10000, 5);
  const auto b = fpl::sample_subspaces(2, 1, 10000, 5);
  double mean = 0, second = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].angle() == b[i].angle());
    mean += a[i].angle();
    second += std::cos(2 * a[i].angle());
  }
  mean /= 10000;
  second /= 10000;
  // Standard error of the mean angle is about 0.009.
  CHECK(mean == doctest::Approx(pi / 2).epsilon(0.03));
  CHECK(std::abs(second) < 0.04);
}

TEST_CASE("sampled spatial lines have uniform |z|") {
  const auto lines = fpl::sample_subspaces(3, 1, 20000, 9);
  double mean_abs_z = 0;
  for (const auto& v : lines) mean_abs_z += std::abs(v.basis()(2, 0));
  CHECK(mean_abs_z / 20000 == doctest::Approx(0.5).epsilon(0.02));
  const auto planes = fpl::sample_subspaces(3, 2, 10, 9);
  CHECK(planes.front().dim() == 2);
}

TEST_CASE("projection preserves mass") {
  const auto mu = fpl::natural_measure(fpl::product_cover(fpl::cantor_digit_set(3, {0, 2}, 4),
                                                          fpl::cantor_digit_set(3, {0, 2}, 4)));
  const auto pm = fpl::project(mu, Subspace::line_at_angle(0.4));
  CHECK(pm.inner.dim() == 1);
  CHECK(pm.inner.total_mass() == doctest::Approx(1.0));
  const auto pf = fpl::project(mu.cast<float>(), fpl::BasicSubspace<float>::line_at_angle(0.4f));
  CHECK(pf.inner.points()(0, 3) == doctest::Approx(pm.inner.points()(0, 3)).epsilon(1e-5));
}

TEST_CASE("projected unit square covers an interval of the right length") {
  std::vector<fpl::Cell> cells;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) cells.push_back({i, j, 0});
  const fpl::Cover square(2, 4, 2, cells);
  const auto flat = fpl::project_cover(square, Subspace::line_at_angle(0), 6);
  CHECK(fpl::measure_estimate(flat) == doctest::Approx(1.0));
  const auto diag = fpl::project_cover(square, Subspace::line_at_angle(pi / 4), 8);
  CHECK(fpl::measure_estimate(diag) >= std::sqrt(2.0));
  CHECK(fpl::measure_estimate(diag) <= std::sqrt(2.0) + 2 * std::ldexp(1.0, -8));
}

TEST_CASE("property: project_cover contains the projection of every point of the set") {
  const auto a = fpl::product_cover(fpl::cantor_digit_set(3, {0, 2}, 5), fpl::cantor_digit_set(3, {0, 2}, 5));
  const double w = a.cell_width();
  for (std::uint64_t trial = 0; trial < 10; ++trial) {
    fpl::RandomStream rng(21, trial);
    const auto v = Subspace::line_at_angle(rng.uniform(0, pi));
    const int level = 6 + static_cast<int>(rng.below(5));
    const auto proj = fpl::project_cover(a, v, level);
    const double h = std::ldexp(1.0, -level);
    for (int k = 0; k < 200; ++k) {
      const auto& cell = a.cells()[rng.below(a.size())];
      const Eigen::Vector2d x((cell[0] + rng.uniform()) * w, (cell[1] + rng.uniform()) * w);
      const double t = v.coordinates(x)[0];
      CHECK(proj.contains({static_cast<std::int64_t>(std::floor(t / h)), 0, 0}));
    }
  }
}

TEST_CASE("polar formula in the plane recovers 1/pi") {
  const auto wide = fpl::polar_formula_check("gaussian", 2, 1, 2000, 0.01, 3);
  const auto narrow = fpl::polar_formula_check("gaussian-narrow", 2, 1, 2000, 0.01, 3);
  CHECK(wide.lhs == doctest::Approx(1.0).epsilon(0.02));
  CHECK(wide.rhs == doctest::Approx(pi).epsilon(0.01));
  CHECK(narrow.lhs == doctest::Approx(0.5).epsilon(0.02));
  CHECK(narrow.rhs == doctest::Approx(pi / 2).epsilon(0.01));
  CHECK(wide.ratio * pi == doctest::Approx(1.0).epsilon(0.05));
  CHECK(wide.ratio / narrow.ratio == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("polar formula catalog edge cases") {
  CHECK(fpl::is_catalog_function("gaussian-shifted"));
  CHECK(fpl::is_catalog_function("radial-power:0.5"));
  CHECK_FALSE(fpl::is_catalog_function("cosine"));
  const auto zero = fpl::polar_formula_check("zero", 2, 1, 10, 0.05, 1);
  CHECK(zero.lhs == 0.0);
  CHECK(std::isnan(zero.ratio));
  CHECK_THROWS_AS(fpl::polar_formula_check("radial-power:1", 2, 1, 10, 0.05, 1), std::invalid_argument);
}
