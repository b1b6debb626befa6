#include <sstream>

#include "doctest.h"
#include "fpl/cover.hpp"
#include "fpl/measures.hpp"
#include "fpl/rng.hpp"

using fpl::Cell;
using fpl::Cover;

TEST_CASE("cover construction normalizes cells") {
  const Cover c(2, 3, 2, {{1, 2, 7}, {0, 0, 0}, {1, 2, 0}});
  CHECK(c.size() == 2);
  CHECK(c.cells()[0] == Cell{0, 0, 0});
  CHECK(c.contains({1, 2, 0}));
  CHECK_FALSE(c.contains({1, 2, 7}));
  CHECK(c.cell_width() == doctest::Approx(0.125));
}

TEST_CASE("cover construction rejects bad parameters") {
  CHECK_THROWS_AS(Cover(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(Cover(4, 1), std::invalid_argument);
  CHECK_THROWS_AS(Cover(1, -1), std::invalid_argument);
  CHECK_THROWS_AS(Cover(1, 1, 1), std::invalid_argument);
}

TEST_CASE("refining then coarsening is the identity") {
  const Cover c(2, 2, 3, {{0, 0, 0}, {2, 1, 0}, {-1, 4, 0}});
  const Cover fine = c.refined_to(4);
  CHECK(fine.size() == c.size() * 81);
  CHECK(fine.coarsened_to(2) == c);
  CHECK(c.refined().coarsened() == c);
}

TEST_CASE("coarsening handles negative indices by floor division") {
  const Cover c(1, 2, 2, {{-1, 0, 0}, {-4, 0, 0}, {3, 0, 0}});
  const Cover parent = c.coarsened();
  CHECK(parent.cells().size() == 3);
  CHECK(parent.contains({-1, 0, 0}));
  CHECK(parent.contains({-2, 0, 0}));
  CHECK(parent.contains({1, 0, 0}));
}

TEST_CASE("to_dyadic is a superset of every ternary cell") {
  const Cover c = fpl::cantor_digit_set(3, {0, 2}, 4);
  for (int level : {2, 5, 7}) {
    const Cover d = c.to_dyadic(level);
    const double h = std::ldexp(1.0, -level);
    for (const auto& cell : c.cells()) {
      // Both endpoints (just inside) of each ternary cell must be covered.
      const double lo = static_cast<double>(cell[0]) * c.cell_width();
      const double hi = lo + c.cell_width();
      CHECK(d.contains({static_cast<std::int64_t>(std::floor((lo + 1e-12) / h)), 0, 0}));
      CHECK(d.contains({static_cast<std::int64_t>(std::floor((hi - 1e-12) / h)), 0, 0}));
    }
  }
}

TEST_CASE("cell_index snaps values that sit on a grid line") {
  CHECK(fpl::cell_index(0.3, 0.1) == 3);
  CHECK(fpl::cell_index(-0.25, 0.25) == -1);
  CHECK(fpl::cell_index(0.26, 0.25) == 1);
  CHECK(fpl::cell_index(0.74, 0.25) == 2);
}

TEST_CASE("covering_range treats the upper edge as open") {
  const auto [a, b] = fpl::covering_range(0.25, 0.5, 0.25);
  CHECK(a == 1);
  CHECK(b == 1);
  const auto [c, d] = fpl::covering_range(0.3, 0.3, 0.25);
  CHECK(c == 1);
  CHECK(d == 1);
  const auto [e, f] = fpl::covering_range(-0.1, 0.6, 0.25);
  CHECK(e == -1);
  CHECK(f == 2);
}

TEST_CASE("cover_points bins points at the dyadic level") {
  Eigen::MatrixXd p(2, 3);
  p << 0.1, 0.9, 0.12, 0.1, 0.9, 0.13;
  const Cover c = fpl::cover_points(p, 2);
  CHECK(c.size() == 2);
  CHECK(c.contains({0, 0, 0}));
  CHECK(c.contains({3, 3, 0}));
}

TEST_CASE("cover file round trip") {
  const Cover c(2, 5, 3, {{1, 2, 0}, {-3, 4, 0}});
  std::stringstream io;
  fpl::write_cover(io, c);
  CHECK(fpl::read_cover(io) == c);

  const Cover d(3, 2, 2, {{0, 1, 2}});
  std::stringstream io2;
  fpl::write_cover(io2, d);
  CHECK(io2.str() == "level 2\ndim 3\n0 1 2\n");
  CHECK(fpl::read_cover(io2) == d);
}

TEST_CASE("cover file errors") {
  std::stringstream no_level("0 1\n");
  CHECK_THROWS(fpl::read_cover(no_level));
  std::stringstream bad_tuple("level 2\n0 x\n");
  CHECK_THROWS(fpl::read_cover(bad_tuple));
  std::stringstream mixed("level 2\n0 1\n0 1 2\n");
  CHECK_THROWS(fpl::read_cover(mixed));
  std::stringstream comments("# a comment\nlevel 1\n\n1\n");
  CHECK(fpl::read_cover(comments).size() == 1);
}

TEST_CASE("property: a refined cover contains the children of every cell") {
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    fpl::RandomStream rng(7, trial);
    std::vector<Cell> cells;
    for (int i = 0; i < 30; ++i)
      cells.push_back({static_cast<std::int64_t>(rng.below(64)) - 32, static_cast<std::int64_t>(rng.below(64)), 0});
    const Cover c(2, 5, 2, cells);
    const Cover fine = c.refined();
    for (const auto& cell : c.cells()) CHECK(fine.contains({2 * cell[0] + 1, 2 * cell[1], 0}));
    CHECK(fine.coarsened() == c);
  }
}
