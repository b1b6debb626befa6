#include "fpl/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/QR>

namespace fpl {

ScalingFit fit_counts(const std::vector<int>& levels, const std::vector<std::int64_t>& counts) {
  if (levels.size() != counts.size() || levels.size() < 2)
    throw std::invalid_argument("fit_counts: need matching level and count lists of length >= 2");
  const auto n = static_cast<Eigen::Index>(levels.size());
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (counts[static_cast<std::size_t>(i)] < 1) throw std::invalid_argument("fit_counts: counts must be positive");
    design(i, 0) = levels[static_cast<std::size_t>(i)];
    design(i, 1) = 1;
    y[i] = std::log2(static_cast<double>(counts[static_cast<std::size_t>(i)]));
  }
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(y);

  ScalingFit fit;
  fit.levels = levels;
  fit.counts = counts;
  fit.slope = coef[0];
  fit.intercept = coef[1];
  const double ss_tot = (y.array() - y.mean()).square().sum();
  const double ss_res = (y - design * coef).squaredNorm();
  fit.r2 = ss_tot > 1e-300 ? std::clamp(1 - ss_res / ss_tot, 0.0, 1.0) : 1.0;
  return fit;
}

std::int64_t dyadic_count(const Cover& set, int level) {
  if (set.base() == 2 && level <= set.level()) return static_cast<std::int64_t>(set.coarsened_to(level).size());
  return static_cast<std::int64_t>(cover_points(set.centers(), level).size());
}

namespace {

void check_range(int level_min, int level_max) {
  if (level_min < 0 || level_max - level_min < 3)
    throw std::invalid_argument("box_dimension: level range must span at least 3 levels");
}

}  // namespace

ScalingFit box_dimension(const Cover& set, int level_min, int level_max) {
  if (set.empty()) throw std::invalid_argument("box_dimension: empty set");
  check_range(level_min, level_max);
  std::vector<int> levels;
  std::vector<std::int64_t> counts;
  for (int l = level_min; l <= level_max; ++l) {
    levels.push_back(l);
    counts.push_back(dyadic_count(set, l));
  }
  return fit_counts(levels, counts);
}

ScalingFit box_dimension(const Eigen::MatrixXd& points, int level_min, int level_max) {
  if (points.cols() == 0) throw std::invalid_argument("box_dimension: empty set");
  check_range(level_min, level_max);
  std::vector<int> levels;
  std::vector<std::int64_t> counts;
  for (int l = level_min; l <= level_max; ++l) {
    levels.push_back(l);
    counts.push_back(static_cast<std::int64_t>(cover_points(points, l).size()));
  }
  return fit_counts(levels, counts);
}

std::pair<int, int> default_fit_range(const Cover& set) {
  const int finest = static_cast<int>(std::floor(set.level() * std::log2(set.base()) + 1e-9));
  const std::pair<int, int> range{3, finest - 1};
  if (range.second - range.first < 3) throw std::invalid_argument("default_fit_range: cover too coarse to fit");
  return range;
}

double measure_estimate(const Cover& set) {
  return static_cast<double>(set.size()) * std::pow(set.cell_width(), set.dim());
}

namespace {

std::pair<Cover, Cover> common_grid(const Cover& p, const Cover& q) {
  if (p.dim() != q.dim()) throw std::invalid_argument("cover set operation: dimension mismatch");
  if (p.base() != q.base()) throw std::invalid_argument("cover set operation: covers on different grids");
  const int level = std::min(p.level(), q.level());
  return {p.coarsened_to(level), q.coarsened_to(level)};
}

}  // namespace

Cover intersect_covers(const Cover& p, const Cover& q) {
  auto [a, b] = common_grid(p, q);
  std::vector<Cell> out;
  std::set_intersection(a.cells().begin(), a.cells().end(), b.cells().begin(), b.cells().end(),
                        std::back_inserter(out));
  return Cover(a.dim(), a.level(), a.base(), std::move(out));
}

Cover union_covers(const Cover& p, const Cover& q) {
  auto [a, b] = common_grid(p, q);
  std::vector<Cell> out;
  std::set_union(a.cells().begin(), a.cells().end(), b.cells().begin(), b.cells().end(), std::back_inserter(out));
  return Cover(a.dim(), a.level(), a.base(), std::move(out));
}

std::int64_t interior_run(const Cover& set) {
  if (set.dim() != 1) throw std::invalid_argument("interior_run: 1-dim cover required");
  std::int64_t best = 0, run = 0, previous = 0;
  for (const auto& c : set.cells()) {
    run = (run > 0 && c[0] == previous + 1) ? run + 1 : 1;
    previous = c[0];
    best = std::max(best, run);
  }
  return best;
}

bool stable_positive_measure(const Cover& coarse, const Cover& fine, double tau) {
  return measure_estimate(coarse) >= tau && measure_estimate(fine) >= tau;
}

}  // namespace fpl
