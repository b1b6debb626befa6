#include "fpl/measures.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

#include "fpl/parallel.hpp"
#include "fpl/rng.hpp"

namespace fpl {

Cover cantor_digit_set(int base, const std::vector<int>& digits, int level) {
  if (base < 2) throw std::invalid_argument("cantor_digit_set: base must be at least 2");
  if (digits.empty()) throw std::invalid_argument("cantor_digit_set: digit set is empty");
  if (level < 0) throw std::invalid_argument("cantor_digit_set: level must be non-negative");
  std::set<int> unique(digits.begin(), digits.end());
  if (unique.size() != digits.size()) throw std::invalid_argument("cantor_digit_set: repeated digit");
  if (*unique.begin() < 0 || *unique.rbegin() >= base)
    throw std::invalid_argument("cantor_digit_set: digits must lie in [0, base)");

  std::vector<std::int64_t> cells{0};
  for (int l = 0; l < level; ++l) {
    std::vector<std::int64_t> next;
    next.reserve(cells.size() * unique.size());
    for (auto c : cells)
      for (int d : unique) next.push_back(c * base + d);
    cells = std::move(next);
  }
  std::vector<Cell> out;
  out.reserve(cells.size());
  for (auto c : cells) out.push_back({c, 0, 0});
  return Cover(1, level, base, std::move(out));
}

Cover product_cover(const Cover& a, const Cover& b) {
  if (a.base() != b.base()) throw std::invalid_argument("product_cover: factors live on different grids");
  if (a.dim() + b.dim() > 3) throw std::invalid_argument("product_cover: product dimension exceeds 3");
  const int level = std::max(a.level(), b.level());
  const Cover fa = a.refined_to(level);
  const Cover fb = b.refined_to(level);
  if (fa.level() != fb.level()) throw std::invalid_argument("product_cover: mismatched levels");

  std::vector<Cell> cells;
  cells.reserve(fa.size() * fb.size());
  for (const auto& x : fa.cells())
    for (const auto& y : fb.cells()) {
      Cell c{0, 0, 0};
      for (int i = 0; i < fa.dim(); ++i) c[i] = x[i];
      for (int i = 0; i < fb.dim(); ++i) c[fa.dim() + i] = y[i];
      cells.push_back(c);
    }
  return Cover(fa.dim() + fb.dim(), level, fa.base(), std::move(cells));
}

PointMeasure natural_measure(const Cover& cover) {
  if (cover.empty()) throw std::invalid_argument("natural_measure: empty cover");
  const auto n = static_cast<Eigen::Index>(cover.size());
  Eigen::VectorXd weights = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  return PointMeasure(cover.centers(), std::move(weights), cover.cell_width());
}

FrostmanReport frostman_check(const PointMeasure& mu, double s, int ball_samples, std::uint64_t seed) {
  if (!(s > 0)) throw std::invalid_argument("frostman_check: exponent must be positive");
  if (ball_samples < 1) throw std::invalid_argument("frostman_check: need at least one ball sample");

  const double res = mu.resolution();
  const double top = std::max(mu.diameter(), 1.0);
  std::vector<double> radii;
  for (double r = res; r < top; r *= 2) radii.push_back(r);
  radii.push_back(top);
  const double split = std::sqrt(res * top);

  const auto& pts = mu.points();
  const auto& w = mu.weights();
  std::vector<std::vector<double>> mass(static_cast<std::size_t>(ball_samples));
  parallel_for(mass.size(), [&](std::size_t k) {
    RandomStream rng(seed, k);
    const auto center = pts.col(static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(mu.size()))));
    const Eigen::VectorXd dist = (pts.colwise() - center).colwise().norm().transpose();
    auto& row = mass[k];
    row.assign(radii.size(), 0.0);
    for (std::size_t i = 0; i < radii.size(); ++i) {
      // Open ball, with slack so lattice neighbours at exactly distance r are excluded.
      const double limit = radii[i] * (1.0 - 1e-9);
      double m = 0;
      for (Eigen::Index j = 0; j < dist.size(); ++j)
        if (dist[j] < limit) m += w[j];
      row[i] = m;
    }
  });

  FrostmanReport report;
  report.exponent = s;
  report.samples = static_cast<std::int64_t>(ball_samples) * static_cast<std::int64_t>(radii.size());
  double small_sup = 0, large_sup = 0;
  for (const auto& row : mass)
    for (std::size_t i = 0; i < radii.size(); ++i) {
      const double ratio = row[i] / std::pow(radii[i], s);
      if (ratio > report.sup_ratio) {
        report.sup_ratio = ratio;
        report.radius_at_sup = radii[i];
      }
      if (radii[i] <= 4 * res) small_sup = std::max(small_sup, ratio);
      if (radii[i] >= split) large_sup = std::max(large_sup, ratio);
    }
  report.unbounded = small_sup > 2 * large_sup;
  return report;
}

void write_measure_csv(std::ostream& out, const PointMeasure& mu) {
  static constexpr const char* names[] = {"x", "y", "z"};
  for (int i = 0; i < mu.dim(); ++i) out << names[i] << ',';
  out << "w\n" << std::setprecision(17);
  for (Eigen::Index j = 0; j < mu.size(); ++j) {
    for (int i = 0; i < mu.dim(); ++i) out << mu.points()(i, j) << ',';
    out << mu.weights()[j] << '\n';
  }
}

PointMeasure read_measure_csv(std::istream& in, double resolution) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("measure csv: missing header");
  const auto columns = std::count(line.begin(), line.end(), ',') + 1;
  const int dim = static_cast<int>(columns) - 1;
  if (dim < 1 || dim > 3) throw std::runtime_error("measure csv: expected 2 to 4 columns");
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    double v;
    int count = 0;
    while (fields >> v) {
      values.push_back(v);
      ++count;
    }
    if (count != columns) throw std::runtime_error("measure csv: row has wrong number of fields");
  }
  const auto n = static_cast<Eigen::Index>(values.size() / static_cast<std::size_t>(columns));
  Eigen::MatrixXd pts(dim, n);
  Eigen::VectorXd w(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (int i = 0; i < dim; ++i) pts(i, j) = values[static_cast<std::size_t>(j * columns + i)];
    w[j] = values[static_cast<std::size_t>(j * columns + dim)];
  }
  return PointMeasure(std::move(pts), std::move(w), resolution);
}

}  // namespace fpl
