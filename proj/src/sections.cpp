#include "fpl/sections.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <tuple>
#include <utility>

#include "fpl/parallel.hpp"
#include "fpl/rng.hpp"
#include "fpl/scaling.hpp"

namespace fpl {
namespace {

using Key = std::pair<std::int64_t, std::int64_t>;

/// Planar cells sorted by (p, q) where (p, q) is (x, y) or (y, x).
struct AxisIndex {
  std::vector<Key> keys;
  bool swapped = false;
};

AxisIndex make_index(const Cover& a, bool swapped) {
  AxisIndex index;
  index.swapped = swapped;
  index.keys.reserve(a.size());
  for (const auto& c : a.cells()) index.keys.push_back(swapped ? Key{c[1], c[0]} : Key{c[0], c[1]});
  std::sort(index.keys.begin(), index.keys.end());
  return index;
}

/// Visits every cell of the index whose centre satisfies
/// |<c - x, nrm>| <= half_width. The line must be closer to the p axis than
/// to the q axis, so |nrm_q| >= 1/sqrt(2) and the q-range per column is short.
template <typename Visit>
void scan_slab(const AxisIndex& index, double w, double xp, double xq, double np, double nq, double half_width,
               Visit&& visit) {
  if (index.keys.empty()) return;
  const std::int64_t pmin = index.keys.front().first, pmax = index.keys.back().first;
  const double tol = 1e-12 * std::max(1.0, half_width);
  auto it = index.keys.begin();
  for (std::int64_t p = pmin; p <= pmax; ++p) {
    const double cp = (static_cast<double>(p) + 0.5) * w;
    const double offset = (cp - xp) * np;
    double lo = xq + (-half_width - offset) / nq;
    double hi = xq + (half_width - offset) / nq;
    if (lo > hi) std::swap(lo, hi);
    const auto qlo = static_cast<std::int64_t>(std::floor(lo / w - 0.5)) - 1;
    const auto qhi = static_cast<std::int64_t>(std::ceil(hi / w - 0.5)) + 1;
    it = std::lower_bound(it, index.keys.end(), Key{p, qlo});
    for (; it != index.keys.end() && it->first == p && it->second <= qhi; ++it) {
      const double cq = (static_cast<double>(it->second) + 0.5) * w;
      if (std::abs(offset + (cq - xq) * nq) <= half_width + tol) visit(*it);
    }
  }
}

void check_spec(const Cover& a, const SliceSpec& spec) {
  if (spec.base_point.size() != a.dim() || spec.subspace.ambient_dim() != a.dim())
    throw std::invalid_argument("slice: base point, subspace and cover dimensions differ");
  if (a.dim() == 1) throw std::invalid_argument("slice: cover must be planar or spatial");
  if (!(spec.thickness >= a.cell_width() * (1 - 1e-12)))
    throw std::invalid_argument("slice: thickness is below the cover's cell width");
}

/// Planar slab via the column scan; `along_x` and `along_y` are the two
/// orientations of the same cells.
template <typename Visit>
void planar_slab(const AxisIndex& along_x, const AxisIndex& along_y, double w, const Eigen::Vector2d& x,
                 const Eigen::Vector2d& u, double thickness, Visit&& visit) {
  const Eigen::Vector2d nrm(-u.y(), u.x());
  const double half_width = thickness / 2 + w * (std::abs(nrm.x()) + std::abs(nrm.y())) / 2;
  if (std::abs(u.x()) >= std::abs(u.y()))
    scan_slab(along_x, w, x.x(), x.y(), nrm.x(), nrm.y(), half_width, [&](const Key& k) { visit(k.first, k.second); });
  else
    scan_slab(along_y, w, x.y(), x.x(), nrm.y(), nrm.x(), half_width, [&](const Key& k) { visit(k.second, k.first); });
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  const auto j = std::min(i + 1, values.size() - 1);
  return values[i] + (pos - static_cast<double>(i)) * (values[j] - values[i]);
}

struct PreparedCells {
  std::vector<Eigen::Vector3d> centers;
  double half_side = 0;
};

PreparedCells prepare(const Cover& a, double delta) {
  if (!a.empty() && !(delta >= a.cell_width() * (1 - 1e-12)))
    throw std::invalid_argument("visibility: delta is below the cover's cell width");
  PreparedCells out;
  out.half_side = delta / 2;
  out.centers.reserve(a.size());
  for (const auto& c : a.cells()) {
    Eigen::Vector3d p = Eigen::Vector3d::Zero();
    p.head(a.dim()) = a.center(c);
    out.centers.push_back(p);
  }
  return out;
}

Visibility planar_visibility(const PreparedCells& cells, const Eigen::Vector2d& x, int directions,
                             RandomStream& rng) {
  constexpr double pi = std::numbers::pi;
  const double hs = cells.half_side;
  std::vector<std::pair<double, double>> arcs;
  arcs.reserve(cells.centers.size() + 8);
  for (const auto& c : cells.centers) {
    const double dx = c.x() - x.x(), dy = c.y() - x.y();
    if (std::abs(dx) <= hs && std::abs(dy) <= hs) return {1.0, true};
    const double mid = std::atan2(dy, dx);
    double lo = 0, hi = 0;
    for (int sx = -1; sx <= 1; sx += 2)
      for (int sy = -1; sy <= 1; sy += 2) {
        const double d = std::remainder(std::atan2(dy + sy * hs, dx + sx * hs) - mid, 2 * pi);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
      }
    lo += mid;
    hi += mid;
    const double shift = std::floor(lo / pi) * pi;
    lo -= shift;
    hi -= shift;
    if (hi > pi) {
      arcs.emplace_back(lo, pi);
      arcs.emplace_back(0.0, hi - pi);
    } else {
      arcs.emplace_back(lo, hi);
    }
  }
  std::sort(arcs.begin(), arcs.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& arc : arcs) {
    if (!merged.empty() && arc.first <= merged.back().second)
      merged.back().second = std::max(merged.back().second, arc.second);
    else
      merged.push_back(arc);
  }
  int hits = 0;
  for (int k = 0; k < directions; ++k) {
    const double theta = pi * (k + rng.uniform()) / directions;
    auto it = std::upper_bound(merged.begin(), merged.end(), std::pair{theta, std::numeric_limits<double>::infinity()});
    if (it != merged.begin() && std::prev(it)->second >= theta) ++hits;
  }
  return {static_cast<double>(hits) / directions, false};
}

bool line_meets_box(const Eigen::Vector3d& x, const Eigen::Vector3d& d, const Eigen::Vector3d& c, double hs) {
  double t0 = -std::numeric_limits<double>::infinity(), t1 = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    const double lo = c[i] - hs - x[i], hi = c[i] + hs - x[i];
    if (d[i] == 0) {
      if (lo > 0 || hi < 0) return false;
      continue;
    }
    double a = lo / d[i], b = hi / d[i];
    if (a > b) std::swap(a, b);
    t0 = std::max(t0, a);
    t1 = std::min(t1, b);
    if (t0 > t1) return false;
  }
  return true;
}

Visibility spatial_visibility(const PreparedCells& cells, const Eigen::Vector3d& x, int directions,
                              std::uint64_t seed, std::uint64_t index) {
  const double hs = cells.half_side;
  for (const auto& c : cells.centers)
    if ((c - x).cwiseAbs().maxCoeff() <= hs) return {1.0, true};
  const auto lines = sample_subspaces(3, 1, directions, splitmix64(seed ^ splitmix64(index)));
  int hits = 0;
  for (const auto& line : lines) {
    const Eigen::Vector3d d = line.basis().col(0);
    for (const auto& c : cells.centers)
      if (line_meets_box(x, d, c, hs)) {
        ++hits;
        break;
      }
  }
  return {static_cast<double>(hits) / directions, false};
}

Visibility visibility_at(const Cover& a, const PreparedCells& cells, const Eigen::VectorXd& x, int directions,
                         std::uint64_t seed, std::uint64_t index) {
  if (x.size() != a.dim()) throw std::invalid_argument("visibility: point and cover dimensions differ");
  if (cells.centers.empty()) return {0.0, false};
  if (a.dim() == 2) {
    RandomStream rng(seed, index);
    return planar_visibility(cells, Eigen::Vector2d(x), directions, rng);
  }
  if (a.dim() == 3) return spatial_visibility(cells, Eigen::Vector3d(x), directions, seed, index);
  throw std::invalid_argument("visibility: cover must be planar or spatial");
}

}  // namespace

Cover slab_cells(const Cover& a, const SliceSpec& spec) {
  check_spec(a, spec);
  const double w = a.cell_width();
  std::vector<Cell> out;
  if (a.dim() == 2) {
    const auto along_x = make_index(a, false), along_y = make_index(a, true);
    planar_slab(along_x, along_y, w, Eigen::Vector2d(spec.base_point), Eigen::Vector2d(spec.subspace.basis().col(0)),
                spec.thickness, [&](std::int64_t i, std::int64_t j) { out.push_back({i, j, 0}); });
    return Cover(2, a.level(), a.base(), std::move(out));
  }
  const Eigen::Vector3d x = spec.base_point;
  const double tol = 1e-12;
  if (spec.subspace.dim() == 2) {
    const Eigen::Vector3d nrm = spec.subspace.complement().col(0);
    const double half_width = spec.thickness / 2 + w * nrm.cwiseAbs().sum() / 2;
    for (const auto& c : a.cells())
      if (std::abs((Eigen::Vector3d(a.center(c)) - x).dot(nrm)) <= half_width + tol) out.push_back(c);
  } else {
    const Eigen::Vector3d u = spec.subspace.basis().col(0);
    const double radius = spec.thickness / 2 + w * std::sqrt(3.0) / 2;
    for (const auto& c : a.cells()) {
      const Eigen::Vector3d d = Eigen::Vector3d(a.center(c)) - x;
      if ((d - d.dot(u) * u).norm() <= radius + tol) out.push_back(c);
    }
  }
  return Cover(3, a.level(), a.base(), std::move(out));
}

Cover slice_cover(const Cover& a, const SliceSpec& spec) {
  const Cover slab = slab_cells(a, spec);
  const auto& basis = spec.subspace.basis();
  const int k = spec.subspace.dim();
  const double w = a.cell_width();
  std::vector<Cell> out;
  for (const auto& c : slab.cells()) {
    const Eigen::VectorXd coords = basis.transpose() * (a.center(c) - spec.base_point);
    std::int64_t lo[2] = {0, 0}, hi[2] = {0, 0};
    for (int i = 0; i < k; ++i) {
      const double reach = w * basis.col(i).cwiseAbs().sum() / 2;
      std::tie(lo[i], hi[i]) = covering_range(coords[i] - reach, coords[i] + reach, w);
    }
    for (std::int64_t p = lo[0]; p <= hi[0]; ++p)
      for (std::int64_t q = lo[1]; q <= hi[1]; ++q) out.push_back({p, q, 0});
  }
  return Cover(k, a.level(), a.base(), std::move(out));
}

std::vector<Eigen::VectorXd> sample_points(const PointMeasure& mu, int count, std::uint64_t seed) {
  if (count < 0) throw std::invalid_argument("sample_points: negative count");
  std::vector<double> cumulative(static_cast<std::size_t>(mu.size()));
  double total = 0;
  for (Eigen::Index j = 0; j < mu.size(); ++j) cumulative[static_cast<std::size_t>(j)] = total += mu.weights()[j];
  std::vector<Eigen::VectorXd> out;
  for (int i = 0; i < count; ++i) {
    RandomStream rng(seed, static_cast<std::uint64_t>(i));
    const double target = rng.uniform() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
    if (it == cumulative.end()) --it;
    out.push_back(mu.points().col(it - cumulative.begin()));
  }
  return out;
}

SurveyResult slice_dimension_survey(const Cover& a, const std::vector<Eigen::VectorXd>& base_points, int lines,
                                    const SurveyOptions& options, std::uint64_t seed) {
  if (a.dim() != 2) throw std::invalid_argument("slice survey: planar covers only");
  if (lines < 1) throw std::invalid_argument("slice survey: need at least one line");
  if (options.level_max - options.level_min < 2) throw std::invalid_argument("slice survey: need at least 3 levels");
  std::vector<int> levels;
  std::vector<std::pair<AxisIndex, AxisIndex>> indices;
  for (int lv = options.level_min; lv <= options.level_max; ++lv) {
    const Cover dyadic = a.to_dyadic(lv);
    levels.push_back(lv);
    indices.emplace_back(make_index(dyadic, false), make_index(dyadic, true));
  }
  std::vector<std::vector<Subspace>> samples;
  for (std::size_t i = 0; i < base_points.size(); ++i)
    samples.push_back(sample_subspaces(2, 1, lines, splitmix64(seed ^ splitmix64(i))));

  const std::size_t per_point = static_cast<std::size_t>(lines);
  SurveyResult result;
  result.base_points = base_points;
  result.slopes.assign(base_points.size() * per_point, 0.0);
  for (const auto& lines_at_point : samples)
    for (const auto& line : lines_at_point) result.angles.push_back(line.angle());
  std::vector<char> nonempty(result.slopes.size(), 0);
  parallel_for(result.slopes.size(), [&](std::size_t job) {
    const auto& x = base_points[job / per_point];
    if (x.size() != 2) throw std::invalid_argument("slice survey: base points must be planar");
    const Eigen::Vector2d u = samples[job / per_point][job % per_point].basis().col(0);
    std::vector<std::int64_t> counts;
    for (std::size_t l = 0; l < levels.size(); ++l) {
      const double w = std::ldexp(1.0, -levels[l]);
      std::int64_t count = 0;
      planar_slab(indices[l].first, indices[l].second, w, Eigen::Vector2d(x), u, options.thickness_factor * w,
                  [&](std::int64_t, std::int64_t) { ++count; });
      if (l + 1 == levels.size()) nonempty[job] = count > 0;
      counts.push_back(std::max<std::int64_t>(count, 1));
    }
    result.slopes[job] = fit_counts(levels, counts).slope;
  });
  result.median = percentile(result.slopes, 0.5);
  result.p90 = percentile(result.slopes, 0.9);
  std::size_t hits = 0;
  for (char c : nonempty) hits += static_cast<std::size_t>(c);
  result.nonempty_fraction =
      result.slopes.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(result.slopes.size());
  return result;
}

Visibility visibility_fraction(const Cover& a, const Eigen::VectorXd& x, int directions, double delta,
                               std::uint64_t seed) {
  if (directions < 1) throw std::invalid_argument("visibility: need at least one direction");
  return visibility_at(a, prepare(a, delta), x, directions, seed, 0);
}

double VisibilityField::positive_fraction() const {
  if (fractions.empty()) return 0;
  std::size_t visible = 0;
  for (double f : fractions) visible += f > threshold ? 1 : 0;
  return static_cast<double>(visible) / static_cast<double>(fractions.size());
}

VisibilityField visibility_map(const Cover& a, const GridSpec& grid, int directions, double delta,
                               std::uint64_t seed, double threshold) {
  if (a.dim() != 2) throw std::invalid_argument("visibility map: planar covers only");
  if (grid.nx < 1 || grid.ny < 1 || !(grid.x1 > grid.x0) || !(grid.y1 > grid.y0))
    throw std::invalid_argument("visibility map: degenerate grid");
  if (directions < 1) throw std::invalid_argument("visibility: need at least one direction");
  const auto cells = prepare(a, delta);
  VisibilityField field;
  field.grid = grid;
  field.threshold = threshold;
  const double sx = (grid.x1 - grid.x0) / grid.nx, sy = (grid.y1 - grid.y0) / grid.ny;
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) field.points.emplace_back(grid.x0 + (i + 0.5) * sx, grid.y0 + (j + 0.5) * sy);
  field.fractions.assign(field.points.size(), 0.0);
  field.inside.assign(field.points.size(), 0);
  parallel_for(field.points.size(), [&](std::size_t i) {
    const auto v = visibility_at(a, cells, field.points[i], directions, seed, i);
    field.fractions[i] = v.fraction;
    field.inside[i] = v.inside ? 1 : 0;
  });
  return field;
}

}  // namespace fpl
