#include "fpl/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "fpl/grassmannian.hpp"
#include "fpl/parallel.hpp"

namespace fpl::counterexample {
namespace {

constexpr double kA2Floor = 0.1;
constexpr std::size_t kMaxSumPairs = 50'000'000;
constexpr std::size_t kMaxRectangles = 1'000'000;

IntervalSet neighbourhood(const std::vector<double>& centers, double radius) {
  IntervalSet out;
  out.reserve(centers.size());
  for (double c : centers) out.push_back({c - radius, c + radius});
  return out;
}

IntervalSet clamp_below(const IntervalSet& set, double floor) {
  IntervalSet out;
  for (const auto& iv : set) {
    if (iv.hi <= floor) continue;
    out.push_back({std::max(iv.lo, floor), iv.hi});
  }
  return out;
}

/// Places an affine copy of `unit` (its hull mapped onto each parent) inside
/// every parent interval.
IntervalSet nest(const IntervalSet& parents, const IntervalSet& unit) {
  double lo = unit.front().lo, hi = unit.front().hi;
  for (const auto& iv : unit) {
    lo = std::min(lo, iv.lo);
    hi = std::max(hi, iv.hi);
  }
  const double span = hi - lo;
  IntervalSet out;
  out.reserve(parents.size() * unit.size());
  for (const auto& p : parents) {
    const double w = p.length();
    for (const auto& iv : unit) out.push_back({p.lo + w * (iv.lo - lo) / span, p.lo + w * (iv.hi - lo) / span});
  }
  return out;
}

void append_range_cells(std::vector<Cell>& out, double xlo, double xhi, double ylo, double yhi, double h) {
  const auto [x0, x1] = covering_range(xlo, xhi, h);
  const auto [y0, y1] = covering_range(ylo, yhi, h);
  for (std::int64_t x = x0; x <= x1; ++x)
    for (std::int64_t y = y0; y <= y1; ++y) out.push_back({x, y, 0});
}

}  // namespace

std::int64_t power_floor(std::int64_t n, double exponent) {
  const double x = std::pow(static_cast<double>(n), exponent);
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, x)) return static_cast<std::int64_t>(nearest);
  return static_cast<std::int64_t>(std::floor(x));
}

StageParams::StageParams(std::int64_t n, double s, double r_prime) : n_(n), s_(s), r_prime_(r_prime) {
  if (n < 2) throw std::invalid_argument("stage: n must be at least 2");
  if (!(s > 1 && s < 2)) throw std::invalid_argument("stage: s must lie in (1, 2), so that r = 1/s is in (1/2, 1)");
  if (!(r_prime > r())) throw std::invalid_argument("stage: r' must exceed r = 1/s");
  k1_ = power_floor(n, r());
  k2_ = power_floor(n, 1 - r());
  kb_ = power_floor(n, 2 * r() - 1);
  if (k1_ < 1 || k2_ < 1 || kb_ < 1) throw std::invalid_argument("stage: every first-stage count must be positive");
  if (k2_ > k1_) throw std::logic_error("stage: K2 exceeds K1");
}

double StageParams::radius() const { return std::pow(static_cast<double>(n_), -r_prime_); }

double ArithmeticSet::value(std::int64_t k) const {
  return static_cast<double>(k) * std::pow(static_cast<double>(n), -scale_exponent);
}

std::vector<double> ArithmeticSet::values() const {
  std::vector<double> out;
  out.reserve(numerators.size());
  for (auto k : numerators) out.push_back(value(k));
  return out;
}

FirstStage first_stage(const StageParams& p) {
  auto range = [](std::int64_t count) {
    std::vector<std::int64_t> ks(static_cast<std::size_t>(count));
    for (std::int64_t k = 0; k < count; ++k) ks[static_cast<std::size_t>(k)] = k + 1;
    return ks;
  };
  FirstStage out;
  out.a1 = {range(p.k1()), p.r(), p.n()};
  out.a2 = {range(p.k2()), 1 - p.r(), p.n()};
  out.b = {range(p.kb()), 2 * p.r() - 1, p.n()};
  return out;
}

InclusionCertificate sum_product_inclusion(const ArithmeticSet& a2, const ArithmeticSet& b, const StageParams& p) {
  std::set<std::int64_t> products;
  for (auto j : a2.numerators)
    for (auto k : b.numerators) products.insert(j * k);
  InclusionCertificate cert;
  cert.products.assign(products.begin(), products.end());
  cert.max_product = cert.products.empty() ? 0 : cert.products.back();
  cert.bound = p.k1();
  cert.ok = !cert.products.empty() && cert.products.front() >= 1 && cert.max_product <= cert.bound;
  return cert;
}

std::int64_t sumset_cover_count(const ArithmeticSet& a1, const ArithmeticSet& a2, const ArithmeticSet& b,
                                const StageParams& p) {
  const auto cert = sum_product_inclusion(a2, b, p);
  if (!cert.ok) throw std::logic_error("sumset cover: A2' B' is not contained in the A1 grid");
  std::set<std::int64_t> sums;
  for (auto i : a1.numerators)
    for (auto q : cert.products) sums.insert(i + q);
  return static_cast<std::int64_t>(sums.size());
}

double first_stage_cover_length(const FirstStage& sets, const StageParams& p, std::int64_t count) {
  const auto a2 = sets.a2.values();
  const auto b = sets.b.values();
  const double max_a2 = *std::max_element(a2.begin(), a2.end());
  const double max_b = *std::max_element(b.begin(), b.end());
  const double eps = p.radius();
  const double rho = (1 + max_a2 + max_b) * eps + eps * eps;
  return static_cast<double>(count) * 2 * rho;
}

IntervalSet merge_intervals(IntervalSet set) {
  std::sort(set.begin(), set.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
  IntervalSet out;
  for (const auto& iv : set) {
    if (!out.empty() && iv.lo <= out.back().hi)
      out.back().hi = std::max(out.back().hi, iv.hi);
    else
      out.push_back(iv);
  }
  return out;
}

double total_length(const IntervalSet& merged) {
  double sum = 0;
  for (const auto& iv : merged) sum += iv.length();
  return sum;
}

IntervalSet intersect_intervals(const IntervalSet& a, const IntervalSet& b) {
  const auto x = merge_intervals(a), y = merge_intervals(b);
  IntervalSet out;
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    const double lo = std::max(x[i].lo, y[j].lo), hi = std::min(x[i].hi, y[j].hi);
    if (lo < hi) out.push_back({lo, hi});
    if (x[i].hi < y[j].hi)
      ++i;
    else
      ++j;
  }
  return out;
}

IntervalSet minkowski_sum(const IntervalSet& a, const IntervalSet& b) {
  if (a.size() * b.size() > kMaxSumPairs) throw std::invalid_argument("minkowski_sum: too many interval pairs");
  IntervalSet out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b) out.push_back({x.lo + y.lo, x.hi + y.hi});
  return merge_intervals(std::move(out));
}

IntervalSet product_set(const IntervalSet& a, const IntervalSet& b) {
  if (a.size() * b.size() > kMaxSumPairs) throw std::invalid_argument("product_set: too many interval pairs");
  IntervalSet out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b) {
      const double c[4] = {x.lo * y.lo, x.lo * y.hi, x.hi * y.lo, x.hi * y.hi};
      out.push_back({*std::min_element(c, c + 4), *std::max_element(c, c + 4)});
    }
  return merge_intervals(std::move(out));
}

ScheduleTooSlow::ScheduleTooSlow(int stage, double bound, const std::string& why)
    : std::runtime_error("stage " + std::to_string(stage) + ": cover bound " + std::to_string(bound) + " " + why),
      stage_(stage),
      bound_(bound) {}

ConstructionState iterate_construction(double s, const std::vector<StageSpec>& schedule,
                                       const ConstructionOptions& options) {
  if (schedule.empty()) throw std::invalid_argument("construction: empty schedule");
  ConstructionState state;
  state.s = s;
  state.r = 1 / s;
  state.schedule = schedule;
  for (std::size_t j = 0; j < schedule.size(); ++j) {
    const int stage = static_cast<int>(j) + 1;
    const StageParams p(schedule[j].n, s, schedule[j].r_prime);
    if (j > 0 && !(schedule[j].r_prime < schedule[j - 1].r_prime))
      throw std::invalid_argument("construction: r' must decrease strictly along the schedule");

    const auto sets = first_stage(p);
    StageReport report;
    report.spec = schedule[j];
    report.k1 = p.k1();
    report.k2 = p.k2();
    report.kb = p.kb();
    report.inclusion = sum_product_inclusion(sets.a2, sets.b, p);
    report.sumset_count = sumset_cover_count(sets.a1, sets.a2, sets.b, p);
    report.first_stage_length = first_stage_cover_length(sets, p, report.sumset_count);

    const double eps = p.radius();
    const auto u1 = neighbourhood(sets.a1.values(), eps);
    const auto u2 = neighbourhood(sets.a2.values(), eps);
    const auto ub = neighbourhood(sets.b.values(), eps);
    if (j == 0) {
      state.a1 = u1;
      state.a2 = u2;
      state.b = merge_intervals(ub);
    } else {
      if (state.a1.size() * u1.size() > options.max_intervals)
        throw std::invalid_argument("construction: stage " + std::to_string(stage) +
                                    " exceeds the interval budget; use smaller n or fewer stages");
      state.a1 = nest(state.a1, u1);
      state.a2 = nest(state.a2, u2);
      state.b = intersect_intervals(state.b, ub);
    }
    state.a2 = clamp_below(state.a2, kA2Floor);
    if (state.a2.empty()) throw std::invalid_argument("construction: A2 vanished below the 1/10 floor");
    if (state.b.empty()) throw std::invalid_argument("construction: B became empty");

    const auto products = product_set(state.b, merge_intervals(state.a2));
    state.c_cover = minkowski_sum(merge_intervals(state.a1), products);
    const double bound = total_length(state.c_cover);
    if (j > 0 && !(bound < state.cover_bound))
      throw ScheduleTooSlow(stage, bound, "did not drop below the previous stage");
    if (options.enforce_target && bound > 1.0 / stage) throw ScheduleTooSlow(stage, bound, "exceeds the 1/j target");
    state.cover_bound = bound;
    state.stage = stage;

    report.a1_intervals = state.a1.size();
    report.a2_intervals = state.a2.size();
    report.b_intervals = state.b.size();
    report.cover_bound = bound;
    report.a1_dim = stage_dimension(state.a1);
    report.a2_dim = stage_dimension(state.a2);
    report.b_dim = stage_dimension(state.b);
    state.stages.push_back(std::move(report));
  }
  return state;
}

std::vector<StageSpec> default_schedule(std::int64_t n1, double s, double r_prime1, int stages, double growth) {
  if (stages < 1) throw std::invalid_argument("default_schedule: need at least one stage");
  const double r = 1 / s;
  std::vector<StageSpec> out;
  std::int64_t n = n1;
  for (int j = 1; j <= stages; ++j) {
    out.push_back({n, r + (r_prime1 - r) / j});
    if (j == stages) break;
    const double target = std::pow(static_cast<double>(n), growth);
    if (target > 9e15) throw std::invalid_argument("default_schedule: n overflows; lower growth or stages");
    const auto centre = static_cast<std::int64_t>(std::llround(target));
    const std::int64_t window = std::min<std::int64_t>(100'000, std::max<std::int64_t>(1, centre / 10));
    std::int64_t best = centre;
    double best_err = std::numeric_limits<double>::infinity();
    for (std::int64_t m = std::max<std::int64_t>(2, centre - window); m <= centre + window; ++m) {
      double err = 0;
      for (double e : {r, 1 - r, 2 * r - 1}) {
        const double x = std::pow(static_cast<double>(m), e);
        err += std::abs(x - std::round(x)) / std::max(1.0, x);
      }
      if (err < best_err - 1e-15) {
        best_err = err;
        best = m;
      }
    }
    n = best;
  }
  return out;
}

double stage_dimension(const IntervalSet& constituents) {
  if (constituents.empty()) throw std::invalid_argument("stage_dimension: empty set");
  double mean = 0;
  for (const auto& iv : constituents) mean += iv.length();
  mean /= static_cast<double>(constituents.size());
  if (!(mean > 0 && mean < 1)) throw std::invalid_argument("stage_dimension: mean length must lie in (0, 1)");
  return std::log(static_cast<double>(constituents.size())) / -std::log(mean);
}

Eigen::Vector2d projective_map(const Eigen::Vector2d& p) {
  if (p.y() == 0) throw std::domain_error("projective map: undefined on the x-axis");
  return {p.x() / p.y(), 1 / p.y()};
}

Eigen::Vector2d projective_pullback(double u, double v) {
  if (v == 0) throw std::domain_error("projective pull-back: v = 0");
  if (v < kA2Floor) throw std::invalid_argument("projective pull-back: v must be at least 1/10");
  return {u / v, 1 / v};
}

LineImage map_line(double b, const Eigen::Vector2d& e) {
  if (e.y() == 0) throw std::domain_error("map_line: horizontal line has no finite image");
  return {b, e.x() / e.y()};
}

Cover pullback_cover(const ConstructionState& state, int level) {
  if (state.a1.size() * state.a2.size() > kMaxRectangles)
    throw std::invalid_argument("pull-back cover: more than 1e6 constituent rectangles");
  const double h = std::ldexp(1.0, -level);
  std::vector<Cell> cells;
  for (const auto& v : state.a2) {
    for (const auto& u : state.a1) {
      const double q[4] = {u.lo / v.lo, u.lo / v.hi, u.hi / v.lo, u.hi / v.hi};
      append_range_cells(cells, *std::min_element(q, q + 4), *std::max_element(q, q + 4), 1 / v.hi, 1 / v.lo, h);
    }
  }
  return Cover(2, level, 2, std::move(cells));
}

Cover planar_b_cover(const ConstructionState& state, int level, bool mirrored) {
  const double h = std::ldexp(1.0, -level);
  std::vector<Cell> cells;
  for (const auto& iv : state.b) {
    if (mirrored)
      append_range_cells(cells, iv.lo, iv.hi, 0, 0, h);
    else
      append_range_cells(cells, -iv.hi, -iv.lo, 0, 0, h);
  }
  return Cover(2, level, 2, std::move(cells));
}

Cover c_cover_cells(const ConstructionState& state, int level) {
  const double h = std::ldexp(1.0, -level);
  std::vector<Cell> cells;
  for (const auto& iv : state.c_cover) {
    const auto [lo, hi] = covering_range(iv.lo, iv.hi, h);
    for (std::int64_t k = lo; k <= hi; ++k) cells.push_back({k, 0, 0});
  }
  return Cover(1, level, 2, std::move(cells));
}

DisjointnessResult disjointness_experiment(const ConstructionState& state, int line_samples, int level,
                                           std::uint64_t seed) {
  if (line_samples < 1) throw std::invalid_argument("disjointness: need at least one line");
  const Cover a = pullback_cover(state, level);
  const Cover b = planar_b_cover(state, level, false);
  const Cover b_mirror = planar_b_cover(state, level, true);
  const Cover c = c_cover_cells(state, level);
  const double h = std::ldexp(1.0, -level);

  const auto lines = sample_subspaces(2, 1, line_samples, seed);
  std::vector<LineOutcome> outcomes(lines.size());
  std::vector<char> mirrored(lines.size(), 0);
  parallel_for(lines.size(), [&](std::size_t i) {
    const auto& line = lines[i];
    const Cover pa = project_cover(a, line, level);
    auto disjoint_from = [&](const Cover& other) {
      const Cover pb = project_cover(other, line, level);
      for (const auto& cell : pb.cells())
        if (pa.contains(cell)) return false;
      return true;
    };
    LineOutcome out;
    out.angle = line.angle();
    out.disjoint = disjoint_from(b);
    mirrored[i] = disjoint_from(b_mirror) ? 1 : 0;
    const Eigen::Vector2d e = line.complement().col(0);
    if (std::abs(e.y()) > 1e-12) {
      const double slope = e.x() / e.y();
      const auto& cells = c.cells();
      // Cells are sorted; find the last one starting at or below the slope.
      const auto k = cell_index(slope, h);
      auto it = std::lower_bound(cells.begin(), cells.end(), Cell{k, 0, 0});
      double dist = std::numeric_limits<double>::infinity();
      if (it != cells.end()) {
        const double lo = static_cast<double>((*it)[0]) * h;
        dist = std::min(dist, (*it)[0] == k ? 0.0 : lo - slope);
      }
      if (it != cells.begin()) {
        const double hi = static_cast<double>((*std::prev(it))[0] + 1) * h;
        dist = std::min(dist, std::max(0.0, slope - hi));
      }
      out.exceptional_dist = dist;
    }
    outcomes[i] = out;
  });

  DisjointnessResult result;
  result.a_cells = a.size();
  result.b_cells = b.size();
  std::size_t disjoint = 0, failed = 0, localized = 0, mirror_disjoint = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    mirror_disjoint += static_cast<std::size_t>(mirrored[i]);
    if (outcomes[i].disjoint) {
      ++disjoint;
    } else {
      ++failed;
      result.exceptional_angles.push_back(outcomes[i].angle);
      if (outcomes[i].exceptional_dist <= 2 * h) ++localized;
    }
  }
  const auto total = static_cast<double>(outcomes.size());
  result.fraction_disjoint = static_cast<double>(disjoint) / total;
  result.mirrored_fraction_disjoint = static_cast<double>(mirror_disjoint) / total;
  result.localized_fraction = failed == 0 ? 1.0 : static_cast<double>(localized) / static_cast<double>(failed);
  result.lines = std::move(outcomes);
  return result;
}

}  // namespace fpl::counterexample
