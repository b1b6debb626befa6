#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "fpl/cover.hpp"

/// Construction of planar compact sets whose projections are disjoint on
/// almost every line, via a sum-product null set and a projective map.
namespace fpl::counterexample {

/// floor(n^exponent), snapping to the nearest integer when n^exponent is
/// within 1e-9 (relative) of it.
std::int64_t power_floor(std::int64_t n, double exponent);

/// One stage's parameters: r = 1/s, neighbourhood radius n^-r_prime and the
/// first-stage counts K1 = floor(n^r), K2 = floor(n^(1-r)), KB = floor(n^(2r-1)).
class StageParams {
 public:
  StageParams(std::int64_t n, double s, double r_prime);

  std::int64_t n() const { return n_; }
  double s() const { return s_; }
  double r() const { return 1 / s_; }
  double r_prime() const { return r_prime_; }
  std::int64_t k1() const { return k1_; }
  std::int64_t k2() const { return k2_; }
  std::int64_t kb() const { return kb_; }
  double radius() const;

 private:
  std::int64_t n_;
  double s_;
  double r_prime_;
  std::int64_t k1_, k2_, kb_;
};

/// {k n^-scale_exponent : k in numerators}.
struct ArithmeticSet {
  std::vector<std::int64_t> numerators;
  double scale_exponent = 0;
  std::int64_t n = 1;

  double value(std::int64_t k) const;
  std::vector<double> values() const;
};

struct FirstStage {
  ArithmeticSet a1, a2, b;
};

FirstStage first_stage(const StageParams& p);

struct InclusionCertificate {
  /// Distinct products j k, j in A2', k in B' (numerators), sorted.
  std::vector<std::int64_t> products;
  std::int64_t max_product = 0;
  /// K1: the products must not exceed it.
  std::int64_t bound = 0;
  bool ok = false;
};

/// Integer certificate that A2' B' lies in the grid {k / n^r : 1 <= k <= K1}.
/// Scale exponents add exactly ((1 - r) + (2r - 1) = r), so the check is on
/// numerators alone.
InclusionCertificate sum_product_inclusion(const ArithmeticSet& a2, const ArithmeticSet& b, const StageParams& p);

/// Number of distinct numerators of A1' + A2' B' on the grid n^-r; at most
/// 2 K1 - 1. Throws std::logic_error when the inclusion certificate fails.
std::int64_t sumset_cover_count(const ArithmeticSet& a1, const ArithmeticSet& a2, const ArithmeticSet& b,
                                const StageParams& p);

/// Length bound count * 2 rho for the n^-r_prime neighbourhoods, where rho
/// bounds how far a1 + b a2 strays from its grid point:
/// rho = (1 + max A2' + max B') n^-r_prime + n^-2 r_prime.
double first_stage_cover_length(const FirstStage& sets, const StageParams& p, std::int64_t count);

struct Interval {
  double lo = 0;
  double hi = 0;
  double length() const { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

using IntervalSet = std::vector<Interval>;

IntervalSet merge_intervals(IntervalSet set);
double total_length(const IntervalSet& merged);
IntervalSet intersect_intervals(const IntervalSet& a, const IntervalSet& b);
/// {x + y}, merged.
IntervalSet minkowski_sum(const IntervalSet& a, const IntervalSet& b);
/// {x y}, merged.
IntervalSet product_set(const IntervalSet& a, const IntervalSet& b);

struct StageSpec {
  std::int64_t n = 0;
  double r_prime = 0;
};

struct StageReport {
  StageSpec spec;
  std::int64_t k1 = 0, k2 = 0, kb = 0;
  InclusionCertificate inclusion;
  std::int64_t sumset_count = 0;
  double first_stage_length = 0;
  std::size_t a1_intervals = 0, a2_intervals = 0, b_intervals = 0;
  double cover_bound = 0;
  /// stage_dimension of A1, A2 and B after this stage.
  double a1_dim = 0, a2_dim = 0, b_dim = 0;
};

struct ConstructionState {
  double s = 0;
  double r = 0;
  std::vector<StageSpec> schedule;
  int stage = 0;
  /// Constituent intervals; A1 and A2 counts multiply across stages. A2 is
  /// clamped to [1/10, inf).
  IntervalSet a1, a2;
  /// Intersection of the single-stage B neighbourhoods, merged.
  IntervalSet b;
  /// Merged interval cover of C = A1 + B A2.
  IntervalSet c_cover;
  /// Length of c_cover.
  double cover_bound = 0;
  std::vector<StageReport> stages;
};

/// Raised when a stage fails to shrink the cover of C: the bound did not
/// drop strictly below the previous stage, or (when enforced) exceeds 1/j.
class ScheduleTooSlow : public std::runtime_error {
 public:
  ScheduleTooSlow(int stage, double bound, const std::string& why);
  int stage() const { return stage_; }
  double bound() const { return bound_; }

 private:
  int stage_;
  double bound_;
};

struct ConstructionOptions {
  bool enforce_target = true;
  std::size_t max_intervals = 4'000'000;
};

/// Iterated Cantor scheme: stage 1 is the n_1^-r'_1 neighbourhood of the
/// first-stage sets; stage j places an affinely scaled copy of the stage-j
/// first-stage neighbourhoods (their hull mapped onto the parent) inside every
/// constituent interval of A1 and A2, and intersects B with the stage-j B
/// neighbourhood.
ConstructionState iterate_construction(double s, const std::vector<StageSpec>& schedule,
                                       const ConstructionOptions& options = {});

/// n_{j+1} is the integer near n_j^growth (within a 10% window, capped) whose
/// powers n^r, n^(1-r), n^(2r-1) are closest to integers;
/// r'_j = r + (r'_1 - r) / j.
std::vector<StageSpec> default_schedule(std::int64_t n1, double s, double r_prime1, int stages, double growth = 4);

/// log(count) / -log(mean length): the scale-free dimension proxy of a union
/// of comparable intervals.
double stage_dimension(const IntervalSet& constituents);

/// F(x, y) = (x, 1) / y.
Eigen::Vector2d projective_map(const Eigen::Vector2d& p);
/// F^-1(u, v) = (u / v, 1 / v). Requires v >= 1/10.
Eigen::Vector2d projective_pullback(double u, double v);

/// F maps l'(b, e) = (b, 0) + span(e) onto l(b, e1/e2) = span(b, 1) + (e1/e2, 0).
struct LineImage {
  double b = 0;
  double slope = 0;
};
LineImage map_line(double b, const Eigen::Vector2d& e);

struct LineOutcome {
  double angle = 0;
  bool disjoint = false;
  /// Distance from e1/e2 (e the unit normal of the line) to the cover of C.
  double exceptional_dist = std::numeric_limits<double>::infinity();
};

struct DisjointnessResult {
  double fraction_disjoint = 0;
  std::vector<double> exceptional_angles;
  std::vector<LineOutcome> lines;
  /// Fraction of failing lines with exceptional_dist <= 2 * 2^-level (1 when
  /// nothing fails).
  double localized_fraction = 1;
  /// Same test with +B x {0} in place of -B x {0}.
  double mirrored_fraction_disjoint = 0;
  std::size_t a_cells = 0;
  std::size_t b_cells = 0;
};

/// Covers of A = F^-1(A1 x A2) (pull-back bounding box of every constituent
/// rectangle) and of -B x {0} at `level`; per sampled line, tests whether the
/// projected covers are disjoint.
DisjointnessResult disjointness_experiment(const ConstructionState& state, int line_samples, int level,
                                           std::uint64_t seed);

/// Dyadic covers used by disjointness_experiment.
Cover pullback_cover(const ConstructionState& state, int level);
Cover planar_b_cover(const ConstructionState& state, int level, bool mirrored = false);
Cover c_cover_cells(const ConstructionState& state, int level);

}  // namespace fpl::counterexample
