#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "fpl/cover.hpp"

namespace fpl {

/// Least-squares fit of log2(count) against dyadic level.
struct ScalingFit {
  std::vector<int> levels;
  std::vector<std::int64_t> counts;
  double slope = 0;
  double intercept = 0;
  /// Coefficient of determination; 1 when the counts are constant.
  double r2 = 1;
};

ScalingFit fit_counts(const std::vector<int>& levels, const std::vector<std::int64_t>& counts);

/// Box-counting fit over dyadic levels [level_min, level_max].
///
/// On a dyadic cover, levels at or below the cover level are counted by exact
/// coarsening. Otherwise (finer levels, or non-dyadic covers) the occupied
/// dyadic cells of the cell centers are counted.
ScalingFit box_dimension(const Cover& set, int level_min, int level_max);
ScalingFit box_dimension(const Eigen::MatrixXd& points, int level_min, int level_max);

/// Occupied dyadic cells of `set` at `level`, counted as in box_dimension.
std::int64_t dyadic_count(const Cover& set, int level);

/// Default fit range: drops the three coarsest levels and the finest level
/// resolvable by the cover.
std::pair<int, int> default_fit_range(const Cover& set);

/// cell count times cell volume: an outer estimate of length (area, volume)
/// at the cover's scale.
double measure_estimate(const Cover& set);

/// Set operations on covers of equal dimension and base; a finer operand is
/// coarsened to the coarser level first.
Cover intersect_covers(const Cover& p, const Cover& q);
Cover union_covers(const Cover& p, const Cover& q);

/// Longest run of consecutive occupied cells of a 1-dim cover.
std::int64_t interior_run(const Cover& set);

/// measure_estimate >= tau at both levels.
bool stable_positive_measure(const Cover& coarse, const Cover& fine, double tau);

}  // namespace fpl
