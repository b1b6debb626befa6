#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "fpl/cover.hpp"
#include "fpl/grassmannian.hpp"
#include "fpl/measures.hpp"

namespace fpl {

/// The affine plane V + x thickened by `thickness`.
struct SliceSpec {
  Eigen::VectorXd base_point;
  Subspace subspace;
  double thickness = 0;
};

/// Cells of `a` whose box lies within thickness/2 of V + x (exact box-to-plane
/// distance in codimension 1; centre distance plus half-diagonal for a line
/// in space). Any point of `a` within thickness/2 of the plane lies in one of
/// them.
Cover slab_cells(const Cover& a, const SliceSpec& spec);

/// The slab cells re-coordinatized in V's basis: every V-coordinate cell of
/// the cell width touched by the projection of a slab cell. Dimension dim(V).
/// Throws std::invalid_argument when thickness is below the cell width.
Cover slice_cover(const Cover& a, const SliceSpec& spec);

struct SurveyResult {
  /// One slope per (base point, line), base point major.
  std::vector<double> slopes;
  std::vector<Eigen::VectorXd> base_points;
  /// Line angle of each slope.
  std::vector<double> angles;
  double median = 0;
  double p90 = 0;
  /// Fraction of slices that are nonempty at the finest level.
  double nonempty_fraction = 0;
};

struct SurveyOptions {
  int level_min = 5;
  int level_max = 11;
  /// Slab thickness as a multiple of the dyadic cell width at each level.
  double thickness_factor = 1;
};

/// For each base point, `lines` uniformly random lines through it; each slope
/// is the log2-count fit of the slab cells of `a` (coarsened to dyadic levels
/// level_min..level_max, thickness = factor * 2^-level). Empty levels count as
/// one cell so the fit stays defined. Planar covers only.
SurveyResult slice_dimension_survey(const Cover& a, const std::vector<Eigen::VectorXd>& base_points, int lines,
                                    const SurveyOptions& options, std::uint64_t seed);

/// `count` points drawn from a discrete measure in proportion to its weights.
std::vector<Eigen::VectorXd> sample_points(const PointMeasure& mu, int count, std::uint64_t seed);

struct Visibility {
  double fraction = 0;
  /// Set when x lies inside a thickened cell; fraction is then 1.
  bool inside = false;
};

/// Fraction of `directions` sampled lines through x (antipodes identified)
/// that meet the cover with every cell thickened to side `delta` about its
/// centre. In the plane the directions are stratified: theta_k = pi (k + U_k) / D.
/// In space they are uniform on the projective plane.
Visibility visibility_fraction(const Cover& a, const Eigen::VectorXd& x, int directions, double delta,
                               std::uint64_t seed);

/// Centres of an nx x ny grid of equal boxes on [x0, x1] x [y0, y1], so no
/// grid point sits on a box edge.
struct GridSpec {
  double x0 = -1, x1 = 2, y0 = -1, y1 = 2;
  int nx = 64, ny = 64;
};

struct VisibilityField {
  GridSpec grid;
  /// Grid points in row-major order (y outer, x inner).
  std::vector<Eigen::Vector2d> points;
  std::vector<double> fractions;
  std::vector<char> inside;
  /// A point counts as visible when its fraction exceeds this.
  double threshold = 0;

  double positive_fraction() const;
};

/// visibility_fraction at every grid point; point i uses the stream (seed, i).
VisibilityField visibility_map(const Cover& a, const GridSpec& grid, int directions, double delta,
                               std::uint64_t seed, double threshold = 0);

}  // namespace fpl
