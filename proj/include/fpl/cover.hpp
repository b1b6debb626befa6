#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace fpl {

/// Integer cell index; components beyond the cover dimension are zero.
using Cell = std::array<std::int64_t, 3>;

/// Set of occupied grid cells at one level of a base-b grid.
///
/// Cell c covers the half-open box prod [c_i w, (c_i + 1) w) with
/// w = base^-level. Cells are kept sorted and duplicate free. Base 2 is the
/// dyadic grid; other bases appear for self-similar generators whose natural
/// grid is not dyadic. Indices may be negative or exceed base^level, so
/// covers are not confined to the unit cube.
class Cover {
 public:
  Cover(int dim, int level, int base = 2);
  Cover(int dim, int level, int base, std::vector<Cell> cells);

  int dim() const { return dim_; }
  int level() const { return level_; }
  int base() const { return base_; }
  double cell_width() const;

  std::span<const Cell> cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }
  bool contains(const Cell& cell) const;

  Eigen::VectorXd lower_corner(const Cell& cell) const;
  Eigen::VectorXd center(const Cell& cell) const;
  /// dim x size matrix of cell centers.
  Eigen::MatrixXd centers() const;

  /// Parent cells one level up.
  Cover coarsened() const;
  Cover coarsened_to(int level) const;
  /// Every cell split into base^dim children.
  Cover refined() const;
  Cover refined_to(int level) const;
  /// Conservative re-grid onto the dyadic grid at `level`: the result covers
  /// every box of this cover.
  Cover to_dyadic(int level) const;

  friend bool operator==(const Cover&, const Cover&) = default;

 private:
  int dim_;
  int level_;
  int base_;
  std::vector<Cell> cells_;
};

/// Dyadic cover of the cells containing the given points (dim x N).
Cover cover_points(const Eigen::MatrixXd& points, int level);

/// Floor of x / width as a cell index, robust to x / width landing a few ulps
/// below an integer.
std::int64_t cell_index(double x, double width);

/// Text format: "level k", "dim d", optional "base b", then one
/// whitespace-separated integer tuple per line.
void write_cover(std::ostream& out, const Cover& cover);
Cover read_cover(std::istream& in);

}  // namespace fpl

namespace fpl {

/// Cell index range [first, last] at width h covering the closed interval
/// [lo, hi]; an upper end sitting on a cell boundary does not open a new cell.
inline std::pair<std::int64_t, std::int64_t> covering_range(double lo, double hi, double h) {
  const std::int64_t first = cell_index(lo, h);
  const double top = hi / h;
  std::int64_t last = static_cast<std::int64_t>(std::ceil(top - 1e-9 * std::max(1.0, std::abs(top)))) - 1;
  return {first, std::max(first, last)};
}

}  // namespace fpl
