#include "fpl/cover.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace fpl {
namespace {

void normalize(std::vector<Cell>& cells) {
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t ipow(std::int64_t base, int exponent) {
  std::int64_t result = 1;
  for (int i = 0; i < exponent; ++i) result *= base;
  return result;
}

}  // namespace

Cover::Cover(int dim, int level, int base) : Cover(dim, level, base, {}) {}

Cover::Cover(int dim, int level, int base, std::vector<Cell> cells)
    : dim_(dim), level_(level), base_(base), cells_(std::move(cells)) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("cover dimension must be 1, 2 or 3");
  if (level < 0) throw std::invalid_argument("cover level must be non-negative");
  if (base < 2) throw std::invalid_argument("cover base must be at least 2");
  for (auto& c : cells_)
    for (int i = dim; i < 3; ++i) c[i] = 0;
  normalize(cells_);
}

double Cover::cell_width() const {
  if (base_ == 2) return std::ldexp(1.0, -level_);
  return std::pow(static_cast<double>(base_), -level_);
}

bool Cover::contains(const Cell& cell) const {
  return std::binary_search(cells_.begin(), cells_.end(), cell);
}

Eigen::VectorXd Cover::lower_corner(const Cell& cell) const {
  const double w = cell_width();
  Eigen::VectorXd x(dim_);
  for (int i = 0; i < dim_; ++i) x[i] = static_cast<double>(cell[i]) * w;
  return x;
}

Eigen::VectorXd Cover::center(const Cell& cell) const {
  return lower_corner(cell).array() + 0.5 * cell_width();
}

Eigen::MatrixXd Cover::centers() const {
  Eigen::MatrixXd out(dim_, static_cast<Eigen::Index>(cells_.size()));
  for (std::size_t j = 0; j < cells_.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = center(cells_[j]);
  return out;
}

Cover Cover::coarsened() const {
  if (level_ == 0) throw std::invalid_argument("cannot coarsen a level-0 cover");
  std::vector<Cell> parents;
  parents.reserve(cells_.size());
  for (const auto& c : cells_) {
    Cell p{0, 0, 0};
    for (int i = 0; i < dim_; ++i) p[i] = floor_div(c[i], base_);
    parents.push_back(p);
  }
  return Cover(dim_, level_ - 1, base_, std::move(parents));
}

Cover Cover::coarsened_to(int level) const {
  if (level > level_ || level < 0) throw std::invalid_argument("coarsened_to: level out of range");
  const std::int64_t factor = ipow(base_, level_ - level);
  std::vector<Cell> parents;
  parents.reserve(cells_.size());
  for (const auto& c : cells_) {
    Cell p{0, 0, 0};
    for (int i = 0; i < dim_; ++i) p[i] = floor_div(c[i], factor);
    parents.push_back(p);
  }
  return Cover(dim_, level, base_, std::move(parents));
}

Cover Cover::refined() const { return refined_to(level_ + 1); }

Cover Cover::refined_to(int level) const {
  if (level < level_) throw std::invalid_argument("refined_to: level below current level");
  const std::int64_t factor = ipow(base_, level - level_);
  std::int64_t per_cell = 1;
  for (int i = 0; i < dim_; ++i) per_cell *= factor;
  std::vector<Cell> children;
  children.reserve(cells_.size() * static_cast<std::size_t>(per_cell));
  for (const auto& c : cells_) {
    for (std::int64_t k = 0; k < per_cell; ++k) {
      Cell child{0, 0, 0};
      std::int64_t rest = k;
      for (int i = 0; i < dim_; ++i) {
        child[i] = c[i] * factor + rest % factor;
        rest /= factor;
      }
      children.push_back(child);
    }
  }
  return Cover(dim_, level, base_, std::move(children));
}

std::int64_t cell_index(double x, double width) {
  const double q = x / width;
  const double r = std::round(q);
  if (std::abs(q - r) <= 1e-9 * std::max(1.0, std::abs(q))) return static_cast<std::int64_t>(r);
  return static_cast<std::int64_t>(std::floor(q));
}

Cover Cover::to_dyadic(int level) const {
  if (base_ == 2) return level <= level_ ? coarsened_to(level) : refined_to(level);
  const double w = cell_width();
  const double h = std::ldexp(1.0, -level);
  std::vector<Cell> out;
  for (const auto& c : cells_) {
    std::array<std::int64_t, 3> lo{0, 0, 0}, hi{0, 0, 0};
    for (int i = 0; i < dim_; ++i) {
      lo[i] = cell_index(static_cast<double>(c[i]) * w, h);
      // Upper face is open: the last covered cell is ceil(top / h) - 1.
      const double top = static_cast<double>(c[i] + 1) * w / h;
      hi[i] = std::max(lo[i], static_cast<std::int64_t>(std::ceil(top - 1e-9)) - 1);
    }
    for (std::int64_t x = lo[0]; x <= hi[0]; ++x)
      for (std::int64_t y = lo[1]; y <= hi[1]; ++y)
        for (std::int64_t z = lo[2]; z <= hi[2]; ++z) out.push_back({x, y, z});
  }
  return Cover(dim_, level, 2, std::move(out));
}

Cover cover_points(const Eigen::MatrixXd& points, int level) {
  const int dim = static_cast<int>(points.rows());
  const double h = std::ldexp(1.0, -level);
  std::vector<Cell> cells;
  cells.reserve(static_cast<std::size_t>(points.cols()));
  for (Eigen::Index j = 0; j < points.cols(); ++j) {
    Cell c{0, 0, 0};
    for (int i = 0; i < dim; ++i) c[i] = static_cast<std::int64_t>(std::floor(points(i, j) / h));
    cells.push_back(c);
  }
  return Cover(dim, level, 2, std::move(cells));
}

void write_cover(std::ostream& out, const Cover& cover) {
  out << "level " << cover.level() << '\n' << "dim " << cover.dim() << '\n';
  if (cover.base() != 2) out << "base " << cover.base() << '\n';
  for (const auto& c : cover.cells()) {
    for (int i = 0; i < cover.dim(); ++i) out << (i ? " " : "") << c[i];
    out << '\n';
  }
}

Cover read_cover(std::istream& in) {
  int level = -1, dim = 0, base = 2;
  std::vector<Cell> cells;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string head;
    fields >> head;
    if (head == "level") {
      fields >> level;
    } else if (head == "dim") {
      fields >> dim;
    } else if (head == "base") {
      fields >> base;
    } else {
      if (level < 0) throw std::runtime_error("cover file: cell tuple before 'level' line");
      std::istringstream tuple(line);
      Cell c{0, 0, 0};
      int count = 0;
      std::int64_t v;
      while (tuple >> v) {
        if (count == 3) throw std::runtime_error("cover file: tuple longer than 3");
        c[count++] = v;
      }
      if (!tuple.eof()) throw std::runtime_error("cover file: malformed tuple '" + line + "'");
      if (dim == 0) dim = count;
      if (count != dim) throw std::runtime_error("cover file: tuple length does not match dim");
      cells.push_back(c);
    }
  }
  if (level < 0) throw std::runtime_error("cover file: missing 'level' line");
  if (dim == 0) throw std::runtime_error("cover file: cannot infer dimension of empty cover");
  return Cover(dim, level, base, std::move(cells));
}

}  // namespace fpl
