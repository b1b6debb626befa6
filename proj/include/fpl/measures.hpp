#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "fpl/cover.hpp"

namespace fpl {

/// Finitely supported weighted point set standing in for a Borel measure.
///
/// Points are stored column-wise (dim x N). `resolution` is the spatial scale
/// below which the measure carries no information; kernel and ball
/// computations clamp at it.
template <typename Scalar>
class BasicPointMeasure {
 public:
  using Points = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Weights = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  BasicPointMeasure(Points points, Weights weights, Scalar resolution)
      : points_(std::move(points)), weights_(std::move(weights)), resolution_(resolution) {
    if (points_.rows() < 1 || points_.rows() > 3)
      throw std::invalid_argument("point measure dimension must be 1, 2 or 3");
    if (points_.cols() != weights_.size())
      throw std::invalid_argument("point measure: one weight per point required");
    if (!(resolution_ > Scalar(0))) throw std::invalid_argument("point measure: resolution must be positive");
    if ((weights_.array() < Scalar(0)).any())
      throw std::invalid_argument("point measure: weights must be non-negative");
    const Scalar mass = weights_.sum();
    if (!(mass > Scalar(0)) || !std::isfinite(static_cast<double>(mass)))
      throw std::invalid_argument("point measure: total mass must be finite and positive");
  }

  int dim() const { return static_cast<int>(points_.rows()); }
  Eigen::Index size() const { return points_.cols(); }
  const Points& points() const { return points_; }
  const Weights& weights() const { return weights_; }
  Scalar resolution() const { return resolution_; }
  Scalar total_mass() const { return weights_.sum(); }

  /// Diagonal of the bounding box; an upper bound for the support diameter.
  Scalar diameter() const {
    return (points_.rowwise().maxCoeff() - points_.rowwise().minCoeff()).norm();
  }

  template <typename Other>
  BasicPointMeasure<Other> cast() const {
    return BasicPointMeasure<Other>(points_.template cast<Other>(), weights_.template cast<Other>(),
                                    static_cast<Other>(resolution_));
  }

 private:
  Points points_;
  Weights weights_;
  Scalar resolution_;
};

using PointMeasure = BasicPointMeasure<double>;

/// Level-`level` cover of the self-similar subset of [0,1] with contraction
/// 1/base and translations `digits`, on the base-`base` grid.
Cover cantor_digit_set(int base, const std::vector<int>& digits, int level);

/// Cartesian product of two covers on the same grid. A coarser factor is
/// refined to the finer level first; factors on different bases are rejected.
Cover product_cover(const Cover& a, const Cover& b);

/// Equal-weight atoms at the cell centers; resolution is the cell width.
PointMeasure natural_measure(const Cover& cover);

struct FrostmanReport {
  double exponent = 0;
  /// max over sampled (x, r) of mu(B(x, r)) / r^s, open balls.
  double sup_ratio = 0;
  std::int64_t samples = 0;
  double radius_at_sup = 0;
  /// Ratio blows up toward the resolution: the sup over r <= 4 resolution
  /// exceeds twice the sup over the upper half (log scale) of the radii.
  bool unbounded = false;
};

/// Ball-mass diagnostic for the condition mu(B(x, r)) <= C r^s.
///
/// Centers are `ball_samples` support points drawn with replacement from the
/// seed. Radii run over the ladder resolution * 2^i up to max(diameter, 1),
/// plus that endpoint, and every center is evaluated at every radius.
FrostmanReport frostman_check(const PointMeasure& mu, double s, int ball_samples, std::uint64_t seed);

/// CSV with header "x[,y[,z]],w".
void write_measure_csv(std::ostream& out, const PointMeasure& mu);
PointMeasure read_measure_csv(std::istream& in, double resolution);

}  // namespace fpl
