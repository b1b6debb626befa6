#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "fpl/measures.hpp"
#include "fpl/numeric.hpp"
#include "fpl/parallel.hpp"

namespace fpl {

template <typename Scalar>
struct BasicEnergyResult {
  Scalar value = 0;
  Scalar exponent = 0;
  /// Kernel clamp scale: the kernel is min(|x|, truncation)^-exponent.
  Scalar truncation = 0;
  std::int64_t pair_count = 0;
};

using EnergyResult = BasicEnergyResult<double>;

/// Largest support size accepted by the O(N M) kernel sums.
inline constexpr Eigen::Index max_energy_points = 200000;

/// sum_ij w_i v_j min(|x_i - y_j|, delta)^-u.
///
/// Rows of mu are split into fixed blocks of 64; each block is summed with a
/// compensated accumulator and the block sums are combined in index order,
/// so the value is bit-identical for any worker count.
template <typename Scalar>
BasicEnergyResult<Scalar> mutual_energy(const BasicPointMeasure<Scalar>& mu, const BasicPointMeasure<Scalar>& nu,
                                        Scalar u, Scalar delta) {
  if (!(u > 0)) throw std::invalid_argument("energy: exponent must be positive");
  if (!(delta > 0)) throw std::invalid_argument("energy: truncation must be positive");
  if (mu.dim() != nu.dim()) throw std::invalid_argument("energy: dimension mismatch");
  if (mu.size() > max_energy_points || nu.size() > max_energy_points)
    throw std::invalid_argument("energy: support larger than the O(N^2) cap");

  const auto& x = mu.points();
  const auto& y = nu.points();
  const auto& wx = mu.weights();
  const auto& wy = nu.weights();
  const Scalar delta2 = delta * delta;
  const Scalar half = -u / 2;
  const int dim = mu.dim();

  auto kernel = [&](Scalar r2) -> Scalar {
    r2 = std::max(r2, delta2);
    if (u == Scalar(1)) return Scalar(1) / std::sqrt(r2);
    if (u == Scalar(2)) return Scalar(1) / r2;
    return std::pow(r2, half);
  };

  constexpr Eigen::Index block = 64;
  const Eigen::Index blocks = (x.cols() + block - 1) / block;
  std::vector<Scalar> partial(static_cast<std::size_t>(blocks));
  parallel_for(partial.size(), [&](std::size_t b) {
    CompensatedSum<Scalar> sum;
    const Eigen::Index begin = static_cast<Eigen::Index>(b) * block;
    const Eigen::Index end = std::min(x.cols(), begin + block);
    for (Eigen::Index i = begin; i < end; ++i) {
      CompensatedSum<Scalar> row;
      for (Eigen::Index j = 0; j < y.cols(); ++j) {
        Scalar r2 = 0;
        for (int d = 0; d < dim; ++d) {
          const Scalar diff = x(d, i) - y(d, j);
          r2 += diff * diff;
        }
        row.add(wy[j] * kernel(r2));
      }
      sum.add(wx[i] * row.value());
    }
    partial[b] = sum.value();
  });
  CompensatedSum<Scalar> total;
  for (Scalar p : partial) total.add(p);
  return {total.value(), u, delta, static_cast<std::int64_t>(x.cols()) * static_cast<std::int64_t>(y.cols())};
}

/// Clamped s-energy; the diagonal contributes w_i^2 delta^-s.
template <typename Scalar>
BasicEnergyResult<Scalar> riesz_energy(const BasicPointMeasure<Scalar>& mu, Scalar s, Scalar delta) {
  return mutual_energy(mu, mu, s, delta);
}

struct IdentityCheck {
  /// Line average of sum_bins m_mu(b) m_nu(b) / binwidth.
  double lhs = 0;
  /// Clamped mutual 1-energy.
  double rhs = 0;
  double ratio = 0;
  int lines = 0;
  int bin_level = 0;
};

/// Compares the line-averaged overlap of the binned projected densities of
/// two planar measures with their mutual 1-energy. The ratio estimates the
/// constant relating the two sides (1/pi for lines in the plane).
IdentityCheck projection_energy_identity_check(const PointMeasure& mu, const PointMeasure& nu, int line_samples,
                                               int bin_level, double delta, std::uint64_t seed);

/// Line-average overlap alone (the lhs above).
double projected_overlap(const PointMeasure& mu, const PointMeasure& nu, int line_samples, int bin_level,
                         std::uint64_t seed);

}  // namespace fpl
