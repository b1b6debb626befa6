#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "fpl/cover.hpp"
#include "fpl/measures.hpp"

namespace fpl {

/// Element of G(n, m) for (n, m) in {(2,1), (3,1), (3,2)}, held as an n x m
/// matrix with orthonormal columns.
///
/// Lines and planes are unoriented: e and -e give the same subspace. The
/// named constructors pick a canonical representative (angle in [0, pi);
/// direction or normal with its last non-zero coordinate positive).
template <typename Scalar>
class BasicSubspace {
 public:
  using Basis = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

  static BasicSubspace line_at_angle(Scalar theta) {
    const Scalar pi = std::numbers::pi_v<Scalar>;
    theta = std::fmod(theta, pi);
    if (theta < 0) theta += pi;
    Basis b(2, 1);
    b << std::cos(theta), std::sin(theta);
    return BasicSubspace(std::move(b));
  }

  static BasicSubspace line_along(Vector3 direction) {
    Basis b(3, 1);
    b.col(0) = canonical(direction);
    return BasicSubspace(std::move(b));
  }

  static BasicSubspace plane_normal_to(Vector3 normal) {
    const Vector3 nrm = canonical(normal);
    Eigen::Index axis;
    nrm.cwiseAbs().minCoeff(&axis);
    const Vector3 u = nrm.cross(Vector3::Unit(axis)).normalized();
    const Vector3 v = nrm.cross(u);
    Basis b(3, 2);
    b.col(0) = u;
    b.col(1) = v;
    return BasicSubspace(std::move(b));
  }

  /// Validates orthonormality to 1e-12 and a supported (n, m).
  static BasicSubspace from_basis(Basis basis) { return BasicSubspace(std::move(basis)); }

  int ambient_dim() const { return static_cast<int>(basis_.rows()); }
  int dim() const { return static_cast<int>(basis_.cols()); }
  const Basis& basis() const { return basis_; }

  Scalar angle() const {
    require(2, 1, "angle");
    Scalar theta = std::atan2(basis_(1, 0), basis_(0, 0));
    if (theta < 0) theta += std::numbers::pi_v<Scalar>;
    if (theta >= std::numbers::pi_v<Scalar>) theta -= std::numbers::pi_v<Scalar>;
    return theta;
  }

  /// Orthonormal basis of the orthogonal complement (n x (n - m)).
  Basis complement() const {
    const int n = ambient_dim();
    if (n == 2) {
      Basis c(2, 1);
      c << -basis_(1, 0), basis_(0, 0);
      return c;
    }
    if (dim() == 2) {
      Basis c(3, 1);
      c.col(0) = Vector3(basis_.col(0)).cross(Vector3(basis_.col(1)));
      return c;
    }
    return BasicSubspace::plane_normal_to(Vector3(basis_.col(0))).basis();
  }

  /// Coordinates of P_V x in the subspace basis.
  Vector coordinates(const Vector& x) const { return basis_.transpose() * x; }

 private:
  explicit BasicSubspace(Basis basis) : basis_(std::move(basis)) {
    const auto n = basis_.rows(), m = basis_.cols();
    if (!((n == 2 && m == 1) || (n == 3 && (m == 1 || m == 2))))
      throw std::invalid_argument("subspace: unsupported (n, m)");
    const Basis gram = basis_.transpose() * basis_;
    if ((gram - Basis::Identity(m, m)).cwiseAbs().maxCoeff() > Scalar(1e-12))
      throw std::invalid_argument("subspace: basis is not orthonormal");
  }

  static Vector3 canonical(Vector3 v) {
    const Scalar norm = v.norm();
    if (!(norm > 0)) throw std::invalid_argument("subspace: zero vector");
    v /= norm;
    for (int i = 2; i >= 0; --i) {
      if (v[i] > 0) break;
      if (v[i] < 0) {
        v = -v;
        break;
      }
    }
    return v;
  }

  void require(int n, int m, const char* what) const {
    if (ambient_dim() != n || dim() != m)
      throw std::invalid_argument(std::string("subspace: ") + what + " needs a different (n, m)");
  }

  Basis basis_;
};

using Subspace = BasicSubspace<double>;

/// Serialized as "2 1 theta", "3 1 x y z" (direction) or "3 2 x y z" (normal).
std::string format_subspace(const Subspace& v);
Subspace parse_subspace(const std::string& text);

/// i.i.d. draws from the rotation-invariant probability measure on G(n, m).
/// Sample i depends only on (seed, i).
std::vector<Subspace> sample_subspaces(int n, int m, int count, std::uint64_t seed);

template <typename Scalar>
struct BasicProjectedMeasure {
  BasicSubspace<Scalar> subspace;
  /// m-dimensional, coordinates in the subspace basis; weights and
  /// resolution unchanged.
  BasicPointMeasure<Scalar> inner;
};

using ProjectedMeasure = BasicProjectedMeasure<double>;

/// Push-forward of mu under the orthogonal projection onto v.
template <typename Scalar>
BasicProjectedMeasure<Scalar> project(const BasicPointMeasure<Scalar>& mu, const BasicSubspace<Scalar>& v) {
  if (mu.dim() != v.ambient_dim()) throw std::invalid_argument("project: dimension mismatch");
  typename BasicPointMeasure<Scalar>::Points coords = v.basis().transpose() * mu.points();
  return {v, BasicPointMeasure<Scalar>(std::move(coords), mu.weights(), mu.resolution())};
}

/// Dyadic cover at `out_level` (in subspace coordinates) containing P_V(A).
/// Each cell's corners are projected and the bounding box of their images is
/// covered.
Cover project_cover(const Cover& a, const Subspace& v, int out_level);

struct PolarCheck {
  double lhs = 0;
  double rhs = 0;
  /// lhs / rhs; NaN when rhs is zero.
  double ratio = 0;
};

/// Test functions on R^n: "gaussian" exp(-pi|x|^2), "gaussian-narrow"
/// exp(-4 pi|x|^2), "gaussian-shifted" exp(-pi|x-c|^2), "zero", and
/// "radial-power:<a>" |x|^-a on the unit ball.
bool is_catalog_function(const std::string& id);

/// Monte Carlo check of
///   int_G int_V f dH^m dgamma(V) = c(n, m) int |x|^(m-n) f(x) dx.
/// lhs averages a midpoint-rule integral of f over each sampled V; rhs is a
/// Cartesian midpoint rule for the weighted integral over R^n with the given
/// step. Node grids are symmetric with an even count, so no node sits at the
/// origin.
PolarCheck polar_formula_check(const std::string& function_id, int n, int m, int line_samples,
                               double quadrature_step, std::uint64_t seed);

}  // namespace fpl
