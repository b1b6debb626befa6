#include "fpl/grassmannian.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "fpl/numeric.hpp"
#include "fpl/parallel.hpp"
#include "fpl/rng.hpp"

namespace fpl {
namespace {

Eigen::Vector3d uniform_unit_vector(RandomStream& rng) {
  const double z = rng.uniform(-1.0, 1.0);
  const double phi = rng.uniform(0.0, 2 * std::numbers::pi);
  const double rho = std::sqrt(std::max(0.0, 1 - z * z));
  return {rho * std::cos(phi), rho * std::sin(phi), z};
}

struct TestFunction {
  enum class Kind { gaussian, zero, radial_power } kind = Kind::gaussian;
  double scale = 1;  // exp(-pi scale |x - shift|^2)
  Eigen::Vector3d shift = Eigen::Vector3d::Zero();
  double power = 0;
  double radius = 4;  // integration box half-width

  double operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    switch (kind) {
      case Kind::zero:
        return 0;
      case Kind::gaussian:
        return std::exp(-std::numbers::pi * scale * (x - shift.head(x.size())).squaredNorm());
      case Kind::radial_power: {
        const double r = x.norm();
        return r <= 1 ? std::pow(r, -power) : 0.0;
      }
    }
    return 0;
  }
};

TestFunction parse_function(const std::string& id, int n, int m) {
  TestFunction f;
  if (id == "gaussian") return f;
  if (id == "gaussian-narrow") {
    f.scale = 4;
    f.radius = 2;
    return f;
  }
  if (id == "gaussian-shifted") {
    f.shift = {0.3, -0.2, 0.1};
    f.radius = 4.5;
    return f;
  }
  if (id == "zero") {
    f.kind = TestFunction::Kind::zero;
    f.radius = 1;
    return f;
  }
  const std::string prefix = "radial-power:";
  if (id.rfind(prefix, 0) == 0) {
    f.kind = TestFunction::Kind::radial_power;
    f.radius = 1;
    try {
      f.power = std::stod(id.substr(prefix.size()));
    } catch (const std::exception&) {
      throw std::invalid_argument("polar_formula_check: bad exponent in '" + id + "'");
    }
    // Both sides reduce to int_0^1 r^(m - 1 - a) dr.
    if (f.power < 0 || f.power >= m)
      throw std::invalid_argument("polar_formula_check: '" + id + "' is not integrable for (n, m) = (" +
                                  std::to_string(n) + ", " + std::to_string(m) + ")");
    return f;
  }
  throw std::invalid_argument("polar_formula_check: unknown test function '" + id + "'");
}

// Midpoint nodes on [-radius, radius] with an even count.
std::vector<double> midpoint_nodes(double radius, double step, double& h) {
  const auto half = static_cast<std::size_t>(std::ceil(radius / step));
  h = radius / static_cast<double>(half);
  std::vector<double> t(2 * half);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = -radius + (static_cast<double>(i) + 0.5) * h;
  return t;
}

}  // namespace

std::string format_subspace(const Subspace& v) {
  std::ostringstream out;
  out << std::setprecision(17) << v.ambient_dim() << ' ' << v.dim();
  if (v.ambient_dim() == 2) {
    out << ' ' << v.angle();
  } else {
    const Eigen::Vector3d u = v.dim() == 1 ? Eigen::Vector3d(v.basis().col(0)) : Eigen::Vector3d(v.complement().col(0));
    out << ' ' << u.x() << ' ' << u.y() << ' ' << u.z();
  }
  return out.str();
}

Subspace parse_subspace(const std::string& text) {
  std::istringstream in(text);
  int n = 0, m = 0;
  if (!(in >> n >> m)) throw std::invalid_argument("parse_subspace: expected 'n m ...'");
  if (n == 2 && m == 1) {
    double theta;
    if (!(in >> theta)) throw std::invalid_argument("parse_subspace: missing angle");
    return Subspace::line_at_angle(theta);
  }
  Eigen::Vector3d u;
  if (!(in >> u.x() >> u.y() >> u.z())) throw std::invalid_argument("parse_subspace: missing vector");
  if (n == 3 && m == 1) return Subspace::line_along(u);
  if (n == 3 && m == 2) return Subspace::plane_normal_to(u);
  throw std::invalid_argument("parse_subspace: unsupported (n, m)");
}

std::vector<Subspace> sample_subspaces(int n, int m, int count, std::uint64_t seed) {
  if (!((n == 2 && m == 1) || (n == 3 && (m == 1 || m == 2))))
    throw std::invalid_argument("sample_subspaces: unsupported (n, m)");
  if (count < 1) throw std::invalid_argument("sample_subspaces: count must be positive");
  std::vector<Subspace> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    RandomStream rng(seed, static_cast<std::uint64_t>(i));
    if (n == 2)
      out.push_back(Subspace::line_at_angle(rng.uniform(0.0, std::numbers::pi)));
    else if (m == 1)
      out.push_back(Subspace::line_along(uniform_unit_vector(rng)));
    else
      out.push_back(Subspace::plane_normal_to(uniform_unit_vector(rng)));
  }
  return out;
}

Cover project_cover(const Cover& a, const Subspace& v, int out_level) {
  if (a.dim() != v.ambient_dim()) throw std::invalid_argument("project_cover: dimension mismatch");
  const int n = a.dim(), m = v.dim();
  const double w = a.cell_width();
  const double h = std::ldexp(1.0, -out_level);
  const auto& basis = v.basis();

  // Image of the unit box corners; a cell's image is the corner offset plus
  // w times these.
  const int corners = 1 << n;
  Eigen::MatrixXd offsets(m, corners);
  for (int k = 0; k < corners; ++k) {
    Eigen::VectorXd corner(n);
    for (int i = 0; i < n; ++i) corner[i] = (k >> i) & 1;
    offsets.col(k) = basis.transpose() * corner;
  }
  const Eigen::VectorXd off_min = offsets.rowwise().minCoeff() * w;
  const Eigen::VectorXd off_max = offsets.rowwise().maxCoeff() * w;

  constexpr std::size_t chunk = 4096;
  const std::size_t chunks = (a.size() + chunk - 1) / chunk;
  std::vector<std::vector<Cell>> parts(chunks);
  const auto cells = a.cells();
  parallel_for(chunks, [&](std::size_t p) {
    auto& out = parts[p];
    const std::size_t end = std::min(cells.size(), (p + 1) * chunk);
    for (std::size_t j = p * chunk; j < end; ++j) {
      std::array<std::pair<std::int64_t, std::int64_t>, 3> range{};
      for (int i = 0; i < m; ++i) {
        double base = 0;
        for (int k = 0; k < n; ++k) base += basis(k, i) * static_cast<double>(cells[j][k]);
        base *= w;
        range[i] = covering_range(base + off_min[i], base + off_max[i], h);
      }
      if (m == 1) {
        for (auto x = range[0].first; x <= range[0].second; ++x) out.push_back({x, 0, 0});
      } else {
        for (auto x = range[0].first; x <= range[0].second; ++x)
          for (auto y = range[1].first; y <= range[1].second; ++y) out.push_back({x, y, 0});
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  });
  std::vector<Cell> merged;
  for (auto& part : parts) merged.insert(merged.end(), part.begin(), part.end());
  return Cover(m, out_level, 2, std::move(merged));
}

bool is_catalog_function(const std::string& id) {
  try {
    parse_function(id, 3, 2);
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

PolarCheck polar_formula_check(const std::string& function_id, int n, int m, int line_samples,
                               double quadrature_step, std::uint64_t seed) {
  if (!(quadrature_step > 0)) throw std::invalid_argument("polar_formula_check: step must be positive");
  const TestFunction f = parse_function(function_id, n, m);
  const auto subspaces = sample_subspaces(n, m, line_samples, seed);

  double h = 0;
  const std::vector<double> nodes = midpoint_nodes(f.radius, quadrature_step, h);
  const auto count = nodes.size();

  std::vector<double> per_subspace(subspaces.size());
  parallel_for(subspaces.size(), [&](std::size_t k) {
    const auto& b = subspaces[k].basis();
    CompensatedSum<double> sum;
    if (m == 1) {
      for (double t : nodes) sum.add(f(b.col(0) * t));
      per_subspace[k] = sum.value() * h;
    } else {
      for (double t : nodes)
        for (double u : nodes) sum.add(f(b.col(0) * t + b.col(1) * u));
      per_subspace[k] = sum.value() * h * h;
    }
  });
  CompensatedSum<double> lhs;
  for (double v : per_subspace) lhs.add(v);

  const double weight_power = m - n;
  std::vector<double> slabs(count);
  parallel_for(count, [&](std::size_t i) {
    CompensatedSum<double> sum;
    Eigen::VectorXd x(n);
    x[0] = nodes[i];
    if (n == 2) {
      for (double y : nodes) {
        x[1] = y;
        sum.add(std::pow(x.norm(), weight_power) * f(x));
      }
    } else {
      for (double y : nodes)
        for (double z : nodes) {
          x[1] = y;
          x[2] = z;
          sum.add(std::pow(x.norm(), weight_power) * f(x));
        }
    }
    slabs[i] = sum.value();
  });
  CompensatedSum<double> rhs;
  for (double v : slabs) rhs.add(v);

  PolarCheck out;
  out.lhs = lhs.value() / static_cast<double>(subspaces.size());
  out.rhs = rhs.value() * std::pow(h, n);
  out.ratio = out.rhs != 0 ? out.lhs / out.rhs : std::numeric_limits<double>::quiet_NaN();
  return out;
}

}  // namespace fpl
