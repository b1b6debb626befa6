#include "fpl/energy.hpp"

#include "fpl/grassmannian.hpp"

namespace fpl {

double projected_overlap(const PointMeasure& mu, const PointMeasure& nu, int line_samples, int bin_level,
                         std::uint64_t seed) {
  if (mu.dim() != 2 || nu.dim() != 2) throw std::invalid_argument("projected_overlap: planar measures required");
  const auto lines = sample_subspaces(2, 1, line_samples, seed);
  const double width = std::ldexp(1.0, -bin_level);

  std::vector<double> per_line(lines.size());
  parallel_for(lines.size(), [&](std::size_t k) {
    const Eigen::RowVectorXd tm = lines[k].basis().transpose() * mu.points();
    const Eigen::RowVectorXd tn = lines[k].basis().transpose() * nu.points();
    const double lo = std::min(tm.minCoeff(), tn.minCoeff());
    const double hi = std::max(tm.maxCoeff(), tn.maxCoeff());
    const auto first = static_cast<std::int64_t>(std::floor(lo / width));
    const auto bins = static_cast<std::size_t>(static_cast<std::int64_t>(std::floor(hi / width)) - first + 1);
    std::vector<double> mass_mu(bins, 0.0), mass_nu(bins, 0.0);
    for (Eigen::Index j = 0; j < tm.size(); ++j)
      mass_mu[static_cast<std::size_t>(static_cast<std::int64_t>(std::floor(tm[j] / width)) - first)] +=
          mu.weights()[j];
    for (Eigen::Index j = 0; j < tn.size(); ++j)
      mass_nu[static_cast<std::size_t>(static_cast<std::int64_t>(std::floor(tn[j] / width)) - first)] +=
          nu.weights()[j];
    CompensatedSum<double> sum;
    for (std::size_t b = 0; b < bins; ++b) sum.add(mass_mu[b] * mass_nu[b]);
    per_line[k] = sum.value() / width;
  });
  CompensatedSum<double> total;
  for (double v : per_line) total.add(v);
  return total.value() / static_cast<double>(lines.size());
}

IdentityCheck projection_energy_identity_check(const PointMeasure& mu, const PointMeasure& nu, int line_samples,
                                               int bin_level, double delta, std::uint64_t seed) {
  IdentityCheck out;
  out.lines = line_samples;
  out.bin_level = bin_level;
  out.lhs = projected_overlap(mu, nu, line_samples, bin_level, seed);
  out.rhs = mutual_energy(mu, nu, 1.0, delta).value;
  out.ratio = out.lhs / out.rhs;
  return out;
}

}  // namespace fpl
