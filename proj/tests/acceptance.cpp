// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances and configurations are frozen here.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

#include "fpl/cli/config.hpp"
#include "fpl/cli/experiments.hpp"
#include "fpl/counterexample.hpp"
#include "fpl/energy.hpp"
#include "fpl/grassmannian.hpp"
#include "fpl/measures.hpp"
#include "fpl/rng.hpp"
#include "fpl/scaling.hpp"
#include "fpl/sections.hpp"

namespace ce = fpl::counterexample;
namespace cli = fpl::cli;
namespace fs = std::filesystem;

namespace {

constexpr double kInvPi = 1 / std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double x) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.4g", x);
  return buffer;
}

int failures = 0;

void criterion(int id, const std::string& name, double budget_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = seconds < budget_seconds;
  const bool pass = out.pass && in_time;
  if (!pass) ++failures;
  std::cout << (pass ? "[PASS] " : "[FAIL] ") << id << " " << name << ": " << out.detail << "; time " << num(seconds)
            << "s (budget " << num(budget_seconds) << "s)" << std::endl;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("fpl_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::map<std::string, std::string> run_cli(const std::string& experiment, std::map<std::string, std::string> given,
                                           const fs::path& out, int* exit_code = nullptr) {
  auto config = cli::resolve_config(experiment, given);
  config.out_dir = out;
  std::ostringstream log;
  const int code = cli::run_experiment(config, log);
  if (exit_code) *exit_code = code;
  std::ifstream in(out / "summary.txt");
  return cli::parse_config(in);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

fpl::PointMeasure random_measure(std::uint64_t index) {
  fpl::RandomStream rng(2024, index);
  const int points = 200;
  Eigen::MatrixXd p(2, points);
  Eigen::VectorXd w(points);
  for (int j = 0; j < points; ++j) {
    p.col(j) << rng.uniform(), rng.uniform();
    w[j] = 0.1 + rng.uniform();
  }
  return fpl::PointMeasure(p, w / w.sum(), 1e-3);
}

Outcome certificates() {
  bool pass = true;
  std::string detail;
  for (const auto& [n, s, r_prime] : {std::tuple{16, 4.0 / 3, 0.8}, std::tuple{64, 1.5, 0.75}}) {
    const ce::StageParams p(n, s, r_prime);
    const auto sets = ce::first_stage(p);
    const auto cert = ce::sum_product_inclusion(sets.a2, sets.b, p);
    const auto count = ce::sumset_cover_count(sets.a1, sets.a2, sets.b, p);
    pass = pass && cert.ok && count <= 2 * p.k1();
    detail += "n=" + std::to_string(n) + " ok=" + (cert.ok ? "true" : "false") + " max_product=" +
              std::to_string(cert.max_product) + "<=K1=" + std::to_string(p.k1()) + " sumset=" +
              std::to_string(count) + "<=" + std::to_string(2 * p.k1()) + "; ";
  }
  return {pass, detail.substr(0, detail.size() - 2)};
}

Outcome shrinkage() {
  const auto state = ce::iterate_construction(1.5, {{8, 2.0}, {64, 1.8}, {512, 1.6}});
  bool decreasing = true;
  std::string bounds;
  for (std::size_t j = 0; j < state.stages.size(); ++j) {
    bounds += (j ? "," : "") + num(state.stages[j].cover_bound);
    if (j > 0) decreasing = decreasing && state.stages[j].cover_bound < state.stages[j - 1].cover_bound;
  }
  const bool pass = state.stages.size() == 3 && decreasing && state.cover_bound <= 1.0 / 3;
  return {pass, "schedule 8:2.0,64:1.8,512:1.6 s=1.5 bounds " + bounds + " strictly decreasing, final <= 1/3"};
}

Outcome disjointness() {
  const auto state = ce::iterate_construction(1.5, {{8, 2.4}, {64, 2.2}});
  const auto r = ce::disjointness_experiment(state, 500, 10, 1);
  const bool pass = r.fraction_disjoint >= 0.9 && r.localized_fraction >= 0.95;
  return {pass, "schedule 8:2.4,64:2.2 seed 1: fraction_disjoint=" + num(r.fraction_disjoint) +
                    " (>=0.9), failures=" + std::to_string(r.exceptional_angles.size()) +
                    " localized=" + num(r.localized_fraction) + " (>=0.95), mirrored +B fraction=" +
                    num(r.mirrored_fraction_disjoint)};
}

Outcome polar() {
  const auto a = fpl::polar_formula_check("gaussian", 2, 1, 2000, 0.01, 1);
  const auto b = fpl::polar_formula_check("gaussian-narrow", 2, 1, 2000, 0.01, 1);
  const double gap = std::abs(a.ratio / b.ratio - 1);
  const bool pass = std::abs(a.ratio / kInvPi - 1) <= 0.05 && std::abs(b.ratio / kInvPi - 1) <= 0.05 && gap <= 0.02;
  return {pass, "c(2,1) gaussian=" + num(a.ratio) + " narrow=" + num(b.ratio) + " (1/pi=" + num(kInvPi) +
                    " +-5%), gap=" + num(gap) + " (<=0.02)"};
}

Outcome identity() {
  const int side = 100;
  Eigen::MatrixXd p(2, side * side);
  for (int i = 0; i < side; ++i)
    for (int j = 0; j < side; ++j) p.col(i * side + j) << (i + 0.5) / side, (j + 0.5) / side;
  const fpl::PointMeasure mu(p, Eigen::VectorXd::Constant(side * side, 1.0 / (side * side)), 1.0 / side);
  const auto base = fpl::projection_energy_identity_check(mu, mu, 500, 8, mu.resolution(), 1);
  const auto doubled = fpl::projection_energy_identity_check(mu, mu, 1000, 9, mu.resolution(), 1);
  const double drift = std::abs(doubled.ratio / base.ratio - 1);
  const bool pass = std::abs(base.ratio / kInvPi - 1) <= 0.1 && drift <= 0.05;
  return {pass, "N=10^4 ratio=" + num(base.ratio) + " (1/pi +-10%), doubled lines+bins ratio=" +
                    num(doubled.ratio) + " drift=" + num(drift) + " (<=0.05)"};
}

Outcome cauchy_schwarz() {
  bool pass = true;
  double worst = 0, self_form = 0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const auto mu = random_measure(2 * k), nu = random_measure(2 * k + 1);
    const double mid = fpl::mutual_energy(mu, nu, 1.0, 1e-3).value;
    const double s = fpl::mutual_energy(mu, nu, 1.4, 1e-3).value;
    const double t = fpl::mutual_energy(mu, nu, 0.6, 1e-3).value;
    const double ratio = mid / std::sqrt(s * t);
    worst = std::max(worst, ratio);
    pass = pass && ratio <= 1 + 1e-12;
    const double self = std::sqrt(fpl::riesz_energy(mu, 1.4, 1e-3).value * fpl::riesz_energy(nu, 0.6, 1e-3).value);
    self_form = std::max(self_form, mid / self);
  }
  return {pass, "100 pairs, max I_1/sqrt(I_1.4 I_0.6)=" + num(worst) +
                    " (<=1+1e-12); self-energy form observed constant " + num(self_form) + " (reported)"};
}

Outcome dimensions() {
  const double d1 = std::log(2.0) / std::log(3.0);
  const auto c12 = fpl::cantor_digit_set(3, {0, 2}, 12);
  const double cantor = fpl::box_dimension(c12, 4, 11).slope;
  const auto c8 = fpl::cantor_digit_set(3, {0, 2}, 8);
  const double factor = fpl::box_dimension(c8, 4, 11).slope;
  const double product = fpl::box_dimension(fpl::product_cover(c8, c8), 4, 11).slope;
  const bool pass = std::abs(cantor - d1) <= 0.05 && std::abs(product - 2 * d1) <= 0.07 &&
                    std::abs(product - 2 * factor) <= 0.1;
  return {pass, "C slope=" + num(cantor) + " (" + num(d1) + " +-0.05), CxC slope=" + num(product) + " (" +
                    num(2 * d1) + " +-0.07), factor sum=" + num(2 * factor) + " (+-0.1)"};
}

Outcome intersection_experiment() {
  int code = -1;
  const auto s = run_cli("proj-intersection", {}, scratch("intersection"), &code);
  const double fraction = std::stod(s.at("fraction_stable_positive"));
  return {code == 0 && fraction >= 0.5,
          "A=CxC, B=A+(0.31,0.17), 200 lines, tau=0.01: stable positive fraction=" + num(fraction) + " (>=0.5)"};
}

Outcome interior_experiment() {
  int code = -1;
  const auto s = run_cli("proj-interior", {{"min_run", "0.9"}, {"pass_fraction", "1"}}, scratch("interior"), &code);
  const double fraction = std::stod(s.at("fraction_with_interval"));
  return {code == 0 && fraction == 1.0, "unit squares, 200 lines: fraction with run*width>=0.9 = " + num(fraction) +
                                            ", shortest " + s.at("shortest_run_length")};
}

Outcome sections_survey() {
  int code = -1;
  const auto s = run_cli("sections", {}, scratch("sections"), &code);
  const double dim = std::stod(s.at("s")), median = std::stod(s.at("median_slope")), p90 = std::stod(s.at("p90_slope"));
  const bool pass = code == 0 && std::abs(median - (dim - 1)) <= 0.2 && p90 <= dim - 1 + 0.1;
  return {pass, "s=" + num(dim) + ", 50 points x 100 lines: median=" + num(median) + " (in [" + num(dim - 1.2) + "," +
                    num(dim - 0.8) + "]), p90=" + num(p90) + " (<=" + num(dim - 0.9) + ")"};
}

Outcome visibility() {
  int code = -1;
  const auto s = run_cli("visibility", {}, scratch("visibility"), &code);
  const double visible = std::stod(s.at("visible_fraction"));
  std::vector<fpl::Cell> cells;
  for (int i = -256; i < 256; ++i) cells.push_back({i, 256, 0});
  const fpl::Cover segment(2, 8, 2, cells);
  const double oracle = fpl::visibility_fraction(segment, Eigen::Vector2d(0, 0), 1000, 1.0 / 256, 1).fraction;
  const bool pass = code == 0 && visible == 1.0 && std::abs(oracle - 0.5) <= 0.02;
  return {pass, "CxC, 64x64 grid on [-1,2]^2: visible fraction=" + num(visible) + " (inside-cell points " +
                    s.at("inside_points") + ", lowest " + s.at("lowest_fraction") + "); segment oracle=" +
                    num(oracle) + " (0.5+-0.02)"};
}

Outcome determinism() {
  struct Run {
    std::string experiment;
    std::map<std::string, std::string> given;
    std::vector<std::string> csvs;
  };
  const std::vector<Run> runs = {
      {"proj-intersection", {{"lines", "100"}}, {"intersection.csv"}},
      {"proj-interior", {{"lines", "100"}}, {"interior.csv"}},
      {"proj-dim-lower", {{"lines", "20"}}, {"intersection.csv", "slopes.csv"}},
      {"counterexample", {{"n", "8"}, {"schedule", "8:2.4,64:2.2"}}, {"disjointness.csv", "stages.csv"}},
      {"sections", {{"points", "10"}, {"lines", "20"}}, {"sections.csv"}},
      {"visibility", {{"nx", "16"}, {"ny", "16"}, {"a_level", "6"}}, {"visibility.csv"}},
      {"polar-check", {{"lines", "500"}}, {"ratio.csv"}},
      {"energy-check", {{"identity_grid", "50"}, {"lines", "200"}}, {"energy.csv", "identity.csv"}},
  };
  std::size_t compared = 0;
  std::string mismatched;
  for (const auto& run : runs) {
    std::vector<fs::path> dirs;
    for (const char* threads : {"1", "3"}) {
      setenv("FPL_THREADS", threads, 1);
      dirs.push_back(scratch("det_" + run.experiment + "_" + threads));
      int code = 0;
      run_cli(run.experiment, run.given, dirs.back(), &code);
    }
    for (const auto& csv : run.csvs) {
      ++compared;
      const auto a = slurp(dirs[0] / csv), b = slurp(dirs[1] / csv);
      if (a.empty() || a != b) mismatched += " " + run.experiment + "/" + csv;
    }
  }
  unsetenv("FPL_THREADS");
  return {mismatched.empty(), std::to_string(compared) + " CSVs from 8 experiments, FPL_THREADS=1 vs 3: " +
                                  (mismatched.empty() ? std::string("byte-identical") : "differ:" + mismatched)};
}

}  // namespace

int main() {
  criterion(1, "exact first-stage certificates", 1, certificates);
  criterion(2, "cover-shrinkage over three stages", 10, shrinkage);
  criterion(3, "projection disjointness at stage 2", 120, disjointness);
  criterion(4, "polar formula constant", 30, polar);
  criterion(5, "projection-energy identity", 60, identity);
  criterion(6, "energy Cauchy-Schwarz", 60, cauchy_schwarz);
  criterion(7, "dimension oracles", 10, dimensions);
  criterion(8, "positive-measure intersections of projections", 60, intersection_experiment);
  criterion(9, "interior of intersected projections", 10, interior_experiment);
  criterion(10, "line sections survey", 300, sections_survey);
  criterion(11, "visibility", 120, visibility);
  criterion(12, "determinism across thread counts", 600, determinism);
  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
