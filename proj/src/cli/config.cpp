#include "fpl/cli/config.hpp"

#include <charconv>
#include <sstream>

namespace fpl::cli {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

const std::map<std::string, std::vector<KeySpec>>& key_table() {
  static const std::map<std::string, std::vector<KeySpec>> table = {
      {"proj-intersection",
       {{"a", "cantor3", "generator of A"},
        {"a_level", "7", "native level of A"},
        {"b", "cantor3", "generator of B"},
        {"b_level", "7", "native level of B"},
        {"b_shift", "0.31,0.17", "translation applied to B"},
        {"lines", "200", "sampled lines"},
        {"level", "10", "dyadic level of the projected covers; level + 1 is the stability check"},
        {"tau", "0.01", "positive-measure threshold"},
        {"pass_fraction", "0.5", "required fraction of lines with stable positive measure"}}},
      {"proj-interior",
       {{"a", "square", "generator of A"},
        {"a_level", "6", "native level of A"},
        {"b", "square", "generator of B"},
        {"b_level", "6", "native level of B"},
        {"b_shift", "0,0", "translation applied to B"},
        {"lines", "200", "sampled lines"},
        {"level", "8", "dyadic level of the projected covers"},
        {"min_run", "0.9", "required interval length inside the intersection"},
        {"pass_fraction", "1", "required fraction of lines with such an interval"}}},
      {"proj-dim-lower",
       {{"a", "cantor4", "generator of A"},
        {"a_level", "6", "native level of A"},
        {"b", "cantor3-x", "generator of B"},
        {"b_level", "8", "native level of B"},
        {"b_shift", "0,0", "translation applied to B"},
        {"lines", "100", "sampled lines"},
        {"level_min", "4", "first dyadic level of the fits"},
        {"level_max", "10", "last dyadic level of the fits"},
        {"eps", "0.2", "slack below dim B"},
        {"min_fraction", "0", "pass when the fraction of lines above dim B - eps exceeds this"}}},
      {"counterexample",
       {{"n", "", "first-stage n"},
        {"s", "1.5", "dimension parameter in (1, 2)"},
        {"rprime", "2.0", "first-stage r'"},
        {"stages", "2", "number of stages of the default schedule"},
        {"growth", "4", "default schedule: n_(j+1) is near n_j^growth"},
        {"schedule", "none", "explicit schedule n:r',n:r',...; its first n must equal n"},
        {"enforce_target", "true", "reject stages whose cover bound exceeds 1/j"},
        {"lines", "500", "sampled lines"},
        {"level", "10", "dyadic level of the disjointness covers"},
        {"pass_fraction", "0.9", "required fraction of disjoint lines"},
        {"localization", "0.95", "required fraction of failures near the exceptional set"}}},
      {"sections",
       {{"a", "cantor4", "generator of A"},
        {"a_level", "6", "native level of A"},
        {"points", "50", "base points drawn from the natural measure of A"},
        {"lines", "100", "lines per base point"},
        {"level_min", "5", "first dyadic level of the fits"},
        {"level_max", "11", "last dyadic level of the fits"},
        {"thickness_factor", "1", "slab thickness in cell widths"},
        {"s", "0", "dimension of A; 0 uses the measured box dimension"},
        {"median_tol", "0.2", "allowed distance of the median slope from s - 1"},
        {"p90_tol", "0.1", "allowed excess of the 90th percentile over s - 1"}}},
      {"visibility",
       {{"a", "cantor3", "generator of A"},
        {"a_level", "7", "native level of A"},
        {"x0", "-1", "grid left edge"},
        {"x1", "2", "grid right edge"},
        {"y0", "-1", "grid bottom edge"},
        {"y1", "2", "grid top edge"},
        {"nx", "64", "grid columns"},
        {"ny", "64", "grid rows"},
        {"directions", "1000", "sampled directions per point"},
        {"delta", "0", "thickened cell side; 0 uses the cell width"},
        {"threshold", "0", "a point is visible when its fraction exceeds this"},
        {"pass_fraction", "1", "required fraction of visible grid points"},
        {"svg", "true", "write visibility.svg"}}},
      {"polar-check",
       {{"function", "gaussian", "catalog test function"},
        {"compare", "gaussian-narrow", "second catalog function, or none"},
        {"n", "2", "ambient dimension"},
        {"m", "1", "subspace dimension"},
        {"lines", "2000", "sampled subspaces"},
        {"step", "0.01", "quadrature step"},
        {"tolerance", "0.05", "relative tolerance of each estimate around 1/pi (2, 1 only)"},
        {"agreement", "0.02", "relative agreement of the two estimates"}}},
      {"energy-check",
       {{"s_values", "0.5,0.7", "energy exponents on the middle-thirds measure"},
        {"levels", "8,10", "coarse and fine levels"},
        {"convergent_tol", "0.1", "relative change allowed when s < dim"},
        {"divergent_growth", "1.25", "required growth factor when s > dim"},
        {"identity_grid", "100", "points per side of the unit-square measure"},
        {"lines", "500", "sampled lines of the identity check"},
        {"bin_level", "8", "bin level of the identity check"},
        {"identity_tol", "0.1", "relative tolerance of the ratio around 1/pi"},
        {"stability_tol", "0.05", "relative change allowed when lines and bin level double"}}},
  };
  return table;
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw ConfigError(key, "malformed value '" + text + "'");
  return value;
}

}  // namespace

ConfigError::ConfigError(std::string key, const std::string& message)
    : std::runtime_error(key.empty() ? message : "key '" + key + "': " + message), key_(std::move(key)) {}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, keys] : key_table()) out.push_back(name);
    return out;
  }();
  return names;
}

const std::vector<KeySpec>& experiment_keys(const std::string& experiment) {
  const auto& table = key_table();
  const auto it = table.find(experiment);
  if (it == table.end()) throw ConfigError("", "unknown experiment '" + experiment + "'");
  return it->second;
}

std::map<std::string, std::string> parse_config(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("", "line " + std::to_string(number) + ": expected key=value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("", "line " + std::to_string(number) + ": empty key");
    if (out.count(key)) throw ConfigError(key, "given twice");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

ExperimentConfig resolve_config(const std::string& experiment, const std::map<std::string, std::string>& given) {
  const auto& keys = experiment_keys(experiment);
  ExperimentConfig config;
  config.experiment = experiment;
  for (const auto& [key, value] : given) {
    if (key == "seed") {
      config.seed = parse_number<std::uint64_t>(key, value);
      continue;
    }
    bool known = false;
    for (const auto& spec : keys) known = known || spec.name == key;
    if (!known) throw ConfigError(key, "unknown key for experiment '" + experiment + "'");
    config.values[key] = value;
  }
  for (const auto& spec : keys) {
    if (config.values.count(spec.name)) continue;
    if (spec.default_value.empty()) throw ConfigError(spec.name, "required key is missing");
    config.values[spec.name] = spec.default_value;
  }
  return config;
}

const std::string& Params::text(const std::string& key) const {
  const auto it = config_.values.find(key);
  if (it == config_.values.end()) throw ConfigError(key, "not set");
  return it->second;
}

bool Params::has(const std::string& key) const { return config_.values.count(key) != 0; }

double Params::real(const std::string& key) const { return parse_number<double>(key, text(key)); }

std::int64_t Params::integer(const std::string& key) const { return parse_number<std::int64_t>(key, text(key)); }

bool Params::flag(const std::string& key) const {
  const auto& v = text(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key, "expected true or false, got '" + v + "'");
}

std::vector<double> Params::reals(const std::string& key) const {
  std::vector<double> out;
  std::stringstream parts(text(key));
  std::string item;
  while (std::getline(parts, item, ',')) out.push_back(parse_number<double>(key, trim(item)));
  if (out.empty()) throw ConfigError(key, "expected a comma-separated list");
  return out;
}

}  // namespace fpl::cli
