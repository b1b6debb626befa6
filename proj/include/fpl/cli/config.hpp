#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace fpl::cli {

/// A configuration problem tied to one key (or to a line of the file when
/// `key` is empty).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message);
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct KeySpec {
  std::string name;
  /// Empty means the key is required.
  std::string default_value;
  std::string doc;
};

const std::vector<std::string>& experiment_names();
/// Throws ConfigError for an unknown experiment.
const std::vector<KeySpec>& experiment_keys(const std::string& experiment);

/// Flat `key=value` lines; `#` starts a comment, blank lines are skipped.
std::map<std::string, std::string> parse_config(std::istream& in);

struct ExperimentConfig {
  std::string experiment;
  std::map<std::string, std::string> values;
  std::uint64_t seed = 1;
  std::filesystem::path out_dir = ".";
};

/// Merges `given` over the experiment's defaults. Unknown keys and missing
/// required keys raise ConfigError naming the key. A `seed` key is accepted
/// in every experiment.
ExperimentConfig resolve_config(const std::string& experiment, const std::map<std::string, std::string>& given);

/// Typed reads of resolved values; a malformed value raises ConfigError.
class Params {
 public:
  explicit Params(const ExperimentConfig& config) : config_(config) {}

  const std::string& text(const std::string& key) const;
  double real(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  /// Comma-separated reals.
  std::vector<double> reals(const std::string& key) const;
  bool has(const std::string& key) const;

 private:
  const ExperimentConfig& config_;
};

}  // namespace fpl::cli
