#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "fpl/sections.hpp"

namespace fpl::cli {

/// Shortest round-trip decimal form; identical bits give identical text.
std::string format_real(double x);

/// Ordered `key=value` lines of summary.txt.
class Summary {
 public:
  void add(const std::string& key, const std::string& value);
  void add(const std::string& key, const char* value) { add(key, std::string(value)); }
  void add(const std::string& key, double value);
  void add(const std::string& key, std::int64_t value);
  void add(const std::string& key, int value) { add(key, static_cast<std::int64_t>(value)); }
  void add(const std::string& key, std::size_t value) { add(key, static_cast<std::int64_t>(value)); }
  void add(const std::string& key, bool value);

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

  CsvWriter& cell(const std::string& text);
  CsvWriter& cell(double x) { return cell(format_real(x)); }
  CsvWriter& cell(std::int64_t x) { return cell(std::to_string(x)); }
  CsvWriter& cell(int x) { return cell(static_cast<std::int64_t>(x)); }
  void end_row();

 private:
  std::ofstream out_;
  std::size_t columns_;
  std::size_t filled_ = 0;
};

/// Self-contained SVG: one rectangle per grid point, grey level by fraction.
void write_heatmap_svg(const std::filesystem::path& path, const VisibilityField& field);

}  // namespace fpl::cli
