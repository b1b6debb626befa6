#include "fpl/cli/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace fpl::cli {
namespace {

std::ofstream open_for_writing(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, x);
  if (ec != std::errc()) throw std::runtime_error("format_real: conversion failed");
  return std::string(buffer, end);
}

void Summary::add(const std::string& key, const std::string& value) { entries_.emplace_back(key, value); }
void Summary::add(const std::string& key, double value) { add(key, format_real(value)); }
void Summary::add(const std::string& key, std::int64_t value) { add(key, std::to_string(value)); }
void Summary::add(const std::string& key, bool value) { add(key, std::string(value ? "true" : "false")); }

void Summary::write(const std::filesystem::path& path) const {
  auto out = open_for_writing(path);
  for (const auto& [key, value] : entries_) out << key << '=' << value << '\n';
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(open_for_writing(path)), columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

CsvWriter& CsvWriter::cell(const std::string& text) {
  if (filled_ == columns_) throw std::logic_error("csv: too many cells in row");
  out_ << (filled_ ? "," : "") << text;
  ++filled_;
  return *this;
}

void CsvWriter::end_row() {
  if (filled_ != columns_) throw std::logic_error("csv: row has missing cells");
  out_ << '\n';
  filled_ = 0;
}

void write_heatmap_svg(const std::filesystem::path& path, const VisibilityField& field) {
  auto out = open_for_writing(path);
  const auto& g = field.grid;
  constexpr int cell = 8;
  const int width = g.nx * cell, height = g.ny * cell;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height + 20
      << "\" viewBox=\"0 0 " << width << ' ' << height + 20 << "\">\n";
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double f = field.fractions[static_cast<std::size_t>(j * g.nx + i)];
      const int level = static_cast<int>(std::lround(255 * (1 - std::clamp(f, 0.0, 1.0))));
      // Row 0 is the bottom of the grid, so flip for screen coordinates.
      out << "<rect x=\"" << i * cell << "\" y=\"" << (g.ny - 1 - j) * cell << "\" width=\"" << cell
          << "\" height=\"" << cell << "\" fill=\"rgb(" << level << ',' << level << ',' << 255 << ")\"/>\n";
    }
  }
  out << "<text x=\"4\" y=\"" << height + 15 << "\" font-family=\"monospace\" font-size=\"12\">visible fraction "
      << format_real(field.positive_fraction()) << "</text>\n</svg>\n";
}

}  // namespace fpl::cli
