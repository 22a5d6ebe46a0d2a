#pragma once

// Minimal SVG charts (line with bands, scatter panels, box plots), each with
// a CSV writer holding exactly the plotted numbers.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "wobble/stats.hpp"

namespace wobble {

struct LineSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> low;   // optional band, same length as y
  std::vector<double> high;
};

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<LineSeries> series;
};

struct Marker {
  std::size_t point;
  std::string shape;  // "triangle", "disk" or "star"
  std::string label;
};

struct ScatterPanel {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // segments between points
  std::vector<Marker> markers;
};

struct ScatterChart {
  std::string title;
  std::vector<ScatterPanel> panels;  // laid out side by side
};

struct BoxGroup {
  std::string label;
  BoxStats stats;
};

struct BoxChart {
  std::string title;
  std::string y_label;
  std::vector<BoxGroup> groups;
  std::vector<std::string> notes;  // printed under the title
};

void write_svg(const LineChart& chart, const std::filesystem::path& path);
void write_svg(const ScatterChart& chart, const std::filesystem::path& path);
void write_svg(const BoxChart& chart, const std::filesystem::path& path);

/// Columns: series,x,y,low,high (low/high empty without a band).
void write_csv(const LineChart& chart, const std::filesystem::path& path);
/// Columns: panel,point,x,y.
void write_csv(const ScatterChart& chart, const std::filesystem::path& path);
/// One row per group with the box statistics; outliers separated by ';'.
void write_csv(const BoxChart& chart, const std::filesystem::path& path);

/// Escapes a field for CSV output (quotes when needed).
std::string csv_field(const std::string& text);
std::string xml_escape(const std::string& text);

}  // namespace wobble
