#include "wobble/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "wobble/format.hpp"

namespace wobble {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

const char* color(std::size_t i) { return kPalette[i % std::size(kPalette)]; }

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_text(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", std::fabs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  // Pads degenerate or empty ranges so the mapping stays defined.
  Range padded() const {
    Range r = *this;
    if (!(r.lo <= r.hi)) return {0.0, 1.0};
    if (r.hi - r.lo < 1e-12) {
      const double pad = std::max(std::fabs(r.lo) * 0.1, 0.5);
      return {r.lo - pad, r.hi + pad};
    }
    const double pad = (r.hi - r.lo) * 0.05;
    return {r.lo - pad, r.hi + pad};
  }
};

std::vector<double> nice_ticks(Range r, int target = 6) {
  const double span = r.hi - r.lo;
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  std::vector<double> ticks;
  for (double t = std::ceil(r.lo / step) * step; t <= r.hi + step * 1e-9; t += step)
    ticks.push_back(t);
  return ticks;
}

// Plot area inside an SVG, mapping data coordinates to pixels.
struct Frame {
  double left, top, width, height;
  Range xr, yr;

  double sx(double x) const { return left + (x - xr.lo) / (xr.hi - xr.lo) * width; }
  double sy(double y) const { return top + height - (y - yr.lo) / (yr.hi - yr.lo) * height; }
};

void axes(std::ostream& out, const Frame& f, const std::string& x_label, const std::string& y_label,
          bool x_ticks = true) {
  out << "<rect x=\"" << px(f.left) << "\" y=\"" << px(f.top) << "\" width=\"" << px(f.width)
      << "\" height=\"" << px(f.height) << "\" fill=\"none\" stroke=\"#333\"/>\n";
  if (x_ticks) {
    for (double t : nice_ticks(f.xr)) {
      const double x = f.sx(t);
      out << "<line x1=\"" << px(x) << "\" y1=\"" << px(f.top + f.height) << "\" x2=\"" << px(x)
          << "\" y2=\"" << px(f.top + f.height + 5) << "\" stroke=\"#333\"/>\n"
          << "<text x=\"" << px(x) << "\" y=\"" << px(f.top + f.height + 18)
          << "\" text-anchor=\"middle\" font-size=\"11\">" << tick_text(t) << "</text>\n";
    }
  }
  for (double t : nice_ticks(f.yr)) {
    const double y = f.sy(t);
    out << "<line x1=\"" << px(f.left - 5) << "\" y1=\"" << px(y) << "\" x2=\"" << px(f.left)
        << "\" y2=\"" << px(y) << "\" stroke=\"#333\"/>\n"
        << "<line x1=\"" << px(f.left) << "\" y1=\"" << px(y) << "\" x2=\""
        << px(f.left + f.width) << "\" y2=\"" << px(y) << "\" stroke=\"#eee\"/>\n"
        << "<text x=\"" << px(f.left - 8) << "\" y=\"" << px(y + 4)
        << "\" text-anchor=\"end\" font-size=\"11\">" << tick_text(t) << "</text>\n";
  }
  out << "<text x=\"" << px(f.left + f.width / 2) << "\" y=\"" << px(f.top + f.height + 36)
      << "\" text-anchor=\"middle\" font-size=\"12\">" << xml_escape(x_label) << "</text>\n";
  const double cy = f.top + f.height / 2;
  out << "<text x=\"" << px(f.left - 48) << "\" y=\"" << px(cy)
      << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 " << px(f.left - 48)
      << ' ' << px(cy) << ")\">" << xml_escape(y_label) << "</text>\n";
}

void open_svg(std::ostream& out, double w, double h, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\" viewBox=\"0 0 " << w << ' ' << h << "\" font-family=\"sans-serif\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << w / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
      << xml_escape(title) << "</text>\n";
}

void save(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out.flush()) throw std::runtime_error("write failed for " + path.string());
}

std::string star_points(double cx, double cy, double r) {
  std::ostringstream s;
  for (int i = 0; i < 10; ++i) {
    const double a = -std::numbers::pi / 2 + i * std::numbers::pi / 5;
    const double rr = i % 2 == 0 ? r : r * 0.45;
    s << px(cx + rr * std::cos(a)) << ',' << px(cy + rr * std::sin(a)) << ' ';
  }
  return s.str();
}

}  // namespace

std::string xml_escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_svg(const LineChart& chart, const std::filesystem::path& path) {
  const double w = 820, h = 500;
  Frame f{80, 40, 560, 390, {}, {}};
  for (const auto& s : chart.series) {
    for (double x : s.x) f.xr.add(x);
    for (double y : s.y) f.yr.add(y);
    for (double y : s.low) f.yr.add(y);
    for (double y : s.high) f.yr.add(y);
  }
  f.xr = f.xr.padded();
  f.yr = f.yr.padded();

  std::ostringstream out;
  open_svg(out, w, h, chart.title);
  axes(out, f, chart.x_label, chart.y_label);
  for (std::size_t i = 0; i < chart.series.size(); ++i) {
    const auto& s = chart.series[i];
    if (!s.low.empty() && s.low.size() == s.x.size() && s.high.size() == s.x.size()) {
      out << "<polygon fill=\"" << color(i) << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
      for (std::size_t k = 0; k < s.x.size(); ++k) out << px(f.sx(s.x[k])) << ',' << px(f.sy(s.high[k])) << ' ';
      for (std::size_t k = s.x.size(); k-- > 0;) out << px(f.sx(s.x[k])) << ',' << px(f.sy(s.low[k])) << ' ';
      out << "\"/>\n";
    }
    out << "<polyline fill=\"none\" stroke=\"" << color(i) << "\" stroke-width=\"1.4\" points=\"";
    for (std::size_t k = 0; k < s.x.size(); ++k) out << px(f.sx(s.x[k])) << ',' << px(f.sy(s.y[k])) << ' ';
    out << "\"/>\n";
    const double ly = f.top + 14 + 18 * static_cast<double>(i);
    out << "<line x1=\"656\" y1=\"" << px(ly) << "\" x2=\"676\" y2=\"" << px(ly) << "\" stroke=\""
        << color(i) << "\" stroke-width=\"3\"/>\n"
        << "<text x=\"682\" y=\"" << px(ly + 4) << "\" font-size=\"11\">" << xml_escape(s.name)
        << "</text>\n";
  }
  out << "</svg>\n";
  save(path, out.str());
}

void write_csv(const LineChart& chart, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "series,x,y,low,high\n";
  for (const auto& s : chart.series) {
    const bool band = !s.low.empty();
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      out << csv_field(s.name) << ',' << format_double(s.x[k]) << ',' << format_double(s.y[k]) << ',';
      if (band) out << format_double(s.low[k]) << ',' << format_double(s.high[k]);
      else out << ',';
      out << '\n';
    }
  }
  save(path, out.str());
}

void write_svg(const ScatterChart& chart, const std::filesystem::path& path) {
  const double panel_w = 420, h = 470;
  const double w = std::max<double>(1.0, static_cast<double>(chart.panels.size())) * panel_w;
  std::ostringstream out;
  open_svg(out, w, h, chart.title);
  for (std::size_t p = 0; p < chart.panels.size(); ++p) {
    const auto& panel = chart.panels[p];
    Frame f{static_cast<double>(p) * panel_w + 70, 60, panel_w - 100, 350, {}, {}};
    for (double x : panel.x) f.xr.add(x);
    for (double y : panel.y) f.yr.add(y);
    f.xr = f.xr.padded();
    f.yr = f.yr.padded();
    out << "<text x=\"" << px(f.left + f.width / 2) << "\" y=\"50\" text-anchor=\"middle\" "
        << "font-size=\"13\">" << xml_escape(panel.title) << "</text>\n";
    axes(out, f, panel.x_label, panel.y_label);
    for (const auto& [a, b] : panel.edges)
      out << "<line x1=\"" << px(f.sx(panel.x[a])) << "\" y1=\"" << px(f.sy(panel.y[a]))
          << "\" x2=\"" << px(f.sx(panel.x[b])) << "\" y2=\"" << px(f.sy(panel.y[b]))
          << "\" stroke=\"#999\" stroke-width=\"0.6\"/>\n";
    for (std::size_t k = 0; k < panel.x.size(); ++k)
      out << "<circle cx=\"" << px(f.sx(panel.x[k])) << "\" cy=\"" << px(f.sy(panel.y[k]))
          << "\" r=\"1.6\" fill=\"" << color(p) << "\"/>\n";
    for (const auto& m : panel.markers) {
      const double cx = f.sx(panel.x[m.point]), cy = f.sy(panel.y[m.point]);
      if (m.shape == "triangle")
        out << "<polygon fill=\"#d62728\" points=\"" << px(cx - 7) << ',' << px(cy - 6) << ' '
            << px(cx + 7) << ',' << px(cy - 6) << ' ' << px(cx) << ',' << px(cy + 7) << "\"/>\n";
      else if (m.shape == "star")
        out << "<polygon fill=\"#d62728\" points=\"" << star_points(cx, cy, 8) << "\"/>\n";
      else
        out << "<circle cx=\"" << px(cx) << "\" cy=\"" << px(cy) << "\" r=\"5\" fill=\"#d62728\"/>\n";
      if (!m.label.empty())
        out << "<text x=\"" << px(cx + 9) << "\" y=\"" << px(cy - 6) << "\" font-size=\"10\">"
            << xml_escape(m.label) << "</text>\n";
    }
  }
  out << "</svg>\n";
  save(path, out.str());
}

void write_csv(const ScatterChart& chart, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "panel,point,x,y\n";
  for (const auto& panel : chart.panels)
    for (std::size_t k = 0; k < panel.x.size(); ++k)
      out << csv_field(panel.title) << ',' << k << ',' << format_double(panel.x[k]) << ','
          << format_double(panel.y[k]) << '\n';
  save(path, out.str());
}

void write_svg(const BoxChart& chart, const std::filesystem::path& path) {
  const double slot = 90;
  const double w = std::max(420.0, 140 + slot * static_cast<double>(chart.groups.size()));
  const double top = 50 + 14 * static_cast<double>(chart.notes.size());
  const double h = top + 400;
  Frame f{90, top, w - 120, 330, {}, {}};
  f.xr = {0.0, static_cast<double>(chart.groups.size())};
  for (const auto& g : chart.groups) {
    f.yr.add(g.stats.whisker_low);
    f.yr.add(g.stats.whisker_high);
    f.yr.add(g.stats.median_ci.low);
    f.yr.add(g.stats.median_ci.high);
    for (double o : g.stats.outliers) f.yr.add(o);
  }
  f.yr = f.yr.padded();

  std::ostringstream out;
  open_svg(out, w, h, chart.title);
  for (std::size_t i = 0; i < chart.notes.size(); ++i)
    out << "<text x=\"" << w / 2 << "\" y=\"" << px(40 + 14 * static_cast<double>(i))
        << "\" text-anchor=\"middle\" font-size=\"11\">" << xml_escape(chart.notes[i]) << "</text>\n";
  axes(out, f, "", chart.y_label, false);
  for (std::size_t i = 0; i < chart.groups.size(); ++i) {
    const auto& s = chart.groups[i].stats;
    const double cx = f.sx(static_cast<double>(i) + 0.5);
    const double half = 26, notch = 13;
    const double yq1 = f.sy(s.q1), yq3 = f.sy(s.q3), ym = f.sy(s.median);
    const double ylo = f.sy(std::max(s.median_ci.low, s.q1 - (s.q3 - s.q1)));
    const double yhi = f.sy(std::min(s.median_ci.high, s.q3 + (s.q3 - s.q1)));
    out << "<polygon fill=\"" << color(i) << "\" fill-opacity=\"0.35\" stroke=\"#333\" points=\""
        << px(cx - half) << ',' << px(yq1) << ' ' << px(cx + half) << ',' << px(yq1) << ' '
        << px(cx + half) << ',' << px(ylo) << ' ' << px(cx + notch) << ',' << px(ym) << ' '
        << px(cx + half) << ',' << px(yhi) << ' ' << px(cx + half) << ',' << px(yq3) << ' '
        << px(cx - half) << ',' << px(yq3) << ' ' << px(cx - half) << ',' << px(yhi) << ' '
        << px(cx - notch) << ',' << px(ym) << ' ' << px(cx - half) << ',' << px(ylo) << "\"/>\n";
    out << "<line x1=\"" << px(cx - notch) << "\" y1=\"" << px(ym) << "\" x2=\"" << px(cx + notch)
        << "\" y2=\"" << px(ym) << "\" stroke=\"#000\" stroke-width=\"2\"/>\n";
    for (const auto& [from, to] : {std::pair{s.q1, s.whisker_low}, std::pair{s.q3, s.whisker_high}}) {
      out << "<line x1=\"" << px(cx) << "\" y1=\"" << px(f.sy(from)) << "\" x2=\"" << px(cx)
          << "\" y2=\"" << px(f.sy(to)) << "\" stroke=\"#333\"/>\n"
          << "<line x1=\"" << px(cx - 10) << "\" y1=\"" << px(f.sy(to)) << "\" x2=\"" << px(cx + 10)
          << "\" y2=\"" << px(f.sy(to)) << "\" stroke=\"#333\"/>\n";
    }
    for (double o : s.outliers) {
      const double oy = f.sy(o);
      out << "<polygon fill=\"none\" stroke=\"#333\" points=\"" << px(cx) << ',' << px(oy - 4) << ' '
          << px(cx + 4) << ',' << px(oy) << ' ' << px(cx) << ',' << px(oy + 4) << ' ' << px(cx - 4)
          << ',' << px(oy) << "\"/>\n";
    }
    out << "<text x=\"" << px(cx) << "\" y=\"" << px(f.top + f.height + 18)
        << "\" text-anchor=\"middle\" font-size=\"10\">" << xml_escape(chart.groups[i].label)
        << "</text>\n";
  }
  out << "</svg>\n";
  save(path, out.str());
}

void write_csv(const BoxChart& chart, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "group,n,mean,median,q1,q3,whisker_low,whisker_high,median_ci_low,median_ci_high,outliers\n";
  for (const auto& g : chart.groups) {
    const auto& s = g.stats;
    out << csv_field(g.label) << ',' << s.n << ',' << format_double(s.mean) << ','
        << format_double(s.median) << ',' << format_double(s.q1) << ',' << format_double(s.q3) << ','
        << format_double(s.whisker_low) << ',' << format_double(s.whisker_high) << ','
        << format_double(s.median_ci.low) << ',' << format_double(s.median_ci.high) << ',';
    for (std::size_t i = 0; i < s.outliers.size(); ++i)
      out << (i ? ";" : "") << format_double(s.outliers[i]);
    out << '\n';
  }
  save(path, out.str());
}

}  // namespace wobble
