#include "posthoc/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "posthoc/emit.hpp"
#include "posthoc/errors.hpp"

namespace posthoc {

namespace {

constexpr const char* kColorO = "#4477aa";     // a-priori
constexpr const char* kColorD = "#ee6677";     // post-hoc
constexpr const char* kColorGood = "#228833";  // good theory type
constexpr const char* kColorBad = "#cc8844";   // bad theory type
constexpr const char* kColorHurdle = "#aa3333";
constexpr const char* kColorRef = "#888888";

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

// Widens degenerate or inverted spans so every chart has a drawable frame.
Range sane_range(double lo, double hi, const char* what, PlotWarnings& warnings) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    warnings.push_back(std::string(what) + " axis had non-finite bounds; reset to [-1, 1]");
    return {-1.0, 1.0};
  }
  if (lo > hi) std::swap(lo, hi);
  if (hi - lo < 1e-12) {
    warnings.push_back(std::string(what) + " axis range was degenerate; expanded by 1");
    return {lo - 1.0, hi + 1.0};
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

std::vector<double> nice_ticks(double lo, double hi) {
  const double range = hi - lo;
  const double raw = range / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (range / step <= 7.0) break;
  }
  std::vector<double> ticks;
  const double first = std::ceil(lo / step) * step;
  for (double t = first; t <= hi + 1e-9 * range; t += step) {
    // snap values that should be exact zero
    ticks.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
  }
  return ticks;
}

std::string tick_label(double v) {
  // shortest round-trip is noisy for tick values like 0.30000000000000004
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

// Maps data coordinates into one panel of the SVG canvas.
struct Frame {
  double x0, y0, w, h;  // pixel box (y0 = top)
  Range xr, yr;

  double X(double x) const { return x0 + (x - xr.lo) / (xr.hi - xr.lo) * w; }
  double Y(double y) const { return y0 + h - (y - yr.lo) / (yr.hi - yr.lo) * h; }
};

void open_svg(std::ostringstream& out, int width, int height) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
      << "<style>text{font-family:sans-serif;fill:#222;}</style>\n"
      << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
}

void draw_axes(std::ostringstream& out, const Frame& f, const std::string& x_label,
               const std::string& y_label) {
  out << "<rect x=\"" << px(f.x0) << "\" y=\"" << px(f.y0) << "\" width=\"" << px(f.w)
      << "\" height=\"" << px(f.h)
      << "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n";
  for (double t : nice_ticks(f.xr.lo, f.xr.hi)) {
    const double x = f.X(t);
    out << "<line x1=\"" << px(x) << "\" y1=\"" << px(f.y0 + f.h) << "\" x2=\"" << px(x)
        << "\" y2=\"" << px(f.y0 + f.h + 5) << "\" stroke=\"#333\"/>\n"
        << "<text x=\"" << px(x) << "\" y=\"" << px(f.y0 + f.h + 18)
        << "\" font-size=\"11\" text-anchor=\"middle\">" << tick_label(t) << "</text>\n";
  }
  for (double t : nice_ticks(f.yr.lo, f.yr.hi)) {
    const double y = f.Y(t);
    out << "<line x1=\"" << px(f.x0 - 5) << "\" y1=\"" << px(y) << "\" x2=\"" << px(f.x0)
        << "\" y2=\"" << px(y) << "\" stroke=\"#333\"/>\n"
        << "<text x=\"" << px(f.x0 - 8) << "\" y=\"" << px(y + 4)
        << "\" font-size=\"11\" text-anchor=\"end\">" << tick_label(t) << "</text>\n";
  }
  out << "<text x=\"" << px(f.x0 + f.w / 2) << "\" y=\"" << px(f.y0 + f.h + 38)
      << "\" font-size=\"13\" text-anchor=\"middle\">" << x_label << "</text>\n"
      << "<text x=\"" << px(f.x0 - 46) << "\" y=\"" << px(f.y0 + f.h / 2)
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 "
      << px(f.x0 - 46) << ' ' << px(f.y0 + f.h / 2) << ")\">" << y_label << "</text>\n";
}

void draw_polyline(std::ostringstream& out, const Frame& f,
                   const std::vector<std::pair<double, double>>& pts, const char* color,
                   const char* cls) {
  if (pts.empty()) return;
  out << "<polyline class=\"" << cls << "\" fill=\"none\" stroke=\"" << color
      << "\" stroke-width=\"2\" points=\"";
  for (const auto& [x, y] : pts) out << px(f.X(x)) << ',' << px(f.Y(y)) << ' ';
  out << "\"/>\n";
  for (const auto& [x, y] : pts) {
    out << "<circle class=\"pt\" cx=\"" << px(f.X(x)) << "\" cy=\"" << px(f.Y(y))
        << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
  }
}

}  // namespace

std::string scatter_svg(const ScatterData& data, PlotWarnings& warnings) {
  if (data.marks.empty()) throw PreconditionError("scatter chart needs at least one mark");

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const ScatterMark& m : data.marks) {
    lo = std::min({lo, m.mu_hat, m.mu});
    hi = std::max({hi, m.mu_hat, m.mu});
  }
  const Range r = sane_range(lo, hi, "scatter", warnings);

  Frame f{70, 46, 520, 520, r, r};
  std::ostringstream out;
  open_svg(out, 660, 640);
  out << "<text x=\"330\" y=\"24\" font-size=\"15\" text-anchor=\"middle\">"
         "Selected ideas: measured vs true quality</text>\n";
  draw_axes(out, f, "measured quality of the selected idea",
            "true quality of the selected idea");

  // 45-degree reference: points on it were measured exactly right.
  out << "<line class=\"reference\" x1=\"" << px(f.X(r.lo)) << "\" y1=\"" << px(f.Y(r.lo))
      << "\" x2=\"" << px(f.X(r.hi)) << "\" y2=\"" << px(f.Y(r.hi)) << "\" stroke=\""
      << kColorRef << "\" stroke-dasharray=\"6 4\" stroke-width=\"1.5\"/>\n";

  if (std::isfinite(data.hurdle) && data.hurdle > r.lo && data.hurdle < r.hi) {
    out << "<line class=\"hurdle\" x1=\"" << px(f.X(data.hurdle)) << "\" y1=\""
        << px(f.y0) << "\" x2=\"" << px(f.X(data.hurdle)) << "\" y2=\""
        << px(f.y0 + f.h) << "\" stroke=\"" << kColorHurdle
        << "\" stroke-width=\"1.5\"/>\n";
  }

  for (const ScatterMark& m : data.marks) {
    out << "<circle class=\"mark\" cx=\"" << px(f.X(m.mu_hat)) << "\" cy=\""
        << px(f.Y(m.mu)) << "\" r=\"3.5\" fill=\""
        << (m.regime == Regime::a_priori ? kColorO : kColorD)
        << "\" fill-opacity=\"0.75\"/>\n";
  }

  // legend
  out << "<circle cx=\"90\" cy=\"64\" r=\"4\" fill=\"" << kColorO << "\"/>"
      << "<text x=\"100\" y=\"68\" font-size=\"12\">a-priori selection</text>\n"
      << "<circle cx=\"90\" cy=\"82\" r=\"4\" fill=\"" << kColorD << "\"/>"
      << "<text x=\"100\" y=\"86\" font-size=\"12\">post-hoc selection</text>\n";
  out << "</svg>\n";
  return out.str();
}

namespace {

void draw_histogram_panel(std::ostringstream& out, Frame f, const HistogramSeries& s,
                          double hurdle, std::int64_t y_max) {
  const std::size_t n_bins = s.good_counts.size();
  const double bin_width = (s.hi - s.lo) / static_cast<double>(n_bins);
  f.xr = {s.lo, s.hi};
  f.yr = {0.0, static_cast<double>(std::max<std::int64_t>(y_max, 1))};

  draw_axes(out, f, "measured quality of the selected idea", "trials");
  out << "<text x=\"" << px(f.x0 + f.w / 2) << "\" y=\"" << px(f.y0 - 8)
      << "\" font-size=\"13\" text-anchor=\"middle\">" << s.label << "</text>\n";

  for (std::size_t b = 0; b < n_bins; ++b) {
    const double x_left = s.lo + static_cast<double>(b) * bin_width;
    const double wpx = f.X(x_left + bin_width) - f.X(x_left) - 0.5;
    const std::int64_t bad = s.bad_counts[b];
    const std::int64_t good = s.good_counts[b];
    if (bad > 0) {
      const double y_top = f.Y(static_cast<double>(bad));
      out << "<rect class=\"bar bar-bad\" x=\"" << px(f.X(x_left)) << "\" y=\""
          << px(y_top) << "\" width=\"" << px(std::max(wpx, 0.5)) << "\" height=\""
          << px(f.Y(0) - y_top) << "\" fill=\"" << kColorBad << "\"/>\n";
    }
    if (good > 0) {
      const double y_top = f.Y(static_cast<double>(bad + good));
      const double y_bot = f.Y(static_cast<double>(bad));
      out << "<rect class=\"bar bar-good\" x=\"" << px(f.X(x_left)) << "\" y=\""
          << px(y_top) << "\" width=\"" << px(std::max(wpx, 0.5)) << "\" height=\""
          << px(y_bot - y_top) << "\" fill=\"" << kColorGood << "\"/>\n";
    }
  }

  if (s.n > 0) {
    const double m = s.mean_mu_hat();
    if (m > f.xr.lo && m < f.xr.hi) {
      out << "<line class=\"mean\" x1=\"" << px(f.X(m)) << "\" y1=\"" << px(f.y0)
          << "\" x2=\"" << px(f.X(m)) << "\" y2=\"" << px(f.y0 + f.h)
          << "\" stroke=\"#222\" stroke-dasharray=\"5 4\" stroke-width=\"1.5\"/>\n";
    }
  } else {
    out << "<text class=\"empty-note\" x=\"" << px(f.x0 + f.w / 2) << "\" y=\""
        << px(f.y0 + f.h / 2)
        << "\" font-size=\"14\" text-anchor=\"middle\">no published trials</text>\n";
  }
  if (std::isfinite(hurdle) && hurdle > f.xr.lo && hurdle < f.xr.hi) {
    out << "<line class=\"hurdle\" x1=\"" << px(f.X(hurdle)) << "\" y1=\"" << px(f.y0)
        << "\" x2=\"" << px(f.X(hurdle)) << "\" y2=\"" << px(f.y0 + f.h) << "\" stroke=\""
        << kColorHurdle << "\" stroke-width=\"1.5\"/>\n";
  }
}

}  // namespace

std::string histogram_pair_svg(const HistogramSeries& series_O,
                               const HistogramSeries& series_D, double hurdle,
                               const std::string& title, PlotWarnings& warnings) {
  if (series_O.good_counts.size() != series_O.bad_counts.size() ||
      series_D.good_counts.size() != series_D.bad_counts.size()) {
    throw PreconditionError("histogram series have inconsistent bin counts");
  }
  if (series_O.hi - series_O.lo < 1e-12 || series_D.hi - series_D.lo < 1e-12) {
    warnings.push_back("histogram bin range degenerate; chart may be uninformative");
  }

  std::int64_t y_max = 0;
  const auto scan = [&y_max](const HistogramSeries& s) {
    for (std::size_t b = 0; b < s.good_counts.size(); ++b) {
      y_max = std::max(y_max, s.good_counts[b] + s.bad_counts[b]);
    }
  };
  scan(series_O);
  scan(series_D);

  std::ostringstream out;
  open_svg(out, 960, 440);
  out << "<text x=\"480\" y=\"24\" font-size=\"15\" text-anchor=\"middle\">" << title
      << "</text>\n";

  draw_histogram_panel(out, Frame{70, 60, 370, 300, {}, {}}, series_O, hurdle, y_max);
  draw_histogram_panel(out, Frame{540, 60, 370, 300, {}, {}}, series_D, hurdle, y_max);

  // legend (shared)
  out << "<rect x=\"410\" y=\"46\" width=\"12\" height=\"12\" fill=\"" << kColorGood
      << "\"/><text x=\"428\" y=\"56\" font-size=\"12\">good type</text>\n"
      << "<rect x=\"410\" y=\"64\" width=\"12\" height=\"12\" fill=\"" << kColorBad
      << "\"/><text x=\"428\" y=\"74\" font-size=\"12\">bad type</text>\n"
      << "<line x1=\"410\" y1=\"88\" x2=\"422\" y2=\"88\" stroke=\"#222\" "
         "stroke-dasharray=\"5 4\" stroke-width=\"1.5\"/>"
      << "<text x=\"428\" y=\"92\" font-size=\"12\">mean</text>\n"
      << "<line x1=\"410\" y1=\"106\" x2=\"422\" y2=\"106\" stroke=\"" << kColorHurdle
      << "\" stroke-width=\"1.5\"/>"
      << "<text x=\"428\" y=\"110\" font-size=\"12\">hurdle</text>\n";
  out << "</svg>\n";
  return out.str();
}

std::string sweep_svg(const SweepResult& result, std::optional<double> crossing,
                      PlotWarnings& warnings) {
  if (result.points.empty()) throw PreconditionError("sweep chart needs points");

  std::vector<std::pair<double, double>> improvement;
  std::vector<std::pair<double, double>> dl;
  std::vector<std::pair<double, double>> sl;
  double x_lo = std::numeric_limits<double>::infinity();
  double x_hi = -std::numeric_limits<double>::infinity();
  for (const SweepPoint& p : result.points) {
    if (std::isnan(p.grid_value)) continue;
    x_lo = std::min(x_lo, p.grid_value);
    x_hi = std::max(x_hi, p.grid_value);
    if (!p.ok) continue;
    if (p.report.improvement.defined) {
      improvement.emplace_back(p.grid_value, p.report.improvement.ratio);
    }
    dl.emplace_back(p.grid_value, p.report.darwinian_learning);
    sl.emplace_back(p.grid_value, p.report.statistical_learning);
  }
  if (improvement.empty() && dl.empty()) {
    throw PreconditionError("sweep chart has no drawable points");
  }
  const Range xr = sane_range(x_lo, x_hi, "sweep x", warnings);

  const auto y_range = [&warnings](const std::vector<std::pair<double, double>>& a,
                                   const std::vector<std::pair<double, double>>& b,
                                   const char* what) {
    double lo = 0.0, hi = 0.0;  // always include the zero line
    for (const auto& [x, y] : a) {
      lo = std::min(lo, y);
      hi = std::max(hi, y);
    }
    for (const auto& [x, y] : b) {
      lo = std::min(lo, y);
      hi = std::max(hi, y);
    }
    return sane_range(lo, hi, what, warnings);
  };

  std::ostringstream out;
  open_svg(out, 760, 720);
  const std::string x_label =
      result.config.axis == SweepAxis::heterogeneity_q
          ? "share of ideas the good type eliminates (q)"
          : (result.config.axis == SweepAxis::mu_sd ? "sd of true quality" : "grid value");

  Frame top{80, 50, 620, 260, xr, y_range(improvement, {}, "improvement y")};
  out << "<text x=\"380\" y=\"24\" font-size=\"15\" text-anchor=\"middle\">"
         "Post-hoc vs a-priori selection</text>\n";
  draw_axes(out, top, x_label, "relative improvement");
  out << "<line class=\"zero\" x1=\"" << px(top.X(xr.lo)) << "\" y1=\"" << px(top.Y(0))
      << "\" x2=\"" << px(top.X(xr.hi)) << "\" y2=\"" << px(top.Y(0)) << "\" stroke=\""
      << kColorRef << "\" stroke-dasharray=\"4 4\"/>\n";
  draw_polyline(out, top, improvement, kColorD, "series improvement");
  if (crossing && *crossing >= xr.lo && *crossing <= xr.hi) {
    const double cx = top.X(*crossing);
    const double cy = top.Y(0);
    out << "<line class=\"crossing\" x1=\"" << px(cx) << "\" y1=\"" << px(top.y0)
        << "\" x2=\"" << px(cx) << "\" y2=\"" << px(top.y0 + top.h)
        << "\" stroke=\"#444\" stroke-dasharray=\"2 3\"/>\n"
        << "<path class=\"crossing\" d=\"M " << px(cx) << ' ' << px(cy - 6) << " L "
        << px(cx + 6) << ' ' << px(cy) << " L " << px(cx) << ' ' << px(cy + 6) << " L "
        << px(cx - 6) << ' ' << px(cy) << " Z\" fill=\"#444\"/>\n"
        << "<text x=\"" << px(cx + 8) << "\" y=\"" << px(top.y0 + 16)
        << "\" font-size=\"12\">crossing at " << tick_label(*crossing) << "</text>\n";
  }

  Frame bottom{80, 400, 620, 260, xr, y_range(dl, sl, "learning y")};
  draw_axes(out, bottom, x_label, "learning components");
  out << "<line class=\"zero\" x1=\"" << px(bottom.X(xr.lo)) << "\" y1=\""
      << px(bottom.Y(0)) << "\" x2=\"" << px(bottom.X(xr.hi)) << "\" y2=\""
      << px(bottom.Y(0)) << "\" stroke=\"" << kColorRef
      << "\" stroke-dasharray=\"4 4\"/>\n";
  draw_polyline(out, bottom, dl, kColorO, "series darwinian");
  draw_polyline(out, bottom, sl, kColorD, "series statistical");
  out << "<line x1=\"560\" y1=\"376\" x2=\"584\" y2=\"376\" stroke=\"" << kColorO
      << "\" stroke-width=\"2\"/><text x=\"590\" y=\"380\" font-size=\"12\">"
         "darwinian learning</text>\n"
      << "<line x1=\"560\" y1=\"392\" x2=\"584\" y2=\"392\" stroke=\"" << kColorD
      << "\" stroke-width=\"2\"/><text x=\"590\" y=\"396\" font-size=\"12\">"
         "statistical learning</text>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace posthoc
