#include "mcsense/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <tuple>
#include <utility>

#include "mcsense/error.hpp"

namespace mcsense {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 160, kTop = 40, kBottom = 55;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points{};
  bool staircase = false;
  bool dashed = false;
  bool markers = true;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

class Chart {
 public:
  Chart(double x0, double x1, double y0, double y1) : x0_(x0), x1_(x1), y0_(y0), y1_(y1) {
    if (x1_ <= x0_) x1_ = x0_ + 1.0;
    if (y1_ <= y0_) y1_ = y0_ + 1.0;
  }

  double px(double x) const { return kLeft + (x - x0_) / (x1_ - x0_) * (kWidth - kLeft - kRight); }
  double py(double y) const {
    return kHeight - kBottom - (y - y0_) / (y1_ - y0_) * (kHeight - kTop - kBottom);
  }

  std::string render(const std::string& title, const std::string& xlabel,
                     const std::string& ylabel, const std::vector<Series>& series) const {
    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt("%.0f", kWidth) +
         "\" height=\"" + fmt("%.0f", kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += "<text x=\"" + fmt("%.1f", kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
         escape(title) + "</text>\n";
    s += axes(xlabel, ylabel);
    for (std::size_t i = 0; i < series.size(); ++i) {
      s += draw(series[i], kPalette[i % std::size(kPalette)], i);
    }
    s += "</svg>\n";
    return s;
  }

 private:
  std::string axes(const std::string& xlabel, const std::string& ylabel) const {
    std::string s;
    const double left = px(x0_), right = px(x1_), top = py(y1_), bottom = py(y0_);
    s += "<g stroke=\"#444\" fill=\"none\">\n";
    s += "<rect x=\"" + fmt("%.1f", left) + "\" y=\"" + fmt("%.1f", top) + "\" width=\"" +
         fmt("%.1f", right - left) + "\" height=\"" + fmt("%.1f", bottom - top) + "\"/>\n";
    s += "</g>\n";
    for (int t = 0; t <= 5; ++t) {
      const double xv = x0_ + (x1_ - x0_) * t / 5.0;
      const double yv = y0_ + (y1_ - y0_) * t / 5.0;
      s += "<line x1=\"" + fmt("%.1f", px(xv)) + "\" y1=\"" + fmt("%.1f", bottom) + "\" x2=\"" +
           fmt("%.1f", px(xv)) + "\" y2=\"" + fmt("%.1f", top) + "\" stroke=\"#ddd\"/>\n";
      s += "<line x1=\"" + fmt("%.1f", left) + "\" y1=\"" + fmt("%.1f", py(yv)) + "\" x2=\"" +
           fmt("%.1f", right) + "\" y2=\"" + fmt("%.1f", py(yv)) + "\" stroke=\"#ddd\"/>\n";
      s += "<text x=\"" + fmt("%.1f", px(xv)) + "\" y=\"" + fmt("%.1f", bottom + 16) +
           "\" text-anchor=\"middle\">" + fmt("%.3g", xv) + "</text>\n";
      s += "<text x=\"" + fmt("%.1f", left - 6) + "\" y=\"" + fmt("%.1f", py(yv) + 4) +
           "\" text-anchor=\"end\">" + fmt("%.3g", yv) + "</text>\n";
    }
    s += "<text x=\"" + fmt("%.1f", (left + right) / 2) + "\" y=\"" + fmt("%.1f", kHeight - 15) +
         "\" text-anchor=\"middle\">" + escape(xlabel) + "</text>\n";
    s += "<text x=\"18\" y=\"" + fmt("%.1f", (top + bottom) / 2) +
         "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " + fmt("%.1f", (top + bottom) / 2) +
         ")\">" + escape(ylabel) + "</text>\n";
    return s;
  }

  std::string draw(const Series& series, const char* color, std::size_t index) const {
    std::string path;
    for (std::size_t k = 0; k < series.points.size(); ++k) {
      const auto [x, y] = series.points[k];
      if (k == 0) {
        path += "M" + fmt("%.2f", px(x)) + "," + fmt("%.2f", py(y));
      } else if (series.staircase) {
        // hold the previous level up to the next step, then jump
        path += " H" + fmt("%.2f", px(x)) + " V" + fmt("%.2f", py(y));
      } else {
        path += " L" + fmt("%.2f", px(x)) + "," + fmt("%.2f", py(y));
      }
    }
    std::string s = "<path d=\"" + path + "\" fill=\"none\" stroke=\"" + color +
                    "\" stroke-width=\"1.8\"" +
                    (series.dashed ? std::string(" stroke-dasharray=\"6 4\"") : std::string()) +
                    "/>\n";
    if (series.markers && !series.staircase) {
      for (const auto& [x, y] : series.points) {
        s += "<circle cx=\"" + fmt("%.2f", px(x)) + "\" cy=\"" + fmt("%.2f", py(y)) +
             "\" r=\"3\" fill=\"" + color + "\"/>\n";
      }
    }
    const double ly = kTop + 12 + 18.0 * index;
    const double lx = kWidth - kRight + 12;
    s += "<line x1=\"" + fmt("%.1f", lx) + "\" y1=\"" + fmt("%.1f", ly - 4) + "\" x2=\"" +
         fmt("%.1f", lx + 20) + "\" y2=\"" + fmt("%.1f", ly - 4) + "\" stroke=\"" + color +
         "\" stroke-width=\"2\"/>\n";
    s += "<text x=\"" + fmt("%.1f", lx + 26) + "\" y=\"" + fmt("%.1f", ly) + "\">" +
         escape(series.label) + "</text>\n";
    return s;
  }

  double x0_, x1_, y0_, y1_;
};

std::pair<double, double> extent(const std::vector<Series>& series, bool use_x) {
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      const double v = use_x ? x : y;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  return {lo, hi};
}

double to_db(double v) { return 10.0 * std::log10(std::max(v, 1e-12)); }

}  // namespace

PlotKind plot_kind_from_string(const std::string& name) {
  if (name == "pd") return PlotKind::PdVsSnr;
  if (name == "pf") return PlotKind::PfVsSnr;
  if (name == "pd-m") return PlotKind::PdVsM;
  throw Error(ErrorKind::InvalidConfig, "unknown plot kind '" + name + "'");
}

std::string render_metrics_svg(const std::vector<MetricsRow>& rows, PlotKind kind) {
  if (rows.empty()) throw Error(ErrorKind::EmptyTable, "no rows to plot");

  // std::map gives a stable series order independent of row order
  std::map<std::tuple<int, double, double>, Series> grouped;
  for (const auto& r : rows) {
    std::tuple<int, double, double> key;
    std::string label;
    double x = 0.0;
    if (kind == PlotKind::PdVsM) {
      key = {static_cast<int>(r.method), r.alpha, r.snr_db};
      label = std::string(to_string(r.method)) + " SNR=" + fmt("%g", r.snr_db) + "dB";
      x = r.snapshots;
    } else {
      key = {static_cast<int>(r.method), r.alpha, static_cast<double>(r.snapshots)};
      label = std::string(to_string(r.method)) + " a=" + fmt("%.3g", r.alpha) + " M=" +
              std::to_string(r.snapshots);
      x = r.snr_db;
    }
    auto& s = grouped[key];
    s.label = label;
    s.points.emplace_back(x, kind == PlotKind::PfVsSnr ? r.pf : r.pd);
  }
  std::vector<Series> series;
  for (auto& [key, s] : grouped) {
    std::sort(s.points.begin(), s.points.end());
    series.push_back(std::move(s));
  }

  const auto [x0, x1] = extent(series, true);
  double y1 = 1.0;
  if (kind == PlotKind::PfVsSnr) y1 = std::max(0.02, extent(series, false).second * 1.1);
  Chart chart(x0, x1, 0.0, y1);
  switch (kind) {
    case PlotKind::PdVsSnr:
      return chart.render("Detection probability vs SNR", "SNR [dB]", "Pd", series);
    case PlotKind::PfVsSnr:
      return chart.render("False-alarm probability vs SNR", "SNR [dB]", "Pf", series);
    case PlotKind::PdVsM:
      return chart.render("Detection probability vs sensing period", "M [samples]", "Pd", series);
  }
  return {};
}

std::string render_trace_svg(const DetectionResult& result) {
  if (result.steps.empty()) throw Error(ErrorKind::EmptyTable, "detection trace has no steps");
  const int p = result.pattern.size();
  Series lse{.label = "J(b_i)"};
  Series threshold{.label = "(p-i) sigma^2", .staircase = true, .dashed = true};
  lse.points.emplace_back(0.0, to_db(result.initial_j));
  threshold.points.emplace_back(0.0, to_db(p * result.sigma2));
  for (std::size_t i = 0; i < result.steps.size(); ++i) {
    const double step = static_cast<double>(i + 1);
    lse.points.emplace_back(step, to_db(result.steps[i].j));
    threshold.points.emplace_back(step, to_db(result.steps[i].threshold));
  }
  std::vector<Series> series{lse, threshold};
  const auto [y0, y1] = extent(series, false);
  Chart chart(0.0, static_cast<double>(result.steps.size()), std::floor(y0 - 1.0),
              std::ceil(y1 + 1.0));
  return chart.render("Sequential forward NLLS", "step i", "LSE [dB]", series);
}

std::string render_psd_svg(const std::vector<PsdPoint>& psd) {
  if (psd.empty()) throw Error(ErrorKind::EmptyTable, "empty PSD");
  Series s{.label = "PSD", .markers = false};
  for (const auto& pt : psd) s.points.emplace_back(pt.frequency_hz / 1e6, to_db(pt.power));
  std::vector<Series> series{s};
  const auto [x0, x1] = extent(series, true);
  const auto [y0, y1] = extent(series, false);
  Chart chart(x0, x1, std::floor(y0), std::ceil(y1));
  return chart.render("Empirical PSD", "frequency [MHz]", "PSD [dB]", series);
}

}  // namespace mcsense
