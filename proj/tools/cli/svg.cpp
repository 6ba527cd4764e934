#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "cli.hpp"

namespace orlicz::cli {

namespace {

constexpr double kWidth = 720, kHeight = 440;
constexpr double kLeft = 70, kRight = 170, kTop = 40, kBottom = 50;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
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

// Index of best_k in the grid, else the grid point closest to k = 1 in log.
std::size_t plotted_k(const ModularConvergence& mc) {
  std::size_t best = 0;
  double score = INFINITY;
  for (std::size_t i = 0; i < mc.k_grid.size(); ++i) {
    const double s = mc.best_k ? std::abs(mc.k_grid[i] - *mc.best_k)
                               : std::abs(std::log(mc.k_grid[i]));
    if (s < score) {
      score = s;
      best = i;
    }
  }
  return best;
}

struct Series {
  std::string label;
  std::string color;
  std::vector<double> values;  // [n - 1]
};

}  // namespace

std::string render_svg(const ConvergenceReport& r, const std::string& title) {
  std::vector<Series> series;
  for (const ModularConvergence* mc : {&r.modular_l, &r.modular_h}) {
    if (mc->k_grid.empty()) continue;
    const std::size_t ki = plotted_k(*mc);
    Series s{std::string(mc == &r.modular_l ? "modular L" : "modular H") + " (k=" +
                 [&] {
                   char b[32];
                   std::snprintf(b, sizeof b, "%g", mc->k_grid[ki]);
                   return std::string(b);
                 }() + ")",
             mc == &r.modular_l ? "#1f77b4" : "#17becf", {}};
    for (const ModularValue& v : mc->values[ki]) s.values.push_back(v.value);
    series.push_back(std::move(s));
  }
  for (const NormConvergence* nc : {&r.norm_l, &r.norm_h}) {
    Series s{nc == &r.norm_l ? "norm L" : "norm H", nc == &r.norm_l ? "#d62728" : "#ff7f0e", {}};
    for (const NormValue& v : nc->norms) s.values.push_back(v.value);
    series.push_back(std::move(s));
  }

  double lo = INFINITY, hi = -INFINITY;
  for (const Series& s : series) {
    for (double v : s.values) {
      if (v > 0 && std::isfinite(v)) {
        lo = std::min(lo, std::log10(v));
        hi = std::max(hi, std::log10(v));
      }
    }
  }
  if (!std::isfinite(lo)) {
    lo = -1;
    hi = 0;
  }
  lo = std::floor(lo);
  hi = std::max(std::ceil(hi), lo + 1);

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  const int n_max = std::max(r.n_max, 2);
  const auto x_of = [&](int n) { return kLeft + pw * (n - 1) / (n_max - 1); };
  const auto y_of = [&](double v) { return kTop + ph * (hi - std::log10(v)) / (hi - lo); };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(kWidth) +
         "\" height=\"" + num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " +
         num(kHeight) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + num(kLeft) + "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" +
         escape(title) + ": distance to the limit vs n</text>\n";
  svg += "<g stroke=\"#ccc\" stroke-width=\"1\" font-family=\"sans-serif\" font-size=\"11\">\n";
  const int decades = static_cast<int>(hi - lo);
  const int step = std::max(1, decades / 8);
  for (int d = static_cast<int>(lo); d <= static_cast<int>(hi); d += step) {
    const double y = y_of(std::pow(10.0, d));
    svg += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(y) + "\" x2=\"" + num(kLeft + pw) +
           "\" y2=\"" + num(y) + "\"/>\n";
    svg += "<text stroke=\"none\" fill=\"black\" x=\"" + num(kLeft - 8) + "\" y=\"" +
           num(y + 4) + "\" text-anchor=\"end\">1e" + std::to_string(d) + "</text>\n";
  }
  const int xstep = std::max(1, (n_max - 1) / 10);
  for (int n = 1; n <= n_max; n += xstep) {
    svg += "<text stroke=\"none\" fill=\"black\" x=\"" + num(x_of(n)) + "\" y=\"" +
           num(kTop + ph + 18) + "\" text-anchor=\"middle\">" + std::to_string(n) + "</text>\n";
  }
  svg += "</g>\n";
  svg += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) +
         "\" height=\"" + num(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
  svg += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 10) +
         "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">n</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const Series& s = series[si];
    // Nonpositive and non-finite values break the line.
    std::string points;
    const auto flush = [&] {
      if (!points.empty()) {
        svg += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"2\" points=\"" +
               points + "\"/>\n";
      }
      points.clear();
    };
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      const double v = s.values[i];
      if (!(v > 0) || !std::isfinite(v)) {
        flush();
        continue;
      }
      if (!points.empty()) points += " ";
      points += num(x_of(static_cast<int>(i) + 1)) + "," + num(y_of(v));
    }
    flush();
    const double ly = kTop + 16 + 20 * static_cast<double>(si);
    svg += "<line x1=\"" + num(kLeft + pw + 12) + "\" y1=\"" + num(ly) + "\" x2=\"" +
           num(kLeft + pw + 32) + "\" y2=\"" + num(ly) + "\" stroke=\"" + s.color +
           "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + num(kLeft + pw + 38) + "\" y=\"" + num(ly + 4) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + escape(s.label) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace orlicz::cli
