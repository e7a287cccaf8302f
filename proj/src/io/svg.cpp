#include "ensemble_lab/io/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ensemble_lab/error.hpp"

namespace ensemble_lab::io {

namespace {

constexpr double kWidth = 800, kHeight = 500;
constexpr double kLeft = 70, kRight = 170, kTop = 40, kBottom = 50;
constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v, int digits = 2) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string tick_label(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.4g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const std::vector<PlotSeries>& series, const std::string& title) {
  double x0 = kInf, x1 = -kInf, y0 = kInf, y1 = -kInf;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.curve.size(); ++i) {
      if (!std::isfinite(s.curve.x[i]) || !std::isfinite(s.curve.y[i])) continue;
      x0 = std::min(x0, s.curve.x[i]);
      x1 = std::max(x1, s.curve.x[i]);
      y0 = std::min(y0, s.curve.y[i]);
      y1 = std::max(y1, s.curve.y[i]);
    }
  }
  require(std::isfinite(x0), ErrorKind::data, "plot: no finite points");
  if (x1 == x0) { x0 -= 0.5; x1 += 0.5; }
  if (y1 == y0) { y0 -= 0.5; y1 += 0.5; }
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto X = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  auto Y = [&](double y) { return kTop + (y1 - y) / (y1 - y0) * ph; };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" viewBox=\"0 0 800 500\">\n";
  s += "<rect width=\"800\" height=\"500\" fill=\"white\"/>\n";
  if (!title.empty()) {
    s += "<text x=\"" + fmt(kLeft + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" +
         escape(title) + "</text>\n";
  }
  s += "<rect x=\"" + fmt(kLeft) + "\" y=\"" + fmt(kTop) + "\" width=\"" + fmt(pw) + "\" height=\"" + fmt(ph) +
       "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double xv = x0 + (x1 - x0) * k / 5.0, yv = y0 + (y1 - y0) * k / 5.0;
    s += "<line x1=\"" + fmt(X(xv)) + "\" y1=\"" + fmt(kTop + ph) + "\" x2=\"" + fmt(X(xv)) + "\" y2=\"" +
         fmt(kTop + ph + 5) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + fmt(X(xv)) + "\" y=\"" + fmt(kTop + ph + 20) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + tick_label(xv) + "</text>\n";
    s += "<line x1=\"" + fmt(kLeft - 5) + "\" y1=\"" + fmt(Y(yv)) + "\" x2=\"" + fmt(kLeft) + "\" y2=\"" + fmt(Y(yv)) +
         "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + fmt(kLeft - 8) + "\" y=\"" + fmt(Y(yv) + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + tick_label(yv) + "</text>\n";
  }
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& c = series[k].curve;
    const std::string color = kPalette[k % (sizeof kPalette / sizeof kPalette[0])];
    std::string pts;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (!std::isfinite(c.x[i]) || !std::isfinite(c.y[i])) continue;
      if (!pts.empty()) pts += ' ';
      pts += fmt(X(c.x[i])) + ',' + fmt(Y(c.y[i]));
    }
    s += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (!std::isfinite(c.x[i]) || !std::isfinite(c.y[i])) continue;
      if (c.is_flagged(i)) {
        s += "<rect class=\"flagged\" x=\"" + fmt(X(c.x[i]) - 4) + "\" y=\"" + fmt(Y(c.y[i]) - 4) +
             "\" width=\"8\" height=\"8\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.5\"/>\n";
      } else {
        s += "<circle cx=\"" + fmt(X(c.x[i])) + "\" cy=\"" + fmt(Y(c.y[i])) + "\" r=\"2\" fill=\"" + color + "\"/>\n";
      }
    }
    const double ly = kTop + 10 + 20.0 * static_cast<double>(k);
    s += "<line x1=\"" + fmt(kWidth - kRight + 15) + "\" y1=\"" + fmt(ly) + "\" x2=\"" + fmt(kWidth - kRight + 40) +
         "\" y2=\"" + fmt(ly) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    s += "<text x=\"" + fmt(kWidth - kRight + 45) + "\" y=\"" + fmt(ly + 4) +
         "\" font-family=\"sans-serif\" font-size=\"12\">" + escape(series[k].label) + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace ensemble_lab::io
