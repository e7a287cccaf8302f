#include "ensemble_lab/curve.hpp"

#include <algorithm>
#include <cmath>

#include "ensemble_lab/error.hpp"

namespace ensemble_lab {

bool SampledCurve::usable(std::size_t i) const {
  return std::isfinite(y[i]) && !is_flagged(i);
}

void SampledCurve::validate() const {
  require(y.size() == x.size(), ErrorKind::usage, "curve: x and y sizes differ");
  require(std_error.empty() || std_error.size() == x.size(), ErrorKind::usage,
          "curve: std_error size differs from x");
  require(flagged.empty() || flagged.size() == x.size(), ErrorKind::usage,
          "curve: flag vector size differs from x");
  for (std::size_t i = 1; i < x.size(); ++i) {
    require(x[i] > x[i - 1], ErrorKind::usage, "curve: abscissae not strictly increasing");
  }
}

SampledCurve SampledCurve::usable_points() const {
  SampledCurve out;
  out.provenance = provenance;
  out.notes = notes;
  for (std::size_t i = 0; i < size(); ++i) {
    if (!usable(i)) continue;
    out.x.push_back(x[i]);
    out.y.push_back(y[i]);
    if (has_errors()) out.std_error.push_back(std_error[i]);
  }
  return out;
}

SampledCurve make_curve(std::vector<double> x, std::vector<double> y, Provenance provenance) {
  SampledCurve c;
  c.x = std::move(x);
  c.y = std::move(y);
  c.provenance = provenance;
  c.validate();
  return c;
}

double interpolate(const SampledCurve& curve, double at) {
  const auto& x = curve.x;
  if (x.empty() || at < x.front() || at > x.back()) return kNaN;
  if (x.size() == 1) return curve.y.front();
  auto it = std::upper_bound(x.begin(), x.end(), at);
  std::size_t hi = static_cast<std::size_t>(it - x.begin());
  if (hi >= x.size()) return curve.y.back();
  std::size_t lo = hi - 1;
  const double t = (at - x[lo]) / (x[hi] - x[lo]);
  if (t == 0.0) return curve.y[lo];
  return curve.y[lo] + t * (curve.y[hi] - curve.y[lo]);
}

}  // namespace ensemble_lab
