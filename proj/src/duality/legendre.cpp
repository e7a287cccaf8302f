#include "ensemble_lab/duality/legendre.hpp"

#include <algorithm>
#include <cmath>

#include "ensemble_lab/error.hpp"

namespace ensemble_lab {

namespace {

struct Finite {
  std::vector<double> x, y;
  std::vector<std::size_t> index;
  std::vector<std::string> notes;
};

// Finite samples; -inf is accepted only as a run at either end.
Finite finite_part(const SampledCurve& c) {
  c.validate();
  Finite f;
  std::size_t first = 0, last = c.size();
  while (first < last && c.y[first] == -kInf) ++first;
  while (last > first && c.y[last - 1] == -kInf) --last;
  if (first > 0) f.notes.push_back(std::to_string(first) + " -inf sentinel(s) at the left end ignored");
  if (last < c.size()) f.notes.push_back(std::to_string(c.size() - last) + " -inf sentinel(s) at the right end ignored");
  for (std::size_t i = first; i < last; ++i) {
    require(std::isfinite(c.y[i]), ErrorKind::data,
            "curve has a non-finite interior value at x=" + std::to_string(c.x[i]));
    f.x.push_back(c.x[i]);
    f.y.push_back(c.y[i]);
    f.index.push_back(i);
  }
  return f;
}

// Andrew's monotone chain, upper part (x sorted); vertex indices.
std::vector<std::size_t> upper_hull(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<std::size_t> hull;
  for (std::size_t i = 0; i < x.size(); ++i) {
    while (hull.size() >= 2) {
      const std::size_t a = hull[hull.size() - 2], b = hull.back();
      const double cross = (x[b] - x[a]) * (y[i] - y[a]) - (y[b] - y[a]) * (x[i] - x[a]);
      if (cross >= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(i);
  }
  return hull;
}

}  // namespace

SampledCurve legendre_concave(const SampledCurve& curve, double padding) {
  const Finite f = finite_part(curve);
  require(f.x.size() >= 3, ErrorKind::insufficient_data, "legendre_concave: need at least 3 finite points");
  std::vector<double> slopes;
  for (std::size_t i = 0; i + 1 < f.x.size(); ++i) {
    slopes.push_back((f.y[i + 1] - f.y[i]) / (f.x[i + 1] - f.x[i]));
  }
  // Hull edges span dents; their slopes are breakpoints too.
  const std::vector<std::size_t> hull = upper_hull(f.x, f.y);
  for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
    const std::size_t a = hull[k], b = hull[k + 1];
    if (b > a + 1) slopes.push_back((f.y[b] - f.y[a]) / (f.x[b] - f.x[a]));
  }
  std::sort(slopes.begin(), slopes.end());
  slopes.erase(std::unique(slopes.begin(), slopes.end()), slopes.end());
  if (padding > 0.0) {
    const double lo = slopes.front() - padding, hi = slopes.back() + padding;
    slopes.insert(slopes.begin(), lo);
    slopes.push_back(hi);
  }
  SampledCurve out;
  out.provenance = curve.provenance;
  out.notes = f.notes;
  for (double y : slopes) {
    double m = kInf;
    for (std::size_t i = 0; i < f.x.size(); ++i) m = std::min(m, f.x[i] * y - f.y[i]);
    out.x.push_back(y);
    out.y.push_back(m);
  }
  return out;
}

SampledCurve concave_envelope(const SampledCurve& curve) {
  const Finite f = finite_part(curve);
  require(!f.x.empty(), ErrorKind::insufficient_data, "concave_envelope: no finite points");
  const std::vector<std::size_t> hull = upper_hull(f.x, f.y);
  SampledCurve out = curve;
  out.std_error.clear();
  out.flagged.clear();
  out.notes = f.notes;
  std::size_t h = 0;
  for (std::size_t i = 0; i < f.x.size(); ++i) {
    while (h + 1 < hull.size() && hull[h + 1] < i) ++h;
    double v = f.y[i];
    if (h + 1 < hull.size() && hull[h] != i) {
      const std::size_t a = hull[h], b = hull[h + 1];
      const double t = (f.x[i] - f.x[a]) / (f.x[b] - f.x[a]);
      v = std::max(v, f.y[a] + t * (f.y[b] - f.y[a]));
    }
    out.y[f.index[i]] = v;
  }
  return out;
}

Superdifferential superdifferential(const SampledCurve& curve, double x0) {
  const Finite f = finite_part(curve);
  require(f.x.size() >= 2, ErrorKind::insufficient_data, "superdifferential: need at least 2 finite points");
  require(x0 >= f.x.front() && x0 <= f.x.back(), ErrorKind::domain,
          "superdifferential: x0 outside the finite range");
  auto slope = [&](std::size_t i) { return (f.y[i + 1] - f.y[i]) / (f.x[i + 1] - f.x[i]); };
  const std::size_t n = f.x.size();
  Superdifferential out;
  const auto it = std::lower_bound(f.x.begin(), f.x.end(), x0);
  const std::size_t k = static_cast<std::size_t>(it - f.x.begin());
  if (*it == x0) {
    if (k == 0) {
      out.slope_right = out.slope_left = slope(0);
      out.one_sided = true;
    } else if (k == n - 1) {
      out.slope_right = out.slope_left = slope(n - 2);
      out.one_sided = true;
    } else {
      out.slope_right = slope(k);
      out.slope_left = slope(k - 1);
    }
  } else {
    out.slope_right = out.slope_left = slope(k - 1);
  }
  return out;
}

EquivalenceGap equivalence_gap(const SampledCurve& S, const SampledCurve& F, double tol_equiv) {
  EquivalenceGap out;
  out.transform = legendre_concave(F);
  const SampledCurve& T = out.transform;
  double worst = -1.0;
  for (std::size_t i = 0; i < S.size(); ++i) {
    if (!S.usable(i)) continue;
    const double t = interpolate(T, S.x[i]);
    if (std::isnan(t)) continue;
    ++out.points;
    const double g = std::abs(S.y[i] - t);
    if (g > worst) {
      worst = g;
      out.argmax = S.x[i];
    }
  }
  require(out.points > 0, ErrorKind::data,
          "equivalence_gap: no S sample lies inside the range of the transformed free energy");
  out.gap = worst;
  out.pass = worst <= tol_equiv;
  return out;
}

AsymptoticSlope asymptotic_slope(const SampledCurve& curve, std::size_t window) {
  require(window >= 1, ErrorKind::usage, "asymptotic_slope: window must be >= 1");
  const SampledCurve c = curve.usable_points();
  require(c.size() >= window + 1, ErrorKind::insufficient_data,
          "asymptotic_slope: need window + 1 = " + std::to_string(window + 1) + " usable points, have " +
              std::to_string(c.size()));
  AsymptoticSlope out;
  const std::size_t first = c.size() - window - 1;
  std::vector<double> noise;
  for (std::size_t i = first; i + 1 < c.size(); ++i) {
    const double h = c.x[i + 1] - c.x[i];
    out.slopes.push_back((c.y[i + 1] - c.y[i]) / h);
    noise.push_back(std::hypot(c.error_at(i), c.error_at(i + 1)) / h);
  }
  out.final_slope = out.slopes.back();
  out.value = out.final_slope;

  bool all_decreasing = window >= 2;
  for (std::size_t k = 0; k + 1 < out.slopes.size(); ++k) {
    const double d = out.slopes[k + 1] - out.slopes[k];
    const double allowance = 2.0 * std::hypot(noise[k], noise[k + 1]) + 1e-12 * (1.0 + std::abs(out.slopes[k]));
    if (d > allowance) {
      out.trend_ok = false;
      out.warnings.push_back("slope increases between window positions " + std::to_string(k) + " and " +
                             std::to_string(k + 1) + " beyond noise");
    }
    if (!(d < -allowance)) all_decreasing = false;
  }

  if (out.slopes.size() >= 3) {
    const std::size_t m = out.slopes.size();
    const double d1 = out.slopes[m - 2] - out.slopes[m - 3];
    const double d2 = out.slopes[m - 1] - out.slopes[m - 2];
    if (d1 != 0.0) {
      const double r = d2 / d1;
      if (r >= 0.0 && r < 0.95) {
        out.extrapolated = out.slopes[m - 1] + d2 * r / (1.0 - r);
        out.value = out.extrapolated;
      } else if (r >= 1.0 && all_decreasing) {
        out.consistent_with_minus_infinity = true;
        out.warnings.push_back("slopes keep decreasing without contracting: consistent with -inf");
      }
    } else if (d2 == 0.0) {
      out.extrapolated = out.final_slope;
    }
  }
  return out;
}

}  // namespace ensemble_lab
