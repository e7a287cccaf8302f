#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ensemble_lab/curve.hpp"

namespace ensemble_lab {

/// f*(y) = min_i (x_i y - f(x_i)) over the finite samples, evaluated at the
/// sorted distinct secant slopes of the input and of its upper hull (the
/// breakpoints of the transform), extended by `padding` on both sides when
/// positive. End
/// sentinels (-inf) are skipped and noted; interior -inf is an error.
SampledCurve legendre_concave(const SampledCurve& curve, double padding = 0.0);

/// Upper concave hull of the finite samples evaluated at every sample
/// abscissa. Values never fall below the input.
SampledCurve concave_envelope(const SampledCurve& curve);

struct Superdifferential {
  double slope_right = kNaN;  // f'(x0+)
  double slope_left = kNaN;   // f'(x0-)
  bool one_sided = false;     // x0 at the end of the finite range
};

Superdifferential superdifferential(const SampledCurve& curve, double x0);

struct EquivalenceGap {
  double gap = kNaN;
  double argmax = kNaN;
  bool pass = false;
  std::size_t points = 0;     // S samples inside the transform's range
  SampledCurve transform;     // F* on its dual grid
};

/// max |S(e) - F*(e)| over the usable S samples inside the range of F*,
/// with F* interpolated linearly (exact for the sampled model).
EquivalenceGap equivalence_gap(const SampledCurve& S, const SampledCurve& F, double tol_equiv = 1e-3);

struct AsymptoticSlope {
  double value = kNaN;        // extrapolated limit when the slopes contract, else the final slope
  double final_slope = kNaN;
  double extrapolated = kNaN;
  std::vector<double> slopes; // last `window` secant slopes, increasing abscissa
  bool trend_ok = true;       // slopes non-increasing within noise
  bool consistent_with_minus_infinity = false;
  std::vector<std::string> warnings;
};

/// Secant slopes over the last window + 1 usable points.
AsymptoticSlope asymptotic_slope(const SampledCurve& curve, std::size_t window);

}  // namespace ensemble_lab
