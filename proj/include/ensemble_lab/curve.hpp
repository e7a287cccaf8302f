#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace ensemble_lab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Scalar Monte Carlo estimate.
struct EstimateWithError {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

enum class Provenance { micro, macro, synthetic };

/// A function sampled on a strictly increasing abscissa grid.
///
/// `y` may hold -inf sentinels at either end of the grid. `std_error` and
/// `flagged` are either empty or have the same length as `x`; a flagged point
/// is excluded from shape tests (it marks e.g. a Monte Carlo point without
/// enough hits).
struct SampledCurve {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> std_error;
  std::vector<std::uint8_t> flagged;
  Provenance provenance = Provenance::synthetic;
  std::vector<std::string> notes;

  std::size_t size() const { return x.size(); }
  bool has_errors() const { return !std_error.empty(); }
  double error_at(std::size_t i) const { return std_error.empty() ? 0.0 : std_error[i]; }
  bool is_flagged(std::size_t i) const { return !flagged.empty() && flagged[i] != 0; }

  /// Usable for shape tests: finite value and not flagged.
  bool usable(std::size_t i) const;

  /// Throws LabError(usage) when sizes disagree or x is not strictly increasing.
  void validate() const;

  /// Copy restricted to the usable points.
  SampledCurve usable_points() const;
};

SampledCurve make_curve(std::vector<double> x, std::vector<double> y,
                        Provenance provenance = Provenance::synthetic);

/// Linear interpolation inside [x.front(), x.back()]; NaN outside.
double interpolate(const SampledCurve& curve, double at);

}  // namespace ensemble_lab
