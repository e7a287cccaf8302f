#include "ensemble_lab/micro/concavity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ensemble_lab/error.hpp"

namespace ensemble_lab {

ValidationReport concavity_check(const SampledCurve& curve, const ConcavityOptions& options) {
  curve.validate();
  const SampledCurve c = curve.usable_points();
  require(c.size() >= 4, ErrorKind::insufficient_data,
          "concavity check needs at least 4 finite points, got " + std::to_string(c.size()));
  const bool noisy = c.has_errors();
  ValidationReport report(options.mode == ConcavityMode::strict ? "concavity(strict)"
                                                                : "concavity(weak)");
  double worst = kInf;
  std::size_t violations = 0;
  for (std::size_t i = 1; i + 1 < c.size(); ++i) {
    const double h1 = c.x[i] - c.x[i - 1];
    const double h2 = c.x[i + 1] - c.x[i];
    const double change = (c.y[i + 1] - c.y[i]) / h2 - (c.y[i] - c.y[i - 1]) / h1;
    double allowance = 0.0;
    if (noisy) {
      const double a = c.std_error[i - 1] / h1;
      const double b = c.std_error[i] * (1.0 / h1 + 1.0 / h2);
      const double d = c.std_error[i + 1] / h2;
      allowance = options.sigma_multiplier * std::sqrt(a * a + b * b + d * d);
    } else {
      const double scale = std::max({std::abs(c.y[i - 1]), std::abs(c.y[i]), std::abs(c.y[i + 1]), 1.0});
      allowance = options.tol * scale / std::min(h1, h2);
    }
    if (options.mode == ConcavityMode::strict) allowance = std::min(allowance, -options.strict_epsilon);
    const double margin = allowance - change;
    worst = std::min(worst, margin);
    if (margin < 0.0) {
      ++violations;
      // Locate the triple in the caller's indexing.
      std::size_t original = 0;
      for (std::size_t k = 0; k < curve.size(); ++k) {
        if (curve.x[k] == c.x[i]) original = k;
      }
      std::ostringstream os;
      os << "slope change " << change << " exceeds allowance " << allowance;
      report.add_fail("triple@" + std::to_string(original), margin,
                      Witness{{c.x[i - 1], c.x[i], c.x[i + 1]}, original, os.str()});
    }
  }
  if (violations == 0) {
    report.add_pass("second_differences", worst,
                    std::to_string(c.size() - 2) + " interior triples, min margin");
  }
  return report;
}

ValidationReport concavity_check(const TailCurve& curve, const ConcavityOptions& options) {
  return concavity_check(curve.as_curve(), options);
}

}  // namespace ensemble_lab
