#pragma once

#include "ensemble_lab/curve.hpp"
#include "ensemble_lab/micro/tails.hpp"
#include "ensemble_lab/report.hpp"

namespace ensemble_lab {

enum class ConcavityMode { weak, strict };

struct ConcavityOptions {
  ConcavityMode mode = ConcavityMode::weak;
  double strict_epsilon = 0.0;    // strict: every slope change <= -strict_epsilon
  double sigma_multiplier = 2.0;  // weak: slope change <= k * pooled stderr
  double tol = 1e-10;             // noiseless curves: relative tolerance
};

/// Second differences (changes of secant slope) over usable points. Each
/// violating triple becomes a failing entry with its grid index as witness.
/// Throws insufficient-data error with fewer than 4 usable points.
ValidationReport concavity_check(const SampledCurve& curve, const ConcavityOptions& options = {});
ValidationReport concavity_check(const TailCurve& curve, const ConcavityOptions& options = {});

}  // namespace ensemble_lab
