#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "ensemble_lab/model/domain.hpp"
#include "ensemble_lab/model/kernel.hpp"
#include "ensemble_lab/model/potential.hpp"
#include "ensemble_lab/model/prior.hpp"

namespace ensemble_lab {

/// One statistical-mechanics model: (X, W, V, mu0) and optionally N.
struct ModelSpec {
  std::string name = "model";
  Domain domain;
  PairKernel W = PairKernel::zero();
  ExteriorPotential V = ExteriorPotential::zero();
  PriorMeasure prior = PriorMeasure::gaussian(2, 1.0);
  std::optional<int> N;
  std::optional<std::uint64_t> seed;
  /// Recorded, not checked (e.g. "energy_approximation_property").
  std::map<std::string, bool> flags;

  int dim() const { return domain.dim; }
  /// Rotation invariant W, V and mu0.
  bool is_radial() const;
  /// Throws configuration error on inconsistent dimensions or domains.
  void validate() const;
  int particles() const;
};

}  // namespace ensemble_lab
