#pragma once

#include <cstddef>
#include <vector>

namespace ensemble_lab {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached per order; thread-safe.
const GaussRule& gauss_legendre(std::size_t order);

/// Nodes/weights mapped to [a, b].
void gauss_legendre_on(std::size_t order, double a, double b, std::vector<double>& nodes,
                       std::vector<double>& weights);

}  // namespace ensemble_lab
