#pragma once

#include "ensemble_lab/micro/configuration.hpp"
#include "ensemble_lab/model/model.hpp"

namespace ensemble_lab {

/// H = (1/N) sum_{i<j} W(x_i, x_j) + sum_i V(x_i), in (-inf, +inf].
///
/// Pair and one-body terms are summed in sorted order, so the result is
/// bitwise invariant under permutations of the points.
double hamiltonian(const ModelSpec& model, const Configuration& config);

/// Copy of the model with W and V negated (H -> -H exactly).
ModelSpec negated_model(const ModelSpec& model);

}  // namespace ensemble_lab
