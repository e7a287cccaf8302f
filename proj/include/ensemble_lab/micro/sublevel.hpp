#pragma once

#include <cstdint>

#include "ensemble_lab/curve.hpp"

namespace ensemble_lab {

/// K = vol{ z in (C^n)^N : sum_i |z_i|^alpha <= 1 } by Monte Carlo with
/// relative standard error <= rel_se_target. Cached per (alpha, n, N).
EstimateWithError sublevel_unit_volume(double alpha, int n, int N, double rel_se_target = 0.005,
                                       std::uint64_t seed = 0x5eed5eedULL);

/// vol{ sum_i |z_i|^alpha <= e } = K e^{2nN/alpha}, for prior = Lebesgue on the
/// product of balls of radius `radius` in C^n. Throws precondition error if
/// the sublevel set leaves that product (e^{1/alpha} > radius).
double exact_sublevel_volume_powerlaw(double alpha, int n, int N, double e, double radius = 1.0);

}  // namespace ensemble_lab
