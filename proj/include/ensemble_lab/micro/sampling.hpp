#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "ensemble_lab/micro/configuration.hpp"
#include "ensemble_lab/model/model.hpp"

namespace ensemble_lab {

/// Samples are generated in fixed-size blocks; block b draws from stream b
/// of the run seed. Results are therefore identical for any worker count.
inline constexpr std::size_t kSampleBlock = 4096;

/// Draws configuration `index` of block `block` sequentially into `out`.
void draw_configuration(const ModelSpec& model, Rng& rng, Configuration& out);

/// Calls visit(index, config) for the first M configurations, in order.
void sample_prior_configs(const ModelSpec& model, std::size_t M, std::uint64_t seed,
                          const std::function<void(std::size_t, const Configuration&)>& visit);

enum class Execution { serial, parallel };

/// Energies per particle H/N of M prior configurations (index order).
std::vector<double> sample_energies(const ModelSpec& model, std::size_t M, std::uint64_t seed,
                                    Execution execution = Execution::parallel);

}  // namespace ensemble_lab
