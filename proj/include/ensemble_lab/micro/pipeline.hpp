#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ensemble_lab/micro/sampling.hpp"
#include "ensemble_lab/micro/tails.hpp"
#include "ensemble_lab/micro/wang_landau.hpp"

namespace ensemble_lab {

enum class DosMode { off, when_needed, always };

struct TailPipelineOptions {
  std::size_t direct_samples = 200000;
  DosMode dos = DosMode::when_needed;
  WangLandauParams wl;
  Execution execution = Execution::parallel;
};

struct TailPipelineResult {
  TailCurve direct;
  std::optional<DosEstimate> dos;
  std::optional<TailCurve> dos_curve;
  std::optional<AnchoredTail> anchored;
  TailCurve combined;  // direct where reachable, anchored DOS beyond
  std::vector<std::string> notes;
};

/// Direct estimate on the grid; when points lack hits, a Wang-Landau DOS over
/// the grid range anchored to the direct points and combined with them.
/// Stream 1 of `seed` drives the direct sampler, stream 2 the DOS.
TailPipelineResult estimate_tail(const ModelSpec& model, std::span<const double> e_grid,
                                 TailDirection direction, const TailPipelineOptions& options,
                                 std::uint64_t seed);

}  // namespace ensemble_lab
