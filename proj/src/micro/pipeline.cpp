#include "ensemble_lab/micro/pipeline.hpp"

#include <algorithm>

#include "ensemble_lab/error.hpp"
#include "ensemble_lab/micro/sampling.hpp"
#include "ensemble_lab/random.hpp"

namespace ensemble_lab {

TailPipelineResult estimate_tail(const ModelSpec& model, std::span<const double> e_grid,
                                 TailDirection direction, const TailPipelineOptions& options,
                                 std::uint64_t seed) {
  require(e_grid.size() >= 2, ErrorKind::usage, "tail pipeline: need at least 2 grid energies");
  TailPipelineResult out;
  const std::vector<double> energies =
      sample_energies(model, options.direct_samples, stream_seed(seed, 1), options.execution);
  out.direct = tail_from_energies(energies, e_grid, model.particles(), direction);
  out.direct.M = options.direct_samples;
  out.direct.seed = seed;
  out.combined = out.direct;

  const bool needs_dos = std::any_of(out.direct.flagged.begin(), out.direct.flagged.end(),
                                     [](std::uint8_t f) { return f != 0; });
  if (options.dos == DosMode::off || (options.dos == DosMode::when_needed && !needs_dos)) {
    out.notes.push_back(needs_dos ? "DOS disabled: unreachable points stay flagged"
                                  : "all grid points reached directly");
    return out;
  }
  // Grid ends sit on bin edges; beyond them the open under/overflow states
  // carry the tail mass, so no bin straddles an unreachable region.
  out.dos = tail_logprob_dos(model, e_grid.front(), e_grid.back(), options.wl, stream_seed(seed, 2));
  out.dos_curve = dos_tail_curve(*out.dos, e_grid, direction);
  out.anchored = anchor_dos_tail(*out.dos_curve, out.direct);
  out.combined = combine_tails(out.direct, out.anchored->curve);
  out.combined.M = options.direct_samples;
  out.combined.seed = seed;
  out.notes.push_back("DOS anchored on " + std::to_string(out.anchored->overlap) + " points");
  return out;
}

}  // namespace ensemble_lab
