#include "ensemble_lab/micro/sampling.hpp"

#include <algorithm>

#include "ensemble_lab/error.hpp"
#include "ensemble_lab/micro/hamiltonian.hpp"
#include "ensemble_lab/parallel.hpp"

namespace ensemble_lab {

void draw_configuration(const ModelSpec& model, Rng& rng, Configuration& out) {
  const std::size_t n = static_cast<std::size_t>(model.particles());
  if (out.dim != model.dim() || out.size() != n) out = Configuration(model.dim(), n);
  for (std::size_t i = 0; i < n; ++i) model.prior.sample(rng, out.point(i));
}

void sample_prior_configs(const ModelSpec& model, std::size_t M, std::uint64_t seed,
                          const std::function<void(std::size_t, const Configuration&)>& visit) {
  Configuration c(model.dim(), static_cast<std::size_t>(model.particles()));
  const std::size_t blocks = (M + kSampleBlock - 1) / kSampleBlock;
  for (std::size_t b = 0; b < blocks; ++b) {
    Rng rng = make_rng(seed, b);
    const std::size_t end = std::min(M, (b + 1) * kSampleBlock);
    for (std::size_t i = b * kSampleBlock; i < end; ++i) {
      draw_configuration(model, rng, c);
      visit(i, c);
    }
  }
}

std::vector<double> sample_energies(const ModelSpec& model, std::size_t M, std::uint64_t seed,
                                    Execution execution) {
  model.validate();
  const int N = model.particles();
  std::vector<double> out(M);
  const std::size_t blocks = (M + kSampleBlock - 1) / kSampleBlock;
  auto run_block = [&](std::size_t b) {
    Rng rng = make_rng(seed, b);
    Configuration c(model.dim(), static_cast<std::size_t>(N));
    const std::size_t end = std::min(M, (b + 1) * kSampleBlock);
    for (std::size_t i = b * kSampleBlock; i < end; ++i) {
      draw_configuration(model, rng, c);
      out[i] = hamiltonian(model, c) / N;
    }
  };
  if (execution == Execution::parallel) {
    parallel_blocks(blocks, run_block);
  } else {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
  }
  return out;
}

}  // namespace ensemble_lab
