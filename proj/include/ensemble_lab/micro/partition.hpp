#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ensemble_lab/model/model.hpp"

namespace ensemble_lab {

struct PartitionEstimate {
  std::size_t samples = 0;
  double value = 0.0;
  double std_error = 0.0;
};

/// Z_{N,beta} = E[exp(-beta H)] under the product prior, estimated on nested
/// prefixes of importance-sampled streams.
struct PartitionDiagnostic {
  double beta = 0.0;
  int N = 0;
  double gamma = 0.0;
  std::size_t replicates = 1;
  std::vector<PartitionEstimate> nested;
  double growth = 1.0;          // last / first estimate
  bool stderr_shrinks = true;   // last stderr <= half the first
  bool unbounded = false;       // growth > 10 and stderr not shrinking
  std::string verdict;
};

/// Gaussian priors only. The collapse radius rho = |x - centroid| is drawn
/// from an equal mixture of its exact chi law and a log-scale tail
/// t = -log(rho / rho_s) ~ Exp(gamma), rho_s = sigma sqrt(d (N - 1));
/// gamma <= 0 selects 0.1 (N - 1). Each nested size reports the median over
/// independent replicate streams: one early outlier cannot mask growth.
PartitionDiagnostic partition_function_diagnostic(const ModelSpec& model, double beta,
                                                  const std::vector<std::size_t>& sizes,
                                                  std::uint64_t seed, double gamma = 0.0,
                                                  std::size_t replicates = 7);

}  // namespace ensemble_lab
