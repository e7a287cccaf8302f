#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ensemble_lab/curve.hpp"
#include "ensemble_lab/model/model.hpp"

namespace ensemble_lab {

enum class TailDirection { upper, lower };

std::string to_string(TailDirection d);
TailDirection tail_direction_from_string(const std::string& s);

/// Estimates of S_+(e) = (1/N) log P(H/N > e) or S_-(e) = (1/N) log P(H/N < e).
///
/// Flagged points (too few hits) carry value NaN or an unreliable value and
/// are excluded from shape tests.
struct TailCurve {
  std::vector<double> e;
  std::vector<double> value;
  std::vector<double> std_error;
  std::vector<std::uint8_t> flagged;
  std::vector<std::size_t> hits;
  TailDirection direction = TailDirection::upper;
  int N = 1;
  std::size_t M = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> notes;

  SampledCurve as_curve() const;
  /// Values monotone in the tail direction over usable points (ties allowed).
  bool monotone() const;
};

/// Points with fewer hits are flagged as needing the DOS estimator.
inline constexpr std::size_t kMinTailHits = 25;

/// Direct Monte Carlo: counts of H/N above (upper) or below (lower) each
/// grid energy among M prior configurations. Throws precondition error when
/// no grid point reaches kMinTailHits.
TailCurve tail_logprob_direct(const ModelSpec& model, std::span<const double> e_grid,
                              std::size_t M, std::uint64_t seed, TailDirection direction);

/// Same estimator on precomputed energies per particle.
TailCurve tail_from_energies(std::span<const double> energies, std::span<const double> e_grid,
                             int N, TailDirection direction);

}  // namespace ensemble_lab
