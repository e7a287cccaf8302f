#include "ensemble_lab/micro/tails.hpp"

#include <algorithm>
#include <cmath>

#include "ensemble_lab/error.hpp"
#include "ensemble_lab/micro/sampling.hpp"

namespace ensemble_lab {

std::string to_string(TailDirection d) { return d == TailDirection::upper ? "upper" : "lower"; }

TailDirection tail_direction_from_string(const std::string& s) {
  if (s == "upper") return TailDirection::upper;
  if (s == "lower") return TailDirection::lower;
  fail(ErrorKind::usage, "direction must be 'upper' or 'lower', got '" + s + "'");
}

SampledCurve TailCurve::as_curve() const {
  SampledCurve c;
  c.x = e;
  c.y = value;
  c.std_error = std_error;
  c.flagged = flagged;
  c.provenance = Provenance::micro;
  c.notes = notes;
  return c;
}

bool TailCurve::monotone() const {
  double prev = kNaN;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (flagged[i] || !std::isfinite(value[i])) continue;
    if (!std::isnan(prev)) {
      if (direction == TailDirection::upper && value[i] > prev) return false;
      if (direction == TailDirection::lower && value[i] < prev) return false;
    }
    prev = value[i];
  }
  return true;
}

TailCurve tail_from_energies(std::span<const double> energies, std::span<const double> e_grid,
                             int N, TailDirection direction) {
  require(N >= 1, ErrorKind::usage, "tail: N must be >= 1");
  for (std::size_t i = 1; i < e_grid.size(); ++i) {
    require(e_grid[i] > e_grid[i - 1], ErrorKind::usage, "tail: energy grid must be strictly increasing");
  }
  std::vector<double> sorted(energies.begin(), energies.end());
  for (double h : sorted) require(!std::isnan(h), ErrorKind::data, "tail: NaN energy sample");
  std::sort(sorted.begin(), sorted.end());
  const double M = static_cast<double>(sorted.size());

  TailCurve out;
  out.direction = direction;
  out.N = N;
  out.M = sorted.size();
  for (double e : e_grid) {
    std::size_t k = 0;
    if (direction == TailDirection::upper) {
      k = sorted.size() - static_cast<std::size_t>(
                              std::upper_bound(sorted.begin(), sorted.end(), e) - sorted.begin());
    } else {
      k = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), e) - sorted.begin());
    }
    out.e.push_back(e);
    out.hits.push_back(k);
    if (k == 0) {
      out.value.push_back(kNaN);
      out.std_error.push_back(kNaN);
      out.flagged.push_back(1);
      continue;
    }
    const double p = static_cast<double>(k) / M;
    out.value.push_back(std::log(p) / N);
    out.std_error.push_back(std::sqrt((1.0 - p) / static_cast<double>(k)) / N);
    out.flagged.push_back(k < kMinTailHits ? 1 : 0);
  }
  return out;
}

TailCurve tail_logprob_direct(const ModelSpec& model, std::span<const double> e_grid,
                              std::size_t M, std::uint64_t seed, TailDirection direction) {
  require(M >= 1000, ErrorKind::precondition, "tail: M must be >= 1000");
  require(!e_grid.empty(), ErrorKind::usage, "tail: empty energy grid");
  const std::vector<double> h = sample_energies(model, M, seed);
  TailCurve out = tail_from_energies(h, e_grid, model.particles(), direction);
  out.seed = seed;
  std::size_t reachable = 0;
  for (std::size_t i = 0; i < out.e.size(); ++i) {
    if (out.hits[i] >= kMinTailHits) {
      ++reachable;
    } else {
      out.notes.push_back("e=" + std::to_string(out.e[i]) + ": " + std::to_string(out.hits[i]) +
                          " hits, needs DOS estimator");
    }
  }
  require(reachable > 0, ErrorKind::precondition,
          "tail: no grid point reaches " + std::to_string(kMinTailHits) +
              " hits; the grid lies outside the directly reachable range (use the DOS estimator)");
  return out;
}

}  // namespace ensemble_lab
