#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ensemble_lab/micro/tails.hpp"
#include "ensemble_lab/model/model.hpp"

namespace ensemble_lab {

/// Flat-histogram (Wang-Landau, 1/t variant) density of states of H/N under
/// the product prior.
struct WangLandauParams {
  std::size_t bins = 48;             // uniform bins over [e_lo, e_hi)
  bool underflow_bin = true;         // open state (-inf, e_lo)
  bool overflow_bin = true;          // open state [e_hi, +inf)
  double flatness = 0.8;             // min count >= flatness * mean count
  double log_f_initial = 1.0;
  double log_f_final = 2e-6;
  std::size_t check_interval = 20000;        // moves between flatness checks
  std::size_t max_moves = 1'000'000'000;     // per replica
  std::size_t burn_in_moves = 40000;
  std::size_t replicas = 8;
  double dilation_probability = 0.25;  // cluster dilation about the centroid
  double dilation_log_step = 0.5;      // log lambda ~ U(-s, s)
  std::size_t scale_levels = 8;        // step ladder s0 * 4^-k
  std::size_t recompute_interval = 2048;
};

struct DosEstimate {
  int N = 1;
  std::vector<double> edges;  // finite bin edges, bins + 1 values
  bool has_underflow = true;
  bool has_overflow = true;
  /// Per state (underflow, bins..., overflow): replica mean of log g with
  /// sum_states g = 1 in each replica, and the replica standard error.
  std::vector<double> log_g;
  std::vector<double> log_g_stderr;
  std::vector<std::vector<double>> replica_log_g;
  std::vector<double> flatness_history;  // replica 0: min/mean at each reduction
  std::vector<double> log_f_schedule;    // replica 0: log f after each reduction
  std::vector<double> acceptance;        // per replica, final accumulation
  std::vector<std::size_t> moves;        // per replica
  double proposal_scale = 0.0;           // replica 0, frozen after burn-in

  std::size_t states() const { return log_g.size(); }
  /// Index of the state containing energy per particle e.
  std::size_t state_of(double e) const;
};

/// Throws LabError(budget) with a histogram dump when a replica does not
/// reach the final modification factor within max_moves.
DosEstimate tail_logprob_dos(const ModelSpec& model, double e_lo, double e_hi,
                             const WangLandauParams& params, std::uint64_t seed);

/// Tail log-probabilities (per particle) from the DOS at grid energies in
/// [e_lo, e_hi]; log tail probabilities are linear inside a bin. Standard errors
/// come from the replica spread.
TailCurve dos_tail_curve(const DosEstimate& dos, std::span<const double> e_grid,
                         TailDirection direction);

struct AnchoredTail {
  TailCurve curve;             // DOS curve shifted by the offset
  double offset = 0.0;         // added to the DOS values
  double offset_stderr = 0.0;
  std::size_t overlap = 0;     // grid points used
  double mean_abs_gap = 0.0;   // after anchoring
  double pooled_stderr = 0.0;  // sqrt(mean(se_direct^2 + se_dos^2)) on the overlap
};

/// Fixes the additive constant of a DOS tail by inverse-variance matching to
/// a direct curve on the same grid. Needs >= 3 overlap points.
AnchoredTail anchor_dos_tail(const TailCurve& dos, const TailCurve& direct);

/// Pointwise inverse-variance combination of two curves on the same grid;
/// a point usable in only one input is taken from it.
TailCurve combine_tails(const TailCurve& direct, const TailCurve& dos);

}  // namespace ensemble_lab
