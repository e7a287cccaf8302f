#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ensemble_lab/curve.hpp"
#include "ensemble_lab/macro/solver.hpp"
#include "ensemble_lab/report.hpp"

namespace ensemble_lab {

struct FreeEnergyCurve {
  SampledCurve curve;  // x = beta, y = F(beta); flagged where the solver did not converge
  std::vector<double> energies;
  std::vector<double> entropies;
  std::vector<std::size_t> iterations;
  std::vector<double> residuals;
  std::vector<std::uint8_t> diverged;
  std::vector<GridMeasure> measures;
  ValidationReport concavity;
};

enum class SweepStart { warm, cold };

/// Solves at every beta of a strictly increasing grid. Warm sweeps start at
/// the beta nearest 0 from the prior and continue outwards in both
/// directions from the neighbouring solution; cold sweeps start every beta
/// from the prior and run in parallel. Diverged points get F = -inf.
FreeEnergyCurve free_energy_curve(const DiscretizedModel& dm, const std::vector<double>& beta_grid,
                                  const SolverOptions& options = {},
                                  SweepStart start = SweepStart::warm);

struct BetaForEnergy {
  double beta = kNaN;
  SolverResult solution;
  std::size_t evaluations = 0;
};

struct EnergyInversionOptions {
  double tol_e = 1e-9;
  std::size_t max_evaluations = 200;
  SolverOptions solver;
  /// Optional prior sweep: narrows the bracket to neighbouring sweep points
  /// and warm-starts from their measures.
  const FreeEnergyCurve* sweep = nullptr;
};

/// Finds beta with E(mu_beta) = e inside the bracket (e(beta) is
/// non-increasing). A diverging lower end is pulled towards the upper end.
/// Throws a bracket error when e is not straddled.
BetaForEnergy beta_for_energy(const DiscretizedModel& dm, double e,
                              std::pair<double, double> beta_bracket,
                              const EnergyInversionOptions& options = {});

struct EntropyCurve {
  SampledCurve curve;  // x = e, y = S(e)
  std::vector<double> betas;
  std::vector<GridMeasure> measures;
};

/// S(e) = S(mu_beta(e)) for each e of a strictly increasing grid.
EntropyCurve entropy_curve_direct(const DiscretizedModel& dm, const std::vector<double>& e_grid,
                                  std::pair<double, double> beta_bracket,
                                  const EnergyInversionOptions& options = {});

struct EnergyBound {
  double value = kNaN;
  GridMeasure argmax;
  std::size_t starts = 0;
  std::string note;
};

/// Largest (or smallest) energy found by multiplicative-update ascent from
/// the prior, the extreme nodes and random starts. The maximum is a lower
/// bound on e_max, the minimum an upper bound on e_min.
EnergyBound estimate_e_max(const DiscretizedModel& dm, std::size_t random_starts,
                           std::uint64_t seed, std::size_t iterations = 4000);
EnergyBound estimate_e_min(const DiscretizedModel& dm, std::size_t random_starts,
                           std::uint64_t seed, std::size_t iterations = 4000);

}  // namespace ensemble_lab
