#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ensemble_lab/duality/legendre.hpp"
#include "ensemble_lab/macro/discretize.hpp"
#include "ensemble_lab/macro/sweep.hpp"
#include "ensemble_lab/micro/partition.hpp"
#include "ensemble_lab/micro/pipeline.hpp"
#include "ensemble_lab/model/model.hpp"

namespace ensemble_lab {

/// 2d / w_dot; -inf when w_dot = 0. Throws a model error for w_dot > 0.
double beta_c_analytic(const RadialProfile& w, int d);

struct MacroTailOptions {
  DiscretizationOptions grid{512, 0.0, 128, Execution::parallel};
  double min_core_cells = 8.0;  // kernels singular at 0: stop before the median radius drops below this
  std::size_t e_points = 24;
  std::size_t window = 6;
  double beta_floor = -1000.0;
  SolverOptions solver;
};

struct MacroTail {
  std::string grid_id;
  double e0 = kNaN;      // E(mu0) on the grid
  double e_top = kNaN;   // last energy of the window
  double beta_top = kNaN;
  FreeEnergyCurve sweep; // beta from 0 downwards
  EntropyCurve entropy;  // S(e) on [e0 + (e_top - e0)/4, e_top]
  AsymptoticSlope slope;
  std::vector<std::string> notes;
};

/// Macroscopic S(e) up to the resolvable end of the energy range and its
/// asymptotic slope.
MacroTail macro_entropy_tail(const ModelSpec& model, const MacroTailOptions& options = {});

struct MicroTailOptions {
  int N = 8;
  TailPipelineOptions pipeline;
  std::size_t e_points = 24;
  std::size_t window = 6;
  double e_lo = kNaN;  // default: 30% quantile of H/N
  double e_hi = kNaN;  // default: see critical_beta_crosscheck
};

struct MicroTail {
  std::vector<double> e_grid;
  TailPipelineResult tail;
  AsymptoticSlope slope;
};

MicroTail micro_entropy_tail(const ModelSpec& model, const MicroTailOptions& options, std::uint64_t seed);

struct CrossCheckOptions {
  MacroTailOptions macro;
  MicroTailOptions micro;
  std::vector<std::size_t> z_sizes{10000, 100000, 1000000};
  int z_N = 2;
  double z_margin = 0.1;
  double rel_tol = 0.1;
  bool run_macro = true;
  bool run_micro = true;
  bool run_partition = true;
};

struct CriticalBetaReport {
  double beta_analytic = kNaN;
  double w_dot = kNaN;
  double beta_macro = kNaN;
  double beta_micro = kNaN;
  AsymptoticSlope macro_slope;
  AsymptoticSlope micro_slope;
  SampledCurve macro_curve;
  SampledCurve micro_curve;
  bool macro_agrees = false;
  bool micro_agrees = false;
  std::vector<PartitionDiagnostic> partition;
  std::vector<std::string> notes;
  std::vector<std::string> errors;  // pipelines that failed; the rest of the report stands
};

/// Analytic, macroscopic and microscopic critical inverse temperatures. The
/// three pipelines run concurrently; a failing pipeline is recorded in
/// `errors` and leaves its fields NaN.
CriticalBetaReport critical_beta_crosscheck(const ModelSpec& model, const CrossCheckOptions& options,
                                            std::uint64_t seed);

}  // namespace ensemble_lab
