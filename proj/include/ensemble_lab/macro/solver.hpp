#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ensemble_lab/curve.hpp"
#include "ensemble_lab/macro/discretize.hpp"

namespace ensemble_lab {

struct SolverOptions {
  double damping = 1.0;          // initial and maximal theta
  double tol = 1e-10;            // l1 residual |mu - G(mu)|
  std::size_t max_iter = 20000;
  double min_damping = 1e-12;    // below this the iteration is declared stalled
  Execution execution = Execution::parallel;
};

struct SolverResult {
  GridMeasure mu;
  double beta = 0.0;
  std::size_t iterations = 0;
  double residual = kNaN;
  bool converged = false;
  bool diverged = false;         // Gibbs weights overflow: beta at or below the critical value
  double energy = kNaN;
  double entropy = kNaN;
  double free_energy = kNaN;     // F_beta(mu)
  double final_damping = 0.0;
  std::size_t halvings = 0;
  std::vector<double> free_energy_trace;  // F_beta along accepted iterates
  std::string message;
};

/// Gibbs map G(mu)_j = mu0_j exp(-beta phi_j) / Z for phi = W mu + V.
/// Returns false when the exponents cannot be represented (overflow).
bool gibbs_map(const DiscretizedModel& dm, double beta, const Eigen::VectorXd& phi,
               Eigen::VectorXd& out);

/// Damped fixed-point iteration mu <- (1 - theta) mu + theta G(mu). Steps that
/// increase F_beta are retried with theta halved; theta doubles back towards
/// options.damping after each accepted step.
SolverResult solve_mean_field(const DiscretizedModel& dm, double beta, const GridMeasure& init,
                              const SolverOptions& options = {});
SolverResult solve_mean_field(const DiscretizedModel& dm, double beta,
                              const SolverOptions& options = {});

}  // namespace ensemble_lab
