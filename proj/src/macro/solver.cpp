#include "ensemble_lab/macro/solver.hpp"

#include <algorithm>
#include <cmath>

#include "ensemble_lab/curve.hpp"
#include "ensemble_lab/error.hpp"
#include "ensemble_lab/macro/functionals.hpp"

namespace ensemble_lab {

namespace {

// exp(-708) is close to the smallest normal double: a wider exponent range
// means the Gibbs weights no longer fit in floating point.
constexpr double kMaxExponentRange = 700.0;

double free_energy_of(const DiscretizedModel& dm, double beta, const Eigen::VectorXd& mu,
                      const Eigen::VectorXd& phi) {
  const double s = entropy_of(mu, dm.prior);
  if (s == -kInf) return kInf;
  if (beta == 0.0) return -s;
  return beta * energy_from_potential(dm, mu, phi) - s;
}

}  // namespace

bool gibbs_map(const DiscretizedModel& dm, double beta, const Eigen::VectorXd& phi,
               Eigen::VectorXd& out) {
  const Eigen::Index n = phi.size();
  out.resize(n);
  double hi = -kInf, elo = kInf, ehi = -kInf;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (dm.prior(j) <= 0.0) {
      out(j) = -kInf;
      continue;
    }
    const double a = std::log(dm.prior(j)) - (beta == 0.0 ? 0.0 : beta * phi(j));
    if (std::isnan(a) || a == kInf) return false;
    out(j) = a;
    hi = std::max(hi, a);
    const double bp = beta == 0.0 ? 0.0 : beta * phi(j);
    elo = std::min(elo, bp);
    ehi = std::max(ehi, bp);
  }
  if (!std::isfinite(hi) || ehi - elo > kMaxExponentRange) return false;
  double z = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    out(j) = std::exp(out(j) - hi);
    z += out(j);
  }
  out /= z;
  return true;
}

SolverResult solve_mean_field(const DiscretizedModel& dm, double beta, const GridMeasure& init,
                              const SolverOptions& options) {
  require(init.grid_id == dm.grid_id && init.size() == dm.size(), ErrorKind::usage,
          "solve_mean_field: initial measure is on a different grid");
  require(options.damping > 0.0 && options.damping <= 1.0, ErrorKind::usage,
          "solve_mean_field: damping must lie in (0, 1]");
  require(std::isfinite(beta), ErrorKind::usage, "solve_mean_field: beta must be finite");

  SolverResult res;
  res.beta = beta;
  Eigen::VectorXd mu = init.weights;
  Eigen::VectorXd phi = mean_field_potential(dm, mu, options.execution);
  double F = free_energy_of(dm, beta, mu, phi);
  double theta = options.damping;
  Eigen::VectorXd g, trial, trial_phi;
  std::size_t updates = 0;

  for (std::size_t it = 0;; ++it) {
    if (!gibbs_map(dm, beta, phi, g)) {
      res.diverged = true;
      res.message = "Gibbs weights overflow (beta at or below the critical value)";
      break;
    }
    res.residual = (mu - g).lpNorm<1>();
    if (res.residual <= options.tol) {
      res.converged = true;
      break;
    }
    if (it >= options.max_iter) {
      res.message = "max_iter reached";
      break;
    }
    bool accepted = false;
    while (theta >= options.min_damping) {
      trial = theta == 1.0 ? g : Eigen::VectorXd((1.0 - theta) * mu + theta * g);
      trial_phi = mean_field_potential(dm, trial, options.execution);
      const double Ft = free_energy_of(dm, beta, trial, trial_phi);
      if (Ft <= F + 1e-13 * (1.0 + std::abs(F)) || !std::isfinite(F)) {
        mu.swap(trial);
        phi.swap(trial_phi);
        F = Ft;
        accepted = true;
        break;
      }
      theta *= 0.5;
      ++res.halvings;
    }
    if (!accepted) {
      res.message = "stalled: damping fell below " + std::to_string(options.min_damping);
      break;
    }
    ++updates;
    res.free_energy_trace.push_back(F);
    theta = std::min(options.damping, 2.0 * theta);
  }

  res.iterations = std::max<std::size_t>(updates, 1);
  res.final_damping = theta;
  res.mu = GridMeasure{dm.grid_id, mu, dm.prior};
  res.entropy = entropy_of(mu, dm.prior);
  res.energy = energy_from_potential(dm, mu, phi);
  res.free_energy = F;
  return res;
}

SolverResult solve_mean_field(const DiscretizedModel& dm, double beta, const SolverOptions& options) {
  return solve_mean_field(dm, beta, prior_measure(dm), options);
}

}  // namespace ensemble_lab
