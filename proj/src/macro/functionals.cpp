#include "ensemble_lab/macro/functionals.hpp"

#include <cmath>

#include "ensemble_lab/curve.hpp"
#include "ensemble_lab/error.hpp"
#include "ensemble_lab/kernels/dense.hpp"

namespace ensemble_lab {

namespace {

void require_same_grid(const DiscretizedModel& dm, const GridMeasure& mu) {
  require(mu.grid_id == dm.grid_id && mu.size() == dm.size(), ErrorKind::usage,
          "measure grid '" + mu.grid_id + "' does not match model grid '" + dm.grid_id + "'");
}

bool charges_singular_cell(const DiscretizedModel& dm, const Eigen::VectorXd& mu) {
  if (!dm.singular_diagonal) return false;
  for (Eigen::Index j = 0; j < mu.size(); ++j) {
    if (mu(j) > 0.0 && dm.W(j, j) >= kSingularDiagonal) return true;
  }
  return false;
}

}  // namespace

Eigen::VectorXd mean_field_potential(const DiscretizedModel& dm, const Eigen::VectorXd& mu,
                                     Execution execution) {
  Eigen::VectorXd phi(mu.size());
  kernels::symmetric_matvec(dm.W, mu, phi, execution);
  phi += dm.V;
  return phi;
}

double energy_from_potential(const DiscretizedModel& dm, const Eigen::VectorXd& mu,
                             const Eigen::VectorXd& phi) {
  if (charges_singular_cell(dm, mu)) return kInf;
  // 1/2 mu'(W mu) + V'mu = 1/2 mu'(phi + V)
  return 0.5 * mu.dot(phi + dm.V);
}

double energy(const DiscretizedModel& dm, const GridMeasure& mu) {
  require_same_grid(dm, mu);
  if (charges_singular_cell(dm, mu.weights)) return kInf;
  return energy_from_potential(dm, mu.weights, mean_field_potential(dm, mu.weights));
}

double entropy_of(const Eigen::VectorXd& mu, const Eigen::VectorXd& prior) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < mu.size(); ++j) {
    if (mu(j) <= 0.0) continue;
    if (prior(j) <= 0.0) return -kInf;
    s -= mu(j) * std::log(mu(j) / prior(j));
  }
  return s;
}

double entropy(const GridMeasure& mu) { return entropy_of(mu.weights, mu.prior_weights); }

double free_energy_functional(const DiscretizedModel& dm, double beta, const GridMeasure& mu) {
  const double s = entropy(mu);
  if (s == -kInf) return kInf;
  const double e = energy(dm, mu);
  if (beta == 0.0) return -s;
  return beta * e - s;
}

}  // namespace ensemble_lab
