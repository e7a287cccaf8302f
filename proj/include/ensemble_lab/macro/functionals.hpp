#pragma once

#include <Eigen/Dense>

#include "ensemble_lab/macro/discretize.hpp"

namespace ensemble_lab {

/// Mean-field potential phi = W mu + V.
Eigen::VectorXd mean_field_potential(const DiscretizedModel& dm, const Eigen::VectorXd& mu,
                                     Execution execution = Execution::parallel);

/// 1/2 mu'W mu + V'mu; +inf if mu charges a cell with infinite self-energy.
double energy(const DiscretizedModel& dm, const GridMeasure& mu);

/// -sum mu log(mu / mu0), with 0 log 0 = 0; -inf if mu charges a null cell.
double entropy(const GridMeasure& mu);

/// beta E(mu) - S(mu); +inf when S = -inf.
double free_energy_functional(const DiscretizedModel& dm, double beta, const GridMeasure& mu);

/// Same quantities from raw vectors; `phi` must equal W mu + V.
double energy_from_potential(const DiscretizedModel& dm, const Eigen::VectorXd& mu,
                             const Eigen::VectorXd& phi);
double entropy_of(const Eigen::VectorXd& mu, const Eigen::VectorXd& prior);

}  // namespace ensemble_lab
