#pragma once

#include <cstddef>
#include <functional>

#include <Eigen/Dense>

#include "ensemble_lab/micro/sampling.hpp"

namespace ensemble_lab::kernels {

/// Fills a symmetric n x n matrix from entry(i, j), i <= j. The parallel
/// path distributes rows; both paths evaluate exactly the same entries.
Eigen::MatrixXd assemble_symmetric(std::size_t n,
                                   const std::function<double(std::size_t, std::size_t)>& entry,
                                   Execution execution);

/// y = A x for symmetric A (rows distributed in the parallel path).
void symmetric_matvec(const Eigen::MatrixXd& A, const Eigen::VectorXd& x, Eigen::VectorXd& y,
                      Execution execution);

}  // namespace ensemble_lab::kernels
