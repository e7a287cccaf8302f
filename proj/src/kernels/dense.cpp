#include "ensemble_lab/kernels/dense.hpp"

#include "ensemble_lab/error.hpp"
#include "ensemble_lab/parallel.hpp"

namespace ensemble_lab::kernels {

Eigen::MatrixXd assemble_symmetric(std::size_t n,
                                   const std::function<double(std::size_t, std::size_t)>& entry,
                                   Execution execution) {
  Eigen::MatrixXd A(n, n);
  auto row = [&](std::size_t i) {
    for (std::size_t j = i; j < n; ++j) A(i, j) = entry(i, j);
  };
  if (execution == Execution::parallel) {
    parallel_blocks(n, row);
  } else {
    for (std::size_t i = 0; i < n; ++i) row(i);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) A(j, i) = A(i, j);
  }
  return A;
}

void symmetric_matvec(const Eigen::MatrixXd& A, const Eigen::VectorXd& x, Eigen::VectorXd& y,
                      Execution execution) {
  require(A.cols() == x.size() && A.rows() == A.cols(), ErrorKind::usage, "matvec: size mismatch");
  const Eigen::Index n = A.rows();
  y.resize(n);
  if (execution == Execution::serial || n < 256) {
    // Column-major storage: A symmetric, so row i is column i.
    for (Eigen::Index i = 0; i < n; ++i) y(i) = A.col(i).dot(x);
    return;
  }
  constexpr Eigen::Index chunk = 64;
  const auto blocks = static_cast<std::size_t>((n + chunk - 1) / chunk);
  parallel_blocks(blocks, [&](std::size_t b) {
    const Eigen::Index lo = static_cast<Eigen::Index>(b) * chunk;
    const Eigen::Index hi = std::min(n, lo + chunk);
    for (Eigen::Index i = lo; i < hi; ++i) y(i) = A.col(i).dot(x);
  });
}

}  // namespace ensemble_lab::kernels
