#pragma once

#include <complex>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ensemble_lab/model/kernel.hpp"
#include "ensemble_lab/model/profile.hpp"
#include "ensemble_lab/report.hpp"

namespace ensemble_lab {

/// n log-spaced radii from r_min to r_max inclusive.
std::vector<double> log_grid(double r_min, double r_max, std::size_t n);

/// Concavity of t -> w(e^t) on the grid and boundedness below as r -> 0.
/// Grid: >= 8 points spanning >= 4 decades. Tolerance scales with |w|.
ValidationReport check_homogeneous_assumptions(const RadialProfile& w,
                                               const std::vector<double>& grid,
                                               double rel_tol = 1e-8);

/// Alternating signs of forward differences of f(r) = w(sqrt(r)) up to m_max.
ValidationReport check_complete_monotonicity(const RadialProfile& w, int m_max,
                                             const std::vector<double>& grid,
                                             double tol = 1e-12);

/// Result of the zero-sum Gram test, exposed for oracles and reports.
struct ZeroSumSpectrum {
  double min_eigenvalue = 0.0;
  double gram_norm = 0.0;  // spectral norm of G
  Eigen::VectorXd witness; // zero-sum eigenvector of the minimal eigenvalue
};

/// Gram matrix W(x_i, x_j); points are rows.
Eigen::MatrixXd gram_matrix(const PairKernel& W, const Eigen::MatrixXd& points);

/// Minimal eigenvalue of G restricted to {sum a = 0}.
ZeroSumSpectrum zero_sum_spectrum(const Eigen::MatrixXd& G);

/// Weak positive definiteness on the given points (rows). `trials` random
/// zero-sum vectors are also evaluated directly as a sanity cross-check.
ValidationReport check_weak_positive_definiteness(const PairKernel& W,
                                                  const Eigen::MatrixXd& points,
                                                  std::size_t trials = 0,
                                                  double tol = 1e-8,
                                                  std::uint64_t seed = 1);

/// Convexity of t -> w(e^t) on the grid (psh test for radial functions).
ValidationReport check_psh_radial(const RadialProfile& w, const std::vector<double>& grid,
                                  double rel_tol = 1e-8);

using ComplexPoint = std::vector<std::complex<double>>;
using ComplexFunction = std::function<double(const ComplexPoint&)>;

/// Complex Hessian d^2 f / dz_i dzbar_j by central differences in the real
/// coordinates.
Eigen::MatrixXcd complex_hessian(const ComplexFunction& f, const ComplexPoint& z, double h);

ValidationReport check_psh_hessian(const ComplexFunction& f, const std::vector<ComplexPoint>& points,
                                   double h = 1e-4, double tol = 1e-6);

/// Circle action z_k -> e^{i a_k theta} z_k.
ValidationReport check_s1_invariance(const ComplexFunction& f, const std::vector<double>& a,
                                     const std::vector<ComplexPoint>& points,
                                     const std::vector<double>& angles, double tol = 1e-10);

/// Closed-form complex Hessian of psi(z, w) + lambda (phi(z) + phi(w)) with
/// psi = log|z - w|^2 - log|1 - z conj(w)|^2 and phi = -2 log(1 - |z|^2).
/// Off the diagonal the first term of psi is pluriharmonic.
struct DiscHessian {
  double h11;
  double h22;
  std::complex<double> h12;  // d^2 / dz dwbar
  double trace() const { return h11 + h22; }
  double det() const { return h11 * h22 - std::norm(h12); }
};

DiscHessian disc_green_hessian(double lambda, std::complex<double> z, std::complex<double> w);

/// Passes iff trace >= 0 and det >= -tol * h11 * h22 at every pair. The
/// witness of a failure is the violating pair closest to the origin, halved
/// towards (0,0) for as long as it keeps violating.
ValidationReport disc_green_psh_check(
    double lambda, const std::vector<std::pair<std::complex<double>, std::complex<double>>>& pairs,
    double tol = 1e-10);

/// Limiting log-slope lim_{t -> -inf} d w(e^t) / dt. Returns -inf only when
/// the differences diverge to -inf; values below 1e-6 in magnitude are 0.
double dot_w(const RadialProfile& w);

}  // namespace ensemble_lab
