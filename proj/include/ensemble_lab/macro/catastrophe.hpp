#pragma once

#include <functional>
#include <vector>

#include "ensemble_lab/model/profile.hpp"

namespace ensemble_lab {

/// Radial measure: density with respect to dr on [lo, hi].
struct RadialMeasure {
  std::function<double(double)> density;
  double lo = 0.0;
  double hi = 1.0;
};

/// Uniform probability on the ball of radius R in R^d.
RadialMeasure uniform_ball_radial(int d, double radius);

/// int int w(|x - y|) dmu(x) dnu(y) for rotation-invariant mu, nu in R^d,
/// through spherical averages and adaptive quadrature split at r = s.
double radial_pair_energy(const RadialProfile& w, int d, const RadialMeasure& mu, const RadialMeasure& nu);

/// E(mu0) = 1/2 int int |x - y|^-alpha for mu0 uniform on the unit ball.
double uniform_ball_energy(double alpha, int d);

struct CatastropheRow {
  double eps = 1.0;
  double weight = 1.0;           // eps^(alpha/4)
  double energy_bound = 0.0;     // eps^(alpha/2) eps^-alpha e0
  double entropy_bound = 0.0;    // eps^(alpha/4) d log eps
  double scaled_energy = 0.0;    // E((T_eps)_* mu0), numeric
  double scaled_ratio = 0.0;     // scaled_energy / E(mu0), compare eps^-alpha
  double energy = 0.0;           // E(nu_eps), numeric
  double entropy = 0.0;          // S(nu_eps), exact
};

/// nu_eps = eps^(alpha/4) (T_eps)_* mu0 + (1 - eps^(alpha/4)) mu0 for the
/// kernel |x - y|^-alpha, V = 0 and mu0 uniform on the unit ball of R^d.
std::vector<CatastropheRow> catastrophe_family(double alpha, double e0, int d, const std::vector<double>& eps_grid);

struct CoreHalo {
  double lambda = 0.0;  // mass in the core
  double rho = 1.0;     // core radius
  double energy = 0.0;
  double entropy = 0.0;
  double target = 0.0;
  bool found = false;
};

/// (1 - lambda) mu0 + lambda * uniform(B_rho) with E = target and
/// S >= entropy_floor: lambda is halved until the entropy constraint holds,
/// rho is found by bisection in log rho.
CoreHalo core_halo_at_energy(double alpha, int d, double target, double entropy_floor,
                             double rel_tol = 1e-4);

}  // namespace ensemble_lab
