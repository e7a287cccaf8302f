#include "ensemble_lab/macro/catastrophe.hpp"

#include <cmath>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "ensemble_lab/curve.hpp"
#include "ensemble_lab/error.hpp"
#include "ensemble_lab/macro/discretize.hpp"

namespace ensemble_lab {

namespace {

double integrate(const std::function<double(double)>& f, double a, double b) {
  if (!(b > a)) return 0.0;
  static thread_local boost::math::quadrature::tanh_sinh<double> integrator(14);
  return integrator.integrate(f, a, b, 1e-10);
}

// Entropy of (1 - lambda) mu0 + lambda * (mu0 conditioned on B_rho) relative
// to mu0 uniform on the unit ball: the density is a on B_rho, b outside.
double core_halo_entropy(double lambda, double rho, int d) {
  const double v = std::pow(rho, d);
  const double a = 1.0 - lambda + lambda / v;
  const double b = 1.0 - lambda;
  double s = -v * a * std::log(a);
  if (b > 0.0) s -= (1.0 - v) * b * std::log(b);
  return s;
}

}  // namespace

RadialMeasure uniform_ball_radial(int d, double radius) {
  require(d >= 1 && radius > 0.0, ErrorKind::usage, "uniform_ball_radial: need d >= 1 and R > 0");
  return RadialMeasure{[d, radius](double r) { return d * std::pow(r, d - 1) / std::pow(radius, d); }, 0.0,
                       radius};
}

double radial_pair_energy(const RadialProfile& w, int d, const RadialMeasure& mu, const RadialMeasure& nu) {
  auto inner = [&](double r) {
    auto f = [&](double s) {
      const double v = angular_average(w, d, r, s) * nu.density(s);
      // Only integrable singularities reach here (s = r, or r = s = 0).
      return std::isfinite(v) ? v : 0.0;
    };
    if (r <= nu.lo || r >= nu.hi) return integrate(f, nu.lo, nu.hi);
    return integrate(f, nu.lo, r) + integrate(f, r, nu.hi);
  };
  // Split the outer range at nu's endpoints, where the inner integral has kinks.
  std::vector<double> cuts{mu.lo};
  for (double c : {nu.lo, nu.hi}) {
    if (c > mu.lo && c < mu.hi) cuts.push_back(c);
  }
  cuts.push_back(mu.hi);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    total += integrate(
        [&](double r) {
          const double v = mu.density(r) * inner(r);
          return std::isfinite(v) ? v : 0.0;
        },
        cuts[k], cuts[k + 1]);
  }
  return total;
}

double uniform_ball_energy(double alpha, int d) {
  require(alpha > 0.0 && alpha < d, ErrorKind::domain, "uniform_ball_energy: need 0 < alpha < d");
  const RadialMeasure u = uniform_ball_radial(d, 1.0);
  return 0.5 * radial_pair_energy(profiles::inverse_power(alpha), d, u, u);
}

std::vector<CatastropheRow> catastrophe_family(double alpha, double e0, int d, const std::vector<double>& eps_grid) {
  require(alpha > 0.0, ErrorKind::usage, "catastrophe_family: alpha must be positive");
  require(e0 > 0.0, ErrorKind::usage, "catastrophe_family: e0 must be positive");
  const RadialProfile w = profiles::inverse_power(alpha);
  const RadialMeasure unit = uniform_ball_radial(d, 1.0);
  const double e_unit = 0.5 * radial_pair_energy(w, d, unit, unit);
  std::vector<CatastropheRow> rows;
  for (double eps : eps_grid) {
    require(eps > 0.0 && eps <= 1.0, ErrorKind::usage, "catastrophe_family: eps must lie in (0, 1]");
    CatastropheRow row;
    row.eps = eps;
    row.weight = std::pow(eps, 0.25 * alpha);
    row.energy_bound = std::pow(eps, 0.5 * alpha) * std::pow(eps, -alpha) * e0;
    row.entropy_bound = row.weight * d * std::log(eps);
    if (eps == 1.0) {
      row.scaled_energy = e_unit;
      row.scaled_ratio = 1.0;
      row.energy = e_unit;
      row.entropy = 0.0;
      rows.push_back(row);
      continue;
    }
    const RadialMeasure core = uniform_ball_radial(d, eps);
    row.scaled_energy = 0.5 * radial_pair_energy(w, d, core, core);
    row.scaled_ratio = row.scaled_energy / e_unit;
    const double cross = radial_pair_energy(w, d, core, unit);
    const double t = row.weight;
    row.energy = t * t * row.scaled_energy + (1.0 - t) * (1.0 - t) * e_unit + t * (1.0 - t) * cross;
    row.entropy = core_halo_entropy(t, eps, d);
    rows.push_back(row);
  }
  return rows;
}

CoreHalo core_halo_at_energy(double alpha, int d, double target, double entropy_floor, double rel_tol) {
  require(alpha > 0.0 && alpha < d, ErrorKind::domain, "core_halo_at_energy: need 0 < alpha < d");
  const RadialProfile w = profiles::inverse_power(alpha);
  const RadialMeasure unit = uniform_ball_radial(d, 1.0);
  const double e_unit = 0.5 * radial_pair_energy(w, d, unit, unit);
  require(target > e_unit, ErrorKind::usage, "core_halo_at_energy: target must exceed E(mu0)");

  auto energy_at = [&](double lambda, double rho) {
    const RadialMeasure core = uniform_ball_radial(d, rho);
    // Self-energy of the core scales exactly as rho^-alpha.
    const double core_self = std::pow(rho, -alpha) * e_unit;
    const double cross = radial_pair_energy(w, d, core, unit);
    return lambda * lambda * core_self + (1.0 - lambda) * (1.0 - lambda) * e_unit +
           lambda * (1.0 - lambda) * cross;
  };

  CoreHalo out;
  out.target = target;
  for (double lambda = 0.5; lambda > 1e-12; lambda *= 0.5) {
    // 0 <= cross <= d/(d - alpha) (the potential of mu0 is largest for a
    // ball centred at the point), which brackets the radius.
    auto radius_for = [&](double cross) {
      const double rest = target - (1.0 - lambda) * (1.0 - lambda) * e_unit - lambda * (1.0 - lambda) * cross;
      return rest > 0.0 ? std::min(1.0, std::pow(lambda * lambda * e_unit / rest, 1.0 / alpha)) : 1.0;
    };
    const double rho_lo = radius_for(0.0);
    const double rho_hi = radius_for(d / (d - alpha));
    if (core_halo_entropy(lambda, rho_hi, d) < entropy_floor) continue;
    double lo = std::log(rho_lo);
    double hi = std::log(rho_hi);
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double e = energy_at(lambda, std::exp(mid));
      if (std::abs(e - target) <= rel_tol * target) {
        lo = hi = mid;
        break;
      }
      (e > target ? lo : hi) = mid;
    }
    const double rho = std::exp(0.5 * (lo + hi));
    out.lambda = lambda;
    out.rho = rho;
    out.energy = energy_at(lambda, rho);
    out.entropy = core_halo_entropy(lambda, rho, d);
    if (out.entropy >= entropy_floor) {
      out.found = true;
      return out;
    }
  }
  return out;
}

}  // namespace ensemble_lab
