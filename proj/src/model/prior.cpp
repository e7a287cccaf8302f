#include "ensemble_lab/model/prior.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "ensemble_lab/curve.hpp"
#include "ensemble_lab/error.hpp"

namespace ensemble_lab {

double unit_sphere_area(int dim) {
  const double h = 0.5 * dim;
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

double unit_ball_volume(int dim) { return unit_sphere_area(dim) / dim; }

namespace {

// Integral of f over [a, b] (b may be +inf).
template <class F>
double integrate(F f, double a, double b) {
  if (std::isinf(b)) {
    boost::math::quadrature::exp_sinh<double> integrator;
    return integrator.integrate([&](double t) { return f(a + t); }, 0.0,
                                std::numeric_limits<double>::infinity());
  }
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
}

void gaussian_direction(Rng& rng, std::span<double> out) {
  std::normal_distribution<double> normal(0.0, 1.0);
  double n2 = 0.0;
  do {
    n2 = 0.0;
    for (double& v : out) {
      v = normal(rng);
      n2 += v * v;
    }
  } while (n2 == 0.0);
  const double inv = 1.0 / std::sqrt(n2);
  for (double& v : out) v *= inv;
}

}  // namespace

PriorMeasure PriorMeasure::gaussian(int dim, double sigma) {
  require(sigma > 0.0 && std::isfinite(sigma), ErrorKind::configuration,
          "gaussian prior: sigma must be positive");
  PriorMeasure p;
  p.family_ = Family::gaussian;
  p.domain_ = Domain::full_space(dim);
  p.sigma_ = sigma;
  p.log_norm_ = 0.5 * dim * std::log(2.0 * std::numbers::pi * sigma * sigma);
  return p;
}

PriorMeasure PriorMeasure::uniform_ball(int dim, double radius) {
  PriorMeasure p;
  p.family_ = Family::uniform_ball;
  p.domain_ = Domain::ball(dim, radius);
  p.sigma_ = 0.0;
  p.log_norm_ = std::log(unit_ball_volume(dim)) + dim * std::log(radius);
  return p;
}

PriorMeasure PriorMeasure::radial_density(const Domain& domain, RadialProfile psi0,
                                          double envelope_sigma) {
  require(envelope_sigma > 0.0, ErrorKind::configuration, "prior: envelope sigma must be positive");
  PriorMeasure p;
  p.family_ = Family::radial_density;
  p.domain_ = domain;
  p.sigma_ = envelope_sigma;
  const int d = domain.dim;
  const double area = unit_sphere_area(d);
  const double rmax = domain.is_ball() ? domain.radius : kInf;
  const double z = integrate(
      [&](double r) {
        const double v = psi0(r);
        return std::isfinite(v) ? area * std::pow(r, d - 1) * std::exp(-v) : 0.0;
      },
      0.0, rmax);
  require(std::isfinite(z) && z > 0.0, ErrorKind::configuration,
          "prior: density e^{-psi0} is not integrable on the domain");
  p.log_norm_ = std::log(z);

  // Envelope bound: sup over a fine radial grid of -psi0(r) - log q(r)
  // (q unnormalized: 1 on the ball, exp(-r^2/2s^2) on full space).
  const double top = domain.is_ball() ? domain.radius : 40.0 * envelope_sigma;
  const int grid = 20000;
  double best = -kInf;
  double last = -kInf;
  for (int i = 0; i <= grid; ++i) {
    const double r = top * i / grid;
    double v = -psi0(r);
    if (!domain.is_ball()) v += r * r / (2.0 * envelope_sigma * envelope_sigma);
    if (std::isnan(v)) continue;
    best = std::max(best, v);
    last = v;
  }
  require(std::isfinite(best), ErrorKind::configuration,
          "prior: density unbounded relative to the envelope");
  require(domain.is_ball() || last < best - 1.0, ErrorKind::configuration,
          "prior: Gaussian envelope too narrow for the density tail; increase envelope_sigma");
  // Small safety margin for peaks between grid points.
  p.psi0_floor_ = best + 1e-3;
  const double log_env = domain.is_ball()
                             ? std::log(unit_ball_volume(d)) + d * std::log(domain.radius)
                             : 0.5 * d * std::log(2.0 * std::numbers::pi * envelope_sigma * envelope_sigma);
  p.acceptance_ = std::exp(p.log_norm_ - p.psi0_floor_ - log_env);
  p.psi0_ = std::move(psi0);
  return p;
}

std::string PriorMeasure::label() const {
  switch (family_) {
    case Family::gaussian: return "gaussian(sigma=" + std::to_string(sigma_) + ")";
    case Family::uniform_ball: return "uniform_ball(R=" + std::to_string(domain_.radius) + ")";
    case Family::radial_density: return "radial_density(" + psi0_->label() + ")";
  }
  return "prior";
}

double PriorMeasure::neg_log_density(std::span<const double> x) const {
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  switch (family_) {
    case Family::gaussian:
      return r2 / (2.0 * sigma_ * sigma_) + log_norm_;
    case Family::uniform_ball:
      return r2 <= domain_.radius * domain_.radius ? log_norm_ : kInf;
    case Family::radial_density:
      if (domain_.is_ball() && r2 > domain_.radius * domain_.radius) return kInf;
      return (*psi0_)(std::sqrt(r2)) + log_norm_;
  }
  return kInf;
}

double PriorMeasure::radial_density_at(double r) const {
  if (r < 0.0) return 0.0;
  const int d = domain_.dim;
  if (domain_.is_ball() && r > domain_.radius) return 0.0;
  double psi = 0.0;
  switch (family_) {
    case Family::gaussian: psi = r * r / (2.0 * sigma_ * sigma_); break;
    case Family::uniform_ball: psi = 0.0; break;
    case Family::radial_density: psi = (*psi0_)(r); break;
  }
  if (!std::isfinite(psi)) return 0.0;
  return unit_sphere_area(d) * std::pow(r, d - 1) * std::exp(-psi - log_norm_);
}

double PriorMeasure::shell_mass(double a, double b) const {
  a = std::max(a, 0.0);
  if (domain_.is_ball()) b = std::min(b, domain_.radius);
  if (!(b > a)) return 0.0;
  const int d = domain_.dim;
  switch (family_) {
    case Family::gaussian: {
      const double s2 = 2.0 * sigma_ * sigma_;
      if (d == 2) {
        const double ea = std::exp(-a * a / s2);
        return std::isinf(b) ? ea : -ea * std::expm1(-(b * b - a * a) / s2);
      }
      const double ha = 0.5 * d;
      if (std::isinf(b)) return boost::math::gamma_q(ha, a * a / s2);
      return boost::math::gamma_p(ha, b * b / s2) - boost::math::gamma_p(ha, a * a / s2);
    }
    case Family::uniform_ball: {
      const double R = domain_.radius;
      return (std::pow(b / R, d) - std::pow(a / R, d));
    }
    case Family::radial_density:
      return integrate([this](double r) { return radial_density_at(r); }, a, b);
  }
  return 0.0;
}

void PriorMeasure::sample(Rng& rng, std::span<double> out) const {
  require(static_cast<int>(out.size()) == domain_.dim, ErrorKind::usage,
          "prior sample: output has wrong dimension");
  switch (family_) {
    case Family::gaussian: {
      std::normal_distribution<double> normal(0.0, sigma_);
      for (double& v : out) v = normal(rng);
      return;
    }
    case Family::uniform_ball: {
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      gaussian_direction(rng, out);
      const double r = domain_.radius * std::pow(unif(rng), 1.0 / domain_.dim);
      for (double& v : out) v *= r;
      return;
    }
    case Family::radial_density: {
      require(acceptance_ >= 1e-3, ErrorKind::configuration,
              "prior sampler: rejection acceptance rate " + std::to_string(acceptance_) +
                  " is below 1e-3; choose a tighter envelope");
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      std::normal_distribution<double> normal(0.0, sigma_);
      for (;;) {
        double r = 0.0;
        if (domain_.is_ball()) {
          gaussian_direction(rng, out);
          r = domain_.radius * std::pow(unif(rng), 1.0 / domain_.dim);
          for (double& v : out) v *= r;
        } else {
          double r2 = 0.0;
          for (double& v : out) {
            v = normal(rng);
            r2 += v * v;
          }
          r = std::sqrt(r2);
        }
        double logr = -(*psi0_)(r) - psi0_floor_;
        if (!domain_.is_ball()) logr += r * r / (2.0 * sigma_ * sigma_);
        if (std::log(unif(rng)) < logr) return;
      }
    }
  }
}

double prior_total_mass(const PriorMeasure& prior) {
  const double top = prior.domain().is_ball() ? prior.domain().radius : kInf;
  return integrate([&](double r) { return prior.radial_density_at(r); }, 0.0, top);
}

}  // namespace ensemble_lab
