#pragma once

#include <optional>
#include <span>
#include <string>

#include "ensemble_lab/model/domain.hpp"
#include "ensemble_lab/model/profile.hpp"
#include "ensemble_lab/random.hpp"

namespace ensemble_lab {

/// Probability measure e^{-psi0} dx / Z on a domain.
///
/// Supported families: centered Gaussian on R^d (per-coordinate sigma),
/// uniform on a ball, and radial densities e^{-psi0(|x|)} sampled by
/// rejection from a uniform-ball or Gaussian envelope.
class PriorMeasure {
 public:
  enum class Family { gaussian, uniform_ball, radial_density };

  static PriorMeasure gaussian(int dim, double sigma);
  static PriorMeasure uniform_ball(int dim, double radius);
  /// `psi0` is the radial negative log density (up to a constant). For
  /// full space `envelope_sigma` sets the Gaussian envelope.
  static PriorMeasure radial_density(const Domain& domain, RadialProfile psi0,
                                     double envelope_sigma = 1.0);

  Family family() const { return family_; }
  const Domain& domain() const { return domain_; }
  int dim() const { return domain_.dim; }
  double sigma() const { return sigma_; }
  std::string label() const;

  /// psi0(x) with the normalization folded in, so e^{-psi0} integrates to 1.
  double neg_log_density(std::span<const double> x) const;
  /// Normalized radial density at |x| = r (mass per unit r, includes the
  /// surface factor).
  double radial_density_at(double r) const;
  /// Mass of the shell a <= |x| < b.
  double shell_mass(double a, double b) const;

  /// One draw written into out (length dim). Throws configuration error if
  /// the rejection acceptance rate is below 1e-3.
  void sample(Rng& rng, std::span<double> out) const;

  /// Acceptance probability of the rejection sampler (1 for exact samplers).
  double acceptance_rate() const { return acceptance_; }

 private:
  Family family_ = Family::gaussian;
  Domain domain_;
  double sigma_ = 1.0;
  std::optional<RadialProfile> psi0_;
  double log_norm_ = 0.0;      // log of int e^{-psi0}
  double psi0_floor_ = 0.0;    // lower bound of psi0 - log envelope density
  double acceptance_ = 1.0;
};

/// Total mass of the prior by radial quadrature (should be 1).
double prior_total_mass(const PriorMeasure& prior);

/// Surface area of the unit sphere S^{d-1}.
double unit_sphere_area(int dim);
/// Volume of the unit ball in R^d.
double unit_ball_volume(int dim);

}  // namespace ensemble_lab
