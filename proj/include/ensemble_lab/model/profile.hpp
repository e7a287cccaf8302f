#pragma once

#include <functional>
#include <string>
#include <vector>

namespace ensemble_lab {

/// Closed-form families the discretizer and validators can special-case.
enum class ProfileFamily {
  log,            // -c log r
  power,          // -r^a
  inverse_power,  // r^-alpha
  exponential,    // exp(-alpha r^a)
  loglog,         // log(log(1/r)), r < 1
  monomial,       // c r^p
  zero,
  shifted,        // base(r + delta)
  capped,         // base(max(r, delta))
  mollified,      // base convolved with a bump of width delta
  custom,
};

/// Radial interaction profile r -> w(r), values in R or +inf.
///
/// Evaluation is a pure function of r. At r == 0 the profile returns
/// `limit_at_zero()` without calling the underlying function.
class RadialProfile {
 public:
  using Function = std::function<double(double)>;

  RadialProfile(Function eval, double limit_at_zero, std::string label,
                ProfileFamily family = ProfileFamily::custom, std::vector<double> params = {});

  double operator()(double r) const { return r > 0.0 ? eval_(r) : limit_at_zero_; }

  double limit_at_zero() const { return limit_at_zero_; }
  const std::string& label() const { return label_; }
  ProfileFamily family() const { return family_; }
  const std::vector<double>& params() const { return params_; }

  /// Coefficient c when this is the pure -c log r profile, else 0.
  double log_coefficient() const;

  /// r -> -w(r); used to flip between repulsive and attractive conventions.
  RadialProfile negated() const;

 private:
  Function eval_;
  double limit_at_zero_;
  std::string label_;
  ProfileFamily family_;
  std::vector<double> params_;
};

namespace profiles {

/// -log r, the default point-vortex normalization.
RadialProfile log_repulsive();
/// -(1/2pi) log r.
RadialProfile log_repulsive_2pi();
/// -c log r for arbitrary c > 0.
RadialProfile log_scaled(double c);
/// -r^a (continuous repulsive power law).
RadialProfile power(double a);
/// r^-alpha (singular repulsive power law).
RadialProfile inverse_power(double alpha);
/// exp(-alpha r^a); a = 1 is the Born-Mayer potential.
RadialProfile exponential(double a, double alpha);
/// log(log(1/r)), defined for r < 1.
RadialProfile loglog();
/// c r^p.
RadialProfile monomial(double c, double p);
RadialProfile zero();
RadialProfile custom(RadialProfile::Function f, double limit_at_zero, std::string label);

}  // namespace profiles

}  // namespace ensemble_lab
