#include "ensemble_lab/model/profile.hpp"

#include <cmath>
#include <numbers>

#include "ensemble_lab/curve.hpp"
#include "ensemble_lab/error.hpp"

namespace ensemble_lab {

RadialProfile::RadialProfile(Function eval, double limit_at_zero, std::string label,
                             ProfileFamily family, std::vector<double> params)
    : eval_(std::move(eval)),
      limit_at_zero_(limit_at_zero),
      label_(std::move(label)),
      family_(family),
      params_(std::move(params)) {
  require(static_cast<bool>(eval_), ErrorKind::usage, "profile: empty function");
}

double RadialProfile::log_coefficient() const {
  return family_ == ProfileFamily::log ? params_.at(0) : 0.0;
}

RadialProfile RadialProfile::negated() const {
  auto f = eval_;
  return RadialProfile([f](double r) { return -f(r); }, -limit_at_zero_, "-(" + label_ + ")");
}

namespace profiles {

RadialProfile log_scaled(double c) {
  require(c > 0.0, ErrorKind::configuration, "log profile: coefficient must be positive");
  return RadialProfile([c](double r) { return -c * std::log(r); }, kInf,
                       c == 1.0 ? "log" : "log*" + std::to_string(c), ProfileFamily::log, {c});
}

RadialProfile log_repulsive() { return log_scaled(1.0); }

RadialProfile log_repulsive_2pi() {
  return RadialProfile([](double r) { return -std::log(r) / (2.0 * std::numbers::pi); }, kInf,
                       "log_2pi", ProfileFamily::log, {0.5 * std::numbers::inv_pi});
}

RadialProfile power(double a) {
  require(a > 0.0, ErrorKind::configuration, "power profile: exponent must be positive");
  return RadialProfile([a](double r) { return -std::pow(r, a); }, 0.0,
                       "power(" + std::to_string(a) + ")", ProfileFamily::power, {a});
}

RadialProfile inverse_power(double alpha) {
  require(alpha > 0.0, ErrorKind::configuration, "inverse power profile: alpha must be positive");
  return RadialProfile([alpha](double r) { return std::pow(r, -alpha); }, kInf,
                       "inverse_power(" + std::to_string(alpha) + ")",
                       ProfileFamily::inverse_power, {alpha});
}

RadialProfile exponential(double a, double alpha) {
  require(a > 0.0 && alpha > 0.0, ErrorKind::configuration,
          "exponential profile: parameters must be positive");
  return RadialProfile([a, alpha](double r) { return std::exp(-alpha * std::pow(r, a)); }, 1.0,
                       "exponential(" + std::to_string(a) + "," + std::to_string(alpha) + ")",
                       ProfileFamily::exponential, {a, alpha});
}

RadialProfile loglog() {
  // Only meaningful for r < 1; NaN beyond so misuse is caught by the checkers.
  return RadialProfile(
      [](double r) { return r < 1.0 ? std::log(std::log(1.0 / r)) : kNaN; }, kInf, "loglog",
      ProfileFamily::loglog, {});
}

RadialProfile monomial(double c, double p) {
  return RadialProfile([c, p](double r) { return c * std::pow(r, p); },
                       p > 0.0 ? 0.0 : (p == 0.0 ? c : (c > 0 ? kInf : -kInf)),
                       "monomial(" + std::to_string(c) + "," + std::to_string(p) + ")",
                       ProfileFamily::monomial, {c, p});
}

RadialProfile zero() {
  return RadialProfile([](double) { return 0.0; }, 0.0, "zero", ProfileFamily::zero, {});
}

RadialProfile custom(RadialProfile::Function f, double limit_at_zero, std::string label) {
  return RadialProfile(std::move(f), limit_at_zero, std::move(label), ProfileFamily::custom, {});
}

}  // namespace profiles

}  // namespace ensemble_lab
