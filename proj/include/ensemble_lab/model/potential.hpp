#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>

#include "ensemble_lab/model/profile.hpp"

namespace ensemble_lab {

/// Exterior potential V(x), values in R or +inf.
class ExteriorPotential {
 public:
  using PointFunction = std::function<double(std::span<const double>)>;

  static ExteriorPotential zero();
  static ExteriorPotential radial(RadialProfile profile);
  static ExteriorPotential general(PointFunction f, std::string label);

  double operator()(std::span<const double> x) const;

  bool is_zero() const { return kind_ == Kind::zero; }
  /// Non-null for rotation-invariant potentials (zero counts as radial).
  const RadialProfile* profile() const { return profile_ ? &*profile_ : nullptr; }
  bool is_radial() const { return kind_ != Kind::general; }
  const std::string& label() const { return label_; }

 private:
  enum class Kind { zero, radial, general };
  Kind kind_ = Kind::zero;
  std::optional<RadialProfile> profile_;
  PointFunction general_;
  std::string label_ = "zero";
};

}  // namespace ensemble_lab
