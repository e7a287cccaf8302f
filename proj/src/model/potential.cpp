#include "ensemble_lab/model/potential.hpp"

#include <cmath>

#include "ensemble_lab/error.hpp"

namespace ensemble_lab {

ExteriorPotential ExteriorPotential::zero() { return ExteriorPotential{}; }

ExteriorPotential ExteriorPotential::radial(RadialProfile profile) {
  ExteriorPotential v;
  v.kind_ = Kind::radial;
  v.label_ = profile.label();
  v.profile_ = std::move(profile);
  return v;
}

ExteriorPotential ExteriorPotential::general(PointFunction f, std::string label) {
  require(static_cast<bool>(f), ErrorKind::usage, "potential: empty function");
  ExteriorPotential v;
  v.kind_ = Kind::general;
  v.general_ = std::move(f);
  v.label_ = std::move(label);
  return v;
}

double ExteriorPotential::operator()(std::span<const double> x) const {
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::radial: {
      double r2 = 0.0;
      for (double v : x) r2 += v * v;
      return (*profile_)(std::sqrt(r2));
    }
    case Kind::general:
      return general_(x);
  }
  return 0.0;
}

}  // namespace ensemble_lab
