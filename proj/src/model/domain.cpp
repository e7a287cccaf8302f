#include "ensemble_lab/model/domain.hpp"

#include <cmath>

#include "ensemble_lab/error.hpp"

namespace ensemble_lab {

Domain Domain::ball(int dim, double radius) {
  require(dim >= 1, ErrorKind::configuration, "domain: d must be >= 1");
  require(radius > 0.0 && std::isfinite(radius), ErrorKind::configuration,
          "domain: R must be positive and finite");
  return Domain{Kind::ball, dim, radius};
}

Domain Domain::full_space(int dim) {
  require(dim >= 1, ErrorKind::configuration, "domain: d must be >= 1");
  return Domain{Kind::full_space, dim, 0.0};
}

bool Domain::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim) return false;
  double r2 = 0.0;
  for (double v : x) {
    if (!std::isfinite(v)) return false;
    r2 += v * v;
  }
  return kind == Kind::full_space || r2 <= radius * radius;
}

std::string Domain::describe() const {
  if (kind == Kind::ball) return "ball(d=" + std::to_string(dim) + ", R=" + std::to_string(radius) + ")";
  return "full_space(d=" + std::to_string(dim) + ")";
}

}  // namespace ensemble_lab
