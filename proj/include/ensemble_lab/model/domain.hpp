#pragma once

#include <span>
#include <string>

namespace ensemble_lab {

struct Domain {
  enum class Kind { ball, full_space };

  Kind kind = Kind::full_space;
  int dim = 2;
  double radius = 0.0;  // ball only

  static Domain ball(int dim, double radius);
  static Domain full_space(int dim);

  bool is_ball() const { return kind == Kind::ball; }
  bool contains(std::span<const double> x) const;
  std::string describe() const;
};

}  // namespace ensemble_lab
