#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ensemble_lab {

/// N points in R^d stored row-major.
struct Configuration {
  int dim = 2;
  std::vector<double> coords;

  Configuration() = default;
  Configuration(int d, std::size_t n) : dim(d), coords(static_cast<std::size_t>(d) * n, 0.0) {}

  std::size_t size() const { return coords.size() / static_cast<std::size_t>(dim); }
  std::span<const double> point(std::size_t i) const {
    return {coords.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }
  std::span<double> point(std::size_t i) {
    return {coords.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }
};

}  // namespace ensemble_lab
