#include "ensemble_lab/quadrature.hpp"

#include <map>
#include <memory>
#include <mutex>

#include <boost/math/special_functions/legendre.hpp>

#include "ensemble_lab/error.hpp"

namespace ensemble_lab {

namespace {

GaussRule build_rule(std::size_t order) {
  namespace bm = boost::math;
  const int n = static_cast<int>(order);
  // legendre_p_zeros returns the non-negative roots in ascending order.
  const std::vector<double> pos = bm::legendre_p_zeros<double>(n);
  GaussRule rule;
  auto weight = [n](double x) {
    const double dp = bm::legendre_p_prime(n, x);
    return 2.0 / ((1.0 - x * x) * dp * dp);
  };
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) {
    if (*it == 0.0) continue;
    rule.nodes.push_back(-*it);
    rule.weights.push_back(weight(*it));
  }
  for (double x : pos) {
    rule.nodes.push_back(x);
    rule.weights.push_back(weight(x));
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(std::size_t order) {
  require(order >= 1, ErrorKind::usage, "gauss_legendre: order must be >= 1");
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<GaussRule>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<GaussRule>(build_rule(order));
  return *slot;
}

void gauss_legendre_on(std::size_t order, double a, double b, std::vector<double>& nodes,
                       std::vector<double>& weights) {
  const GaussRule& rule = gauss_legendre(order);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  nodes.resize(rule.nodes.size());
  weights.resize(rule.nodes.size());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    nodes[i] = mid + half * rule.nodes[i];
    weights[i] = half * rule.weights[i];
  }
}

}  // namespace ensemble_lab
