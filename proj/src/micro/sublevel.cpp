#include "ensemble_lab/micro/sublevel.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "ensemble_lab/error.hpp"
#include "ensemble_lab/model/prior.hpp"
#include "ensemble_lab/random.hpp"

namespace ensemble_lab {

EstimateWithError sublevel_unit_volume(double alpha, int n, int N, double rel_se_target,
                                       std::uint64_t seed) {
  require(alpha > 0.0 && n >= 1 && N >= 1, ErrorKind::usage, "sublevel volume: bad arguments");
  require(rel_se_target > 0.0, ErrorKind::usage, "sublevel volume: target must be positive");
  using Key = std::tuple<double, int, int, double, std::uint64_t>;
  static std::mutex mutex;
  static std::map<Key, EstimateWithError> cache;
  const Key key{alpha, n, N, rel_se_target, seed};
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }

  // Each |z_i| <= 1 on the set, so K = vol(B_{2n})^N P(sum |U_i|^alpha <= 1)
  // with U_i uniform in the unit ball; |U_i| = u^{1/(2n)}.
  const double ball = std::pow(unit_ball_volume(2 * n), N);
  const double inv = 1.0 / (2.0 * n);
  constexpr std::size_t batch = 100000;
  constexpr std::size_t max_samples = 2'000'000'000ULL;
  std::size_t hits = 0, total = 0;
  std::uint64_t stream = 0;
  EstimateWithError out;
  for (;;) {
    Rng rng = make_rng(seed, stream++);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::size_t s = 0; s < batch; ++s) {
      double sum = 0.0;
      for (int i = 0; i < N && sum <= 1.0; ++i) sum += std::pow(std::pow(unif(rng), inv), alpha);
      if (sum <= 1.0) ++hits;
    }
    total += batch;
    const double p = static_cast<double>(hits) / static_cast<double>(total);
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(total));
    if (hits > 0 && se <= rel_se_target * p) {
      out = {ball * p, ball * se, total};
      break;
    }
    require(total < max_samples, ErrorKind::budget, "sublevel volume: sample budget exhausted");
  }
  std::lock_guard<std::mutex> lock(mutex);
  cache[key] = out;
  return out;
}

double exact_sublevel_volume_powerlaw(double alpha, int n, int N, double e, double radius) {
  require(alpha > 0.0, ErrorKind::precondition, "sublevel volume: alpha must be positive");
  require(e >= 0.0, ErrorKind::precondition, "sublevel volume: e must be >= 0");
  require(std::pow(e, 1.0 / alpha) <= radius * (1.0 + 1e-12), ErrorKind::precondition,
          "sublevel volume: the sublevel set leaves the ball of radius " + std::to_string(radius));
  if (e == 0.0) return 0.0;
  const double K = sublevel_unit_volume(alpha, n, N).value;
  return K * std::pow(e, 2.0 * n * N / alpha);
}

}  // namespace ensemble_lab
