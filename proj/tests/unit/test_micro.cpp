#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "ensemble_lab/error.hpp"
#include "ensemble_lab/micro/concavity.hpp"
#include "ensemble_lab/micro/hamiltonian.hpp"
#include "ensemble_lab/micro/pipeline.hpp"
#include "ensemble_lab/micro/sampling.hpp"
#include "ensemble_lab/micro/sublevel.hpp"
#include "ensemble_lab/micro/tails.hpp"
#include "ensemble_lab/micro/wang_landau.hpp"
#include "ensemble_lab/random.hpp"

using namespace ensemble_lab;

namespace {

ModelSpec vortex_gaussian(int N) {
  ModelSpec m;
  m.name = "vortex";
  m.domain = Domain::full_space(2);
  m.W = PairKernel::radial(profiles::log_repulsive());
  m.prior = PriorMeasure::gaussian(2, 1.0);
  m.N = N;
  return m;
}

ModelSpec potential_only(const Domain& dom, const PriorMeasure& prior, RadialProfile v, int N = 1) {
  ModelSpec m;
  m.domain = dom;
  m.W = PairKernel::zero();
  m.V = ExteriorPotential::radial(std::move(v));
  m.prior = prior;
  m.N = N;
  return m;
}

Configuration config2(std::initializer_list<std::pair<double, double>> pts) {
  Configuration c(2, pts.size());
  std::size_t i = 0;
  for (auto [a, b] : pts) {
    c.point(i)[0] = a;
    c.point(i)[1] = b;
    ++i;
  }
  return c;
}

}  // namespace

// ---- hamiltonian ----

TEST(Hamiltonian, Examples) {
  EXPECT_EQ(hamiltonian(vortex_gaussian(2), config2({{0, 0}, {1, 0}})), 0.0);
  EXPECT_DOUBLE_EQ(hamiltonian(vortex_gaussian(2), config2({{0, 0}, {std::exp(1.0), 0}})), -0.5);
  const ModelSpec m = potential_only(Domain::full_space(2), PriorMeasure::gaussian(2, 1.0), profiles::monomial(1.0, 2.0), 3);
  EXPECT_DOUBLE_EQ(hamiltonian(m, config2({{1, 0}, {0, 1}, {0, 0}})), 2.0);
}

TEST(Hamiltonian, CollisionOfRepulsiveKernelIsPlusInfinity) {
  EXPECT_EQ(hamiltonian(vortex_gaussian(2), config2({{0.3, 0.3}, {0.3, 0.3}})), kInf);
}

TEST(Hamiltonian, PermutationInvariantExactly) {
  ModelSpec m = vortex_gaussian(7);
  m.V = ExteriorPotential::radial(profiles::monomial(0.3, 2.0));
  Rng rng = make_rng(11, 0);
  Configuration c(2, 7);
  draw_configuration(m, rng, c);
  const double h0 = hamiltonian(m, c);
  std::vector<std::size_t> perm(7);
  std::iota(perm.begin(), perm.end(), 0);
  for (int t = 0; t < 100; ++t) {
    std::shuffle(perm.begin(), perm.end(), rng);
    Configuration p(2, 7);
    for (std::size_t i = 0; i < 7; ++i) std::copy_n(c.point(perm[i]).begin(), 2, p.point(i).begin());
    ASSERT_EQ(hamiltonian(m, p), h0);
  }
}

TEST(Hamiltonian, ZeroKernelGivesMeanPotential) {
  const ModelSpec m = potential_only(Domain::full_space(2), PriorMeasure::gaussian(2, 1.0), profiles::monomial(1.0, 2.0), 5);
  Rng rng = make_rng(4, 0);
  Configuration c(2, 5);
  for (int t = 0; t < 50; ++t) {
    draw_configuration(m, rng, c);
    std::vector<double> v;
    for (std::size_t i = 0; i < 5; ++i) v.push_back(m.V(c.point(i)));
    std::sort(v.begin(), v.end());
    EXPECT_DOUBLE_EQ(hamiltonian(m, c) / 5, std::accumulate(v.begin(), v.end(), 0.0) / 5);
  }
}

TEST(Hamiltonian, NegatedModelFlipsSign) {
  const ModelSpec m = vortex_gaussian(4);
  const ModelSpec n = negated_model(m);
  Rng rng = make_rng(8, 0);
  Configuration c(2, 4);
  draw_configuration(m, rng, c);
  EXPECT_EQ(hamiltonian(n, c), -hamiltonian(m, c));
}

// ---- sampling ----

TEST(Sampling, GaussianMeanNearZero) {
  ModelSpec m = vortex_gaussian(1);
  const std::size_t M = 100000;
  double s0 = 0, s1 = 0;
  sample_prior_configs(m, M, 5, [&](std::size_t, const Configuration& c) {
    s0 += c.point(0)[0];
    s1 += c.point(0)[1];
  });
  EXPECT_LT(std::abs(s0 / M), 4.0 / std::sqrt(double(M)));
  EXPECT_LT(std::abs(s1 / M), 4.0 / std::sqrt(double(M)));
}

TEST(Sampling, UniformDiscMeanRadiusTwoThirds) {
  ModelSpec m = potential_only(Domain::ball(2, 1.0), PriorMeasure::uniform_ball(2, 1.0), profiles::zero());
  const std::size_t M = 100000;
  double s = 0, s2 = 0;
  sample_prior_configs(m, M, 6, [&](std::size_t, const Configuration& c) {
    const double r = std::hypot(c.point(0)[0], c.point(0)[1]);
    s += r;
    s2 += r * r;
  });
  const double mean = s / M, se = std::sqrt((s2 / M - mean * mean) / M);
  EXPECT_NEAR(mean, 2.0 / 3.0, 4 * se);
}

TEST(Sampling, DeterministicAndIndependentOfExecution) {
  const ModelSpec m = vortex_gaussian(4);
  std::vector<double> first_a, first_b;
  sample_prior_configs(m, 1, 77, [&](std::size_t, const Configuration& c) { first_a = c.coords; });
  sample_prior_configs(m, 1, 77, [&](std::size_t, const Configuration& c) { first_b = c.coords; });
  EXPECT_EQ(first_a, first_b);
  EXPECT_EQ(sample_energies(m, 20000, 3, Execution::serial), sample_energies(m, 20000, 3, Execution::parallel));
}

// ---- direct tails ----

TEST(TailDirect, ZeroModelIsFlatThenEmpty) {
  ModelSpec m = vortex_gaussian(2);
  m.W = PairKernel::zero();
  const std::vector<double> grid{-1.0, -0.5, 0.5, 1.0};
  const TailCurve t = tail_logprob_direct(m, grid, 5000, 1, TailDirection::upper);
  EXPECT_EQ(t.value[0], 0.0);
  EXPECT_EQ(t.value[1], 0.0);
  EXPECT_TRUE(t.flagged[2] && t.flagged[3]);
  EXPECT_EQ(t.hits[2], 0u);
}

TEST(TailDirect, LowerTailOfSquareOnDiscIsLogE) {
  const ModelSpec m = potential_only(Domain::ball(2, 1.0), PriorMeasure::uniform_ball(2, 1.0), profiles::monomial(1.0, 2.0));
  const std::vector<double> grid{0.25, 0.5, 1.0};
  const TailCurve t = tail_logprob_direct(m, grid, 200000, 12, TailDirection::lower);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_LE(std::abs(t.value[i] - std::log(grid[i])), 3 * t.std_error[i] + 1e-15) << grid[i];
  }
}

TEST(TailDirect, TwoVorticesMatchClosedForm) {
  // H/N = -log|x1 - x2| / 4 > 0  iff  |x1 - x2| < 1, and |x1 - x2|^2 / 4 ~ Exp(1).
  const std::vector<double> grid{-0.2, 0.0, 0.2};
  const TailCurve t = tail_logprob_direct(vortex_gaussian(2), grid, 200000, 21, TailDirection::upper);
  const double exact = 0.5 * std::log(1.0 - std::exp(-0.25));
  EXPECT_NEAR(t.value[1], exact, 3 * t.std_error[1]);
  EXPECT_TRUE(t.monotone());
}

TEST(TailDirect, NoReachablePointIsPrecondition) {
  const std::vector<double> grid{50.0, 60.0};
  try {
    tail_logprob_direct(vortex_gaussian(2), grid, 2000, 1, TailDirection::upper);
    FAIL();
  } catch (const LabError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::precondition);
  }
}

TEST(TailDirect, NormalizationBridgeForOneParticle) {
  const ModelSpec m = potential_only(Domain::full_space(2), PriorMeasure::gaussian(2, 1.0), profiles::monomial(1.0, 2.0));
  std::vector<double> grid;
  for (int i = 1; i <= 12; ++i) grid.push_back(0.5 * i);
  const TailCurve up = tail_logprob_direct(m, grid, 100000, 9, TailDirection::upper);
  const TailCurve lo = tail_logprob_direct(m, grid, 100000, 9, TailDirection::lower);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (up.flagged[i] || lo.flagged[i]) continue;
    const double pu = std::exp(up.value[i]), pl = std::exp(lo.value[i]);
    const double se = std::hypot(pu * up.std_error[i], pl * lo.std_error[i]);
    EXPECT_LE(std::abs(pu + pl - 1.0), 3 * se + 1e-12) << grid[i];
  }
}

TEST(TailDirect, UpperOnNegatedEqualsLowerExactly) {
  const ModelSpec m = vortex_gaussian(3);
  const std::vector<double> grid{-0.3, -0.1, 0.0, 0.1};
  std::vector<double> neg(grid.rbegin(), grid.rend());
  for (double& e : neg) e = -e;
  const TailCurve lo = tail_logprob_direct(m, grid, 20000, 4, TailDirection::lower);
  const TailCurve up = tail_logprob_direct(negated_model(m), neg, 20000, 4, TailDirection::upper);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::size_t j = grid.size() - 1 - i;
    EXPECT_EQ(lo.hits[i], up.hits[j]);
    EXPECT_EQ(lo.value[i], up.value[j]);
  }
}

// ---- Wang-Landau ----

namespace {
WangLandauParams quick_wl() {
  WangLandauParams p;
  p.bins = 24;
  p.replicas = 2;
  p.log_f_final = 1e-4;
  p.check_interval = 5000;
  return p;
}
}  // namespace

TEST(WangLandau, ChiSquareLowerTailWithinTwoPercent) {
  const ModelSpec m = potential_only(Domain::full_space(2), PriorMeasure::gaussian(2, 1.0), profiles::monomial(1.0, 2.0));
  std::vector<double> grid;
  for (int i = 0; i < 13; ++i) grid.push_back(0.05 + 0.35 * i);
  TailPipelineOptions opt;
  opt.direct_samples = 50000;
  opt.dos = DosMode::always;
  opt.wl = quick_wl();
  opt.wl.replicas = 4;
  opt.wl.log_f_final = 1e-5;
  const TailPipelineResult r = estimate_tail(m, grid, TailDirection::lower, opt, 31);
  ASSERT_TRUE(r.anchored.has_value());
  const TailCurve& a = r.anchored->curve;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (r.direct.flagged[i]) continue;
    const double exact = 1.0 - std::exp(-grid[i] / 2.0);
    EXPECT_NEAR(std::exp(a.value[i]) / exact, 1.0, 0.02) << grid[i];
  }
  EXPECT_LE(r.anchored->mean_abs_gap, 2.0 * r.anchored->pooled_stderr);
}

TEST(WangLandau, DeepVortexTailIsMonotone) {
  const ModelSpec m = vortex_gaussian(4);
  std::vector<double> grid;
  for (int i = 0; i < 12; ++i) grid.push_back(-0.1 + 0.1 * i);
  TailPipelineOptions opt;
  opt.direct_samples = 50000;
  opt.wl = quick_wl();
  const TailPipelineResult r = estimate_tail(m, grid, TailDirection::upper, opt, 32);
  ASSERT_TRUE(r.dos.has_value());
  EXPECT_TRUE(r.combined.monotone());
  EXPECT_TRUE(r.dos_curve->monotone());
  std::size_t deep = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) deep += r.direct.flagged[i] && !r.combined.flagged[i];
  EXPECT_GT(deep, 0u);
}

TEST(WangLandau, EqualBinWidths) {
  const ModelSpec m = vortex_gaussian(2);
  WangLandauParams p = quick_wl();
  const DosEstimate d = tail_logprob_dos(m, -0.5, 0.5, p, 3);
  for (std::size_t i = 1; i + 1 < d.edges.size(); ++i) {
    EXPECT_NEAR(d.edges[i + 1] - d.edges[i], d.edges[1] - d.edges[0], 1e-12);
  }
}

// ---- sublevel volumes ----

TEST(Sublevel, DiscArea) {
  EXPECT_NEAR(exact_sublevel_volume_powerlaw(2.0, 1, 1, 0.5), std::numbers::pi * 0.5,
              4 * 0.005 * std::numbers::pi * 0.5);
}

TEST(Sublevel, PowerScalingIsExact) {
  for (auto [alpha, N] : {std::pair{1.0, 1}, std::pair{2.0, 2}, std::pair{1.5, 3}}) {
    const double e = 0.01;
    const double a = exact_sublevel_volume_powerlaw(alpha, 1, N, e);
    const double b = exact_sublevel_volume_powerlaw(alpha, 1, N, 4 * e);
    EXPECT_NEAR(b / a, std::pow(4.0, 2.0 * N / alpha), 1e-12 * std::pow(4.0, 2.0 * N / alpha));
  }
}

TEST(Sublevel, L1BallInC2MatchesBruteForce) {
  const EstimateWithError K = sublevel_unit_volume(1.0, 1, 2);
  Rng rng = make_rng(2024, 0);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::size_t M = 10'000'000;
  std::size_t hit = 0;
  for (std::size_t i = 0; i < M; ++i) {
    const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    hit += std::hypot(a, b) + std::hypot(c, d) <= 1.0;
  }
  const double p = double(hit) / M;
  const double brute = 16.0 * p, brute_se = 16.0 * std::sqrt(p * (1 - p) / M);
  EXPECT_NEAR(K.value, brute, 3 * std::hypot(K.std_error, brute_se));
  EXPECT_NEAR(K.value, std::numbers::pi * std::numbers::pi / 6.0, 3 * K.std_error);
  EXPECT_LE(K.std_error / K.value, 0.005);
}

TEST(Sublevel, LeavingTheBallIsPrecondition) {
  EXPECT_THROW(exact_sublevel_volume_powerlaw(2.0, 1, 1, 1.5), LabError);
}

// ---- concavity ----

TEST(Concavity, Examples) {
  std::vector<double> x, y, z;
  for (int i = 0; i < 10; ++i) {
    x.push_back(0.1 * i);
    y.push_back(-x.back() * x.back());
    z.push_back(x.back() * x.back());
  }
  ConcavityOptions strict;
  strict.mode = ConcavityMode::strict;
  strict.strict_epsilon = 1e-6;
  EXPECT_TRUE(concavity_check(make_curve(x, y), strict).passed());
  const ValidationReport r = concavity_check(make_curve(x, z));
  EXPECT_EQ(r.failure_count(), x.size() - 2);
  for (const auto& e : r.entries()) {
    if (!e.passed) {
      ASSERT_TRUE(e.witness.has_value());
    }
  }
  EXPECT_THROW(concavity_check(make_curve({0, 1, 2}, {0, 0, 0})), LabError);
}

TEST(Concavity, WeakModeUsesPooledStderr) {
  SampledCurve c = make_curve({0, 1, 2, 3, 4}, {0, -1, -1.9, -3.1, -4});
  c.std_error = {0.1, 0.1, 0.1, 0.1, 0.1};
  EXPECT_TRUE(concavity_check(c).passed());
  c.std_error = {1e-4, 1e-4, 1e-4, 1e-4, 1e-4};
  EXPECT_FALSE(concavity_check(c).passed());
}

TEST(Concavity, FourVorticesUpperTailIsWeaklyConcave) {
  std::vector<double> grid;
  for (int i = 0; i < 12; ++i) grid.push_back(-0.3 + 0.05 * i);
  const TailCurve t = tail_logprob_direct(vortex_gaussian(4), grid, 200000, 40, TailDirection::upper);
  EXPECT_TRUE(t.monotone());
  EXPECT_TRUE(concavity_check(t).passed());
}
