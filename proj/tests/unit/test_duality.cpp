#include <gtest/gtest.h>

#include <boost/math/tools/roots.hpp>
#include <algorithm>
#include <cmath>
#include <random>

#include "ensemble_lab/duality/critical.hpp"
#include "ensemble_lab/duality/legendre.hpp"
#include "ensemble_lab/error.hpp"
#include "ensemble_lab/macro/discretize.hpp"
#include "ensemble_lab/macro/sweep.hpp"
#include "ensemble_lab/micro/partition.hpp"
#include "ensemble_lab/random.hpp"

using namespace ensemble_lab;

namespace {

SampledCurve sample(double lo, double hi, int n, const std::function<double(double)>& f) {
  std::vector<double> x, y;
  for (int i = 0; i < n; ++i) {
    const double t = lo + (hi - lo) * i / (n - 1);
    x.push_back(t);
    y.push_back(f(t));
  }
  return make_curve(x, y);
}

// Random concave piecewise-linear curve sampled at its breakpoints and at
// interior points of its pieces.
SampledCurve random_concave(Rng& rng) {
  std::uniform_int_distribution<int> pieces(3, 12), inner(0, 3);
  std::uniform_real_distribution<double> len(0.1, 2.0), drop(0.05, 3.0), start(-5.0, 5.0);
  const int k = pieces(rng);
  std::vector<double> x{start(rng)}, y{start(rng)};
  double slope = start(rng) + 10.0;
  for (int p = 0; p < k; ++p) {
    const double L = len(rng);
    const int m = inner(rng);
    for (int j = 1; j <= m + 1; ++j) {
      const double t = L * j / (m + 1);
      x.push_back(x[x.size() - j] + t);
      y.push_back(y[y.size() - j] + slope * t);
    }
    slope -= drop(rng);
  }
  return make_curve(x, y);
}

SampledCurve random_curve(Rng& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> x, y;
  for (int i = 0; i < n; ++i) {
    x.push_back(i);
    y.push_back(-0.05 * i * i + g(rng));
  }
  return make_curve(x, y);
}

ModelSpec gaussian_vortex() {
  ModelSpec m;
  m.domain = Domain::full_space(2);
  m.W = PairKernel::radial(profiles::log_repulsive());
  m.prior = PriorMeasure::gaussian(2, 1.0);
  return m;
}

// W = 0, V = r^2 on the uniform unit disc: u = r^2 is uniform on [0, 1].
double gibbs_F(double beta) { return beta == 0.0 ? 0.0 : -std::log(-std::expm1(-beta) / beta); }
double gibbs_E(double beta) {
  if (std::abs(beta) < 1e-8) return 0.5 - beta / 12.0;
  return 1.0 / beta - 1.0 / std::expm1(beta);
}
// S(e) = beta e - F(beta) at E(beta) = e.
double gibbs_S(double e) {
  boost::uintmax_t it = 200;
  const auto [a, b] = boost::math::tools::toms748_solve([e](double beta) { return gibbs_E(beta) - e; }, -200.0, 200.0,
                                                        boost::math::tools::eps_tolerance<double>(52), it);
  const double beta = 0.5 * (a + b);
  return beta * e - gibbs_F(beta);
}

}  // namespace

// ---- legendre_concave ----

TEST(Legendre, NegativeParabolaIsSelfDual) {
  const double dx = 0.05;
  const SampledCurve f = sample(-3.0, 3.0, 121, [](double x) { return -0.5 * x * x; });
  const SampledCurve t = legendre_concave(f);
  ASSERT_EQ(t.size(), 120u);
  EXPECT_NEAR(t.x.front(), -2.975, 1e-12);
  EXPECT_NEAR(t.x.back(), 2.975, 1e-12);
  for (std::size_t i = 0; i < t.size(); ++i) EXPECT_NEAR(t.y[i], -0.5 * t.x[i] * t.x[i], 0.5 * dx * dx);
}

TEST(Legendre, NegativeAbsoluteValue) {
  const SampledCurve f = sample(-2.0, 2.0, 9, [](double x) { return -std::abs(x); });
  const SampledCurve t = legendre_concave(f, 0.5);
  ASSERT_EQ(t.size(), 4u);
  EXPECT_EQ(t.x[1], -1.0);
  EXPECT_EQ(t.x[2], 1.0);
  EXPECT_EQ(t.y[1], 0.0);
  EXPECT_EQ(t.y[2], 0.0);
  // outside [-1, 1] the transform falls below 0
  EXPECT_LT(t.y[0], 0.0);
  EXPECT_LT(t.y[3], 0.0);
}

TEST(Legendre, GibbsFreeEnergyTransformsToEntropy) {
  std::vector<double> b, F;
  for (int i = 0; i <= 400; ++i) {
    b.push_back(-20.0 + 0.1 * i);
    F.push_back(gibbs_F(b.back()));
  }
  const SampledCurve T = legendre_concave(make_curve(b, F));
  for (double e : {0.1, 0.2, 0.35, 0.5, 0.65, 0.8, 0.9}) {
    EXPECT_NEAR(interpolate(T, e), gibbs_S(e), 2e-4) << e;
  }
}

TEST(Legendre, GibbsModelEquivalenceGap) {
  // S from the discretized maximum-entropy problem, F from the closed form.
  ModelSpec m;
  m.domain = Domain::ball(2, 1.0);
  m.V = ExteriorPotential::radial(profiles::monomial(1.0, 2.0));
  m.prior = PriorMeasure::uniform_ball(2, 1.0);
  DiscretizationOptions o;
  o.resolution = 512;
  const DiscretizedModel dm = discretize(m, DiscretizationMode::radial, o);
  std::vector<double> es;
  for (int i = 0; i < 15; ++i) es.push_back(0.2 + 0.04 * i);
  const EntropyCurve S = entropy_curve_direct(dm, es, {-40.0, 40.0});
  std::vector<double> b, F;
  for (int i = 0; i <= 800; ++i) {
    b.push_back(-40.0 + 0.1 * i);
    F.push_back(gibbs_F(b.back()));
  }
  const EquivalenceGap g = equivalence_gap(S.curve, make_curve(b, F), 1e-3);
  EXPECT_TRUE(g.pass) << g.gap;
  EXPECT_EQ(g.points, es.size());
  for (std::size_t i = 0; i < es.size(); ++i) EXPECT_NEAR(S.curve.y[i], gibbs_S(es[i]), 1e-4);
}

TEST(Legendre, Errors) {
  EXPECT_THROW(legendre_concave(make_curve({0.0, 1.0}, {0.0, 1.0})), LabError);
  EXPECT_THROW(legendre_concave(make_curve({0.0, 1.0, 2.0, 3.0}, {-kInf, -kInf, 0.0, 1.0})), LabError);
  EXPECT_THROW(legendre_concave(make_curve({0.0, 1.0, 2.0, 3.0}, {0.0, -kInf, 0.0, 1.0})), LabError);
  EXPECT_THROW(legendre_concave(make_curve({0.0, 2.0, 1.0}, {0.0, 1.0, 2.0})), LabError);
}

// ---- concave_envelope ----

TEST(Envelope, ConcaveInputUnchanged) {
  const SampledCurve f = sample(-1.0, 2.0, 31, [](double x) { return std::log(3.0 + x) - x * x; });
  const SampledCurve h = concave_envelope(f);
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_EQ(h.y[i], f.y[i]);
}

TEST(Envelope, DentIsBridged) {
  // max of two concave parabolas: a convex kink at x = 1 of depth 1
  const SampledCurve f = sample(-1.0, 3.0, 41, [](double x) { return std::max(-x * x, -(x - 2) * (x - 2)); });
  const SampledCurve h = concave_envelope(f);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.x[i] >= -1e-12 && f.x[i] <= 2.0 + 1e-12) {
      EXPECT_NEAR(h.y[i], 0.0, 1e-12) << f.x[i];
    } else {
      EXPECT_EQ(h.y[i], f.y[i]);
    }
  }
  EXPECT_NEAR(h.y[20] - f.y[20], 1.0, 1e-12);
}

TEST(Envelope, EndSentinelIgnoredAndNoted) {
  SampledCurve f = sample(0.0, 4.0, 5, [](double x) { return -x * x; });
  f.y[4] = -kInf;
  const SampledCurve h = concave_envelope(f);
  EXPECT_EQ(h.y[4], -kInf);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(h.y[i], f.y[i]);
  ASSERT_EQ(h.notes.size(), 1u);
  EXPECT_NE(h.notes[0].find("right end"), std::string::npos);
}

// ---- superdifferential ----

TEST(Superdifferential, Kink) {
  const SampledCurve f = sample(-2.0, 2.0, 9, [](double x) { return -std::abs(x); });
  const Superdifferential s = superdifferential(f, 0.0);
  EXPECT_EQ(s.slope_right, -1.0);
  EXPECT_EQ(s.slope_left, 1.0);
  EXPECT_FALSE(s.one_sided);
}

TEST(Superdifferential, SmoothPoint) {
  const double dx = 0.01;
  const SampledCurve f = sample(-2.0, 2.0, 401, [](double x) { return -0.5 * x * x; });
  const Superdifferential s = superdifferential(f, 1.0);
  EXPECT_NEAR(s.slope_right, -1.0, dx);
  EXPECT_NEAR(s.slope_left, -1.0, dx);
  EXPECT_LE(s.slope_right, s.slope_left);
}

TEST(Superdifferential, AffineAndBoundary) {
  const SampledCurve f = sample(0.0, 8.0, 9, [](double x) { return 3.0 - 0.25 * x; });
  const Superdifferential s = superdifferential(f, 4.0);
  EXPECT_EQ(s.slope_right, -0.25);
  EXPECT_EQ(s.slope_left, -0.25);
  const Superdifferential b = superdifferential(f, 8.0);
  EXPECT_TRUE(b.one_sided);
  EXPECT_EQ(b.slope_left, -0.25);
  EXPECT_THROW(superdifferential(f, 9.0), LabError);
}

// ---- equivalence_gap ----

TEST(EquivalenceGap, ConcaveRoundTrip) {
  const SampledCurve S = sample(0.0, 2.0, 81, [](double e) { return -e * e + std::log1p(e); });
  const SampledCurve F = legendre_concave(S);
  const EquivalenceGap g = equivalence_gap(S, F, 1e-10);
  EXPECT_TRUE(g.pass) << g.gap;
  EXPECT_GE(g.points, 75u);
}

TEST(EquivalenceGap, DentDepth) {
  const SampledCurve S = sample(-1.0, 3.0, 41, [](double x) { return std::max(-x * x, -(x - 2) * (x - 2)); });
  const EquivalenceGap g = equivalence_gap(S, legendre_concave(S), 1e-3);
  EXPECT_FALSE(g.pass);
  EXPECT_NEAR(g.gap, 1.0, 1e-12);
  EXPECT_NEAR(g.argmax, 1.0, 1e-12);
}

TEST(EquivalenceGap, NoOverlapIsError) {
  const SampledCurve S = sample(10.0, 11.0, 5, [](double e) { return -e; });
  const SampledCurve F = sample(-1.0, 1.0, 11, [](double b) { return -b * b; });
  EXPECT_THROW(equivalence_gap(S, F), LabError);
}

// ---- asymptotic_slope ----

TEST(AsymptoticSlope, AffineTail) {
  const SampledCurve f = sample(0.0, 10.0, 11, [](double e) { return 2.0 - 4.0 * e; });
  const AsymptoticSlope s = asymptotic_slope(f, 6);
  EXPECT_EQ(s.value, -4.0);
  EXPECT_EQ(s.final_slope, -4.0);
  EXPECT_TRUE(s.trend_ok);
  EXPECT_FALSE(s.consistent_with_minus_infinity);
}

TEST(AsymptoticSlope, LogCorrectionConverges) {
  double prev = kInf;
  for (double top : {10.0, 40.0, 160.0, 640.0}) {
    const SampledCurve f = sample(0.0, top, 41, [](double e) { return -4.0 * e + std::log1p(e); });
    const AsymptoticSlope s = asymptotic_slope(f, 6);
    EXPECT_TRUE(s.trend_ok);
    const double err = std::abs(s.value + 4.0);
    EXPECT_LT(err, prev) << top;
    prev = err;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(AsymptoticSlope, DivergingSlopesAndWarnings) {
  const SampledCurve f = sample(0.0, 10.0, 21, [](double e) { return -e * e * e; });
  const AsymptoticSlope s = asymptotic_slope(f, 6);
  EXPECT_TRUE(s.consistent_with_minus_infinity);
  EXPECT_EQ(s.slopes.size(), 6u);

  const SampledCurve g = make_curve({0, 1, 2, 3, 4, 5}, {0, -1, -3, -3.5, -6, -9});
  const AsymptoticSlope t = asymptotic_slope(g, 4);
  EXPECT_FALSE(t.trend_ok);
  EXPECT_FALSE(t.warnings.empty());
  EXPECT_THROW(asymptotic_slope(g, 6), LabError);
}

// ---- critical inverse temperatures ----

TEST(CriticalBeta, AnalyticExamples) {
  EXPECT_EQ(beta_c_analytic(profiles::log_repulsive(), 2), -4.0);
  EXPECT_EQ(beta_c_analytic(profiles::power(1.0), 2), -kInf);
  EXPECT_EQ(beta_c_analytic(profiles::loglog(), 2), -kInf);
  const RadialProfile increasing = profiles::custom([](double r) { return std::log(r); }, -kInf, "log r");
  try {
    beta_c_analytic(increasing, 2);
    FAIL();
  } catch (const LabError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::model);
  }
}

TEST(CriticalBeta, BoundedKernelConsistentWithMinusInfinity) {
  ModelSpec m = gaussian_vortex();
  m.W = regularize(m.W, RegularizationScheme::shift, 0.5);
  CrossCheckOptions o;
  o.run_micro = false;
  const CriticalBetaReport r = critical_beta_crosscheck(m, o, 3);
  EXPECT_EQ(r.beta_analytic, -kInf);
  EXPECT_TRUE(r.errors.empty());
  EXPECT_TRUE(r.macro_slope.consistent_with_minus_infinity);
  EXPECT_TRUE(r.macro_agrees);
  EXPECT_TRUE(r.partition.empty());
  EXPECT_LE(r.beta_macro, 0.0);
  for (std::size_t k = 1; k < r.macro_slope.slopes.size(); ++k) {
    EXPECT_LT(r.macro_slope.slopes[k], r.macro_slope.slopes[k - 1]);
  }
}

TEST(CriticalBeta, PartitionFunctionDivergesBelowBetaC) {
  ModelSpec m = gaussian_vortex();
  m.N = 2;
  for (std::uint64_t seed : {1u, 5u, 24u}) {
    const PartitionDiagnostic above = partition_function_diagnostic(m, -4.0 * 0.9, {10000, 100000, 1000000}, seed);
    const PartitionDiagnostic below = partition_function_diagnostic(m, -4.0 * 1.1, {10000, 100000, 1000000}, seed);
    EXPECT_FALSE(above.unbounded) << above.verdict;
    EXPECT_TRUE(above.stderr_shrinks);
    EXPECT_NEAR(above.growth, 1.0, 0.1);
    EXPECT_TRUE(below.unbounded) << below.verdict;
  }
}

TEST(CriticalBeta, PartitionDiagnosticRejectsOtherPriors) {
  ModelSpec m = gaussian_vortex();
  m.domain = Domain::ball(2, 1.0);
  m.prior = PriorMeasure::uniform_ball(2, 1.0);
  m.N = 2;
  EXPECT_THROW(partition_function_diagnostic(m, -3.0, {100, 1000}, 1), LabError);
}

// ---- invariants ----

TEST(DualityInvariants, Involution) {
  Rng rng = make_rng(101, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const SampledCurve f = random_concave(rng);
    const SampledCurve h = concave_envelope(f);
    for (std::size_t i = 0; i < f.size(); ++i) {
      ASSERT_NEAR(h.y[i], f.y[i], 1e-12 * (1.0 + std::abs(f.y[i]))) << trial;
    }
  }
}

TEST(DualityInvariants, OrderReversal) {
  Rng rng = make_rng(102, 0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const SampledCurve f = random_curve(rng, 25);
    SampledCurve g = f;
    for (double& y : g.y) y += u(rng);
    const SampledCurve fs = legendre_concave(f), gs = legendre_concave(g);
    const double lo = std::max(fs.x.front(), gs.x.front()), hi = std::min(fs.x.back(), gs.x.back());
    for (const SampledCurve* grid : {&fs, &gs}) {
      for (double y : grid->x) {
        if (y < lo || y > hi) continue;
        ASSERT_GE(interpolate(fs, y), interpolate(gs, y) - 1e-12) << trial;
      }
    }
  }
}

TEST(DualityInvariants, EnvelopeDominanceAndAffineOnGap) {
  Rng rng = make_rng(103, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const SampledCurve f = random_curve(rng, 30);
    const SampledCurve h = concave_envelope(f);
    for (std::size_t i = 0; i < f.size(); ++i) ASSERT_GE(h.y[i], f.y[i]);
    for (std::size_t i = 1; i + 1 < f.size(); ++i) {
      ASSERT_LE(h.y[i + 1] - 2 * h.y[i] + h.y[i - 1], 1e-10);
      if (h.y[i] > f.y[i] + 1e-9) ASSERT_NEAR(h.y[i + 1] - 2 * h.y[i] + h.y[i - 1], 0.0, 1e-10) << trial << " " << i;
    }
  }
}

TEST(DualityInvariants, AffineSlopeMatchesSuperdifferential) {
  Rng rng = make_rng(104, 0);
  std::uniform_int_distribution<int> num(-64, 64), off(-100, 100);
  for (int trial = 0; trial < 100; ++trial) {
    const double a = num(rng) / 16.0, b = off(rng);
    std::vector<double> x, y;
    for (int i = 0; i < 12; ++i) {
      x.push_back(i);
      y.push_back(b + a * i);
    }
    const SampledCurve f = make_curve(x, y);
    const AsymptoticSlope s = asymptotic_slope(f, 5);
    for (int i = 1; i < 11; ++i) {
      const Superdifferential d = superdifferential(f, i);
      ASSERT_EQ(d.slope_right, s.value);
      ASSERT_EQ(d.slope_left, s.value);
    }
  }
}
