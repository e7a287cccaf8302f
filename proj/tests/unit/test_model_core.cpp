#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "ensemble_lab/curve.hpp"
#include "ensemble_lab/error.hpp"
#include "ensemble_lab/model/checks.hpp"
#include "ensemble_lab/model/kernel.hpp"
#include "ensemble_lab/model/model_json.hpp"
#include "ensemble_lab/model/prior.hpp"
#include "ensemble_lab/quadrature.hpp"
#include "ensemble_lab/random.hpp"

using namespace ensemble_lab;

namespace {

double eval2(const PairKernel& W, double x0, double x1, double y0, double y1) {
  const double x[2]{x0, x1};
  const double y[2]{y0, y1};
  return W(x, y);
}

Eigen::MatrixXd disc_points(std::size_t n, std::uint64_t seed) {
  Rng rng = make_rng(seed, 0);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd p(static_cast<Eigen::Index>(n), 2);
  for (Eigen::Index i = 0; i < p.rows();) {
    const double a = u(rng), b = u(rng);
    if (a * a + b * b < 1.0) {
      p(i, 0) = a;
      p(i, 1) = b;
      ++i;
    }
  }
  return p;
}

// Minimal eigenvalue on {sum a = 0} through an explicit Helmert basis.
double helmert_min_eigenvalue(const Eigen::MatrixXd& G) {
  const Eigen::Index n = G.rows();
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n - 1);
  for (Eigen::Index k = 1; k < n; ++k) {
    const double s = 1.0 / std::sqrt(static_cast<double>(k * (k + 1)));
    for (Eigen::Index i = 0; i < k; ++i) P(i, k - 1) = s;
    P(k, k - 1) = -static_cast<double>(k) * s;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P.transpose() * G * P);
  return es.eigenvalues()(0);
}

const std::vector<double> kGrid = log_grid(1e-5, 10.0, 40);

}  // namespace

// ---- regularize ----

TEST(Regularize, ShiftLog2piVanishesAtHalf) {
  const PairKernel W = regularize(PairKernel::radial(profiles::log_repulsive_2pi()), RegularizationScheme::shift, 0.5);
  EXPECT_DOUBLE_EQ(eval2(W, 0, 0, 0.5, 0), 0.0);
  EXPECT_DOUBLE_EQ(eval2(W, 0.1, 0.2, 0.1, 0.2), -std::log(0.5) / (2 * std::numbers::pi));
}

TEST(Regularize, ShiftIsExactForLogProfile) {
  const PairKernel W = regularize(PairKernel::radial(profiles::log_repulsive_2pi()), RegularizationScheme::shift, 0.1);
  for (double r : {0.0, 0.03, 0.7, 2.5}) {
    EXPECT_EQ(eval2(W, 0, 0, r, 0), -std::log(r + 0.1) / (2 * std::numbers::pi)) << r;
  }
}

TEST(Regularize, CapIsConstantInsideDelta) {
  const PairKernel W = regularize(PairKernel::radial(profiles::log_repulsive()), RegularizationScheme::cap, 0.1);
  EXPECT_DOUBLE_EQ(eval2(W, 0, 0, 0.05, 0), eval2(W, 0, 0, 0.1, 0));
  EXPECT_DOUBLE_EQ(eval2(W, 0, 0, 0, 0), -std::log(0.1));
  EXPECT_DOUBLE_EQ(eval2(W, 0, 0, 0.3, 0), -std::log(0.3));
}

TEST(Regularize, MollifyMatchesPolarQuadratureOracle) {
  const double delta = 0.1;
  const PairKernel W = regularize(PairKernel::radial(profiles::log_repulsive()), RegularizationScheme::mollify, delta);
  // Oracle: polar rule (Gauss in rho, trapezoid in theta) of the normalized bump.
  std::vector<double> rn, rw;
  gauss_legendre_on(200, 0.0, delta, rn, rw);
  const int nt = 512;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < rn.size(); ++i) {
    const double q = rn[i] / delta;
    const double bump = std::exp(-1.0 / (1.0 - q * q)) * rn[i] * rw[i];
    for (int k = 0; k < nt; ++k) {
      const double t = 2 * std::numbers::pi * k / nt;
      const double dx = 1.0 - rn[i] * std::cos(t), dy = -rn[i] * std::sin(t);
      num += bump * -0.5 * std::log(dx * dx + dy * dy);
      den += bump;
    }
  }
  const double oracle = num / den;
  const double got = eval2(W, 0, 0, 1, 0);
  EXPECT_NEAR(got, oracle, 1e-8);
  EXPECT_NEAR(got, 0.0, 1e-3);  // base value -log 1
  EXPECT_TRUE(std::isfinite(eval2(W, 0.2, 0.2, 0.2, 0.2)));
}

TEST(Regularize, RejectsUnsupportedCombination) {
  const PairKernel ti = PairKernel::translation_invariant(
      [](std::span<const double> u) { return std::log(std::hypot(u[0], u[1])); }, "log_ti", 2);
  EXPECT_THROW(regularize(ti, RegularizationScheme::shift, 0.1), LabError);
  EXPECT_THROW(regularize(PairKernel::radial(profiles::log_repulsive()), RegularizationScheme::mollify, 0.1, 3),
               LabError);
}

TEST(Regularize, ShiftMonotoneInDelta) {
  const PairKernel base = PairKernel::radial(profiles::log_repulsive());
  const PairKernel a = regularize(base, RegularizationScheme::shift, 0.05);
  const PairKernel b = regularize(base, RegularizationScheme::shift, 0.2);
  for (double r : log_grid(1e-4, 4.0, 50)) EXPECT_GE(eval2(a, 0, 0, r, 0), eval2(b, 0, 0, r, 0));
}

TEST(Kernel, SymmetricOnRandomPairs) {
  const std::vector<PairKernel> kernels{
      PairKernel::radial(profiles::log_repulsive()),
      PairKernel::radial(profiles::power(1.3)),
      PairKernel::radial(profiles::inverse_power(1.0)),
      PairKernel::radial(profiles::exponential(1.0, 2.0)),
      regularize(PairKernel::radial(profiles::log_repulsive()), RegularizationScheme::shift, 0.1),
      regularize(PairKernel::radial(profiles::log_repulsive()), RegularizationScheme::cap, 0.1),
      regularize(PairKernel::radial(profiles::log_repulsive()), RegularizationScheme::mollify, 0.1),
  };
  Rng rng = make_rng(99, 0);
  std::normal_distribution<double> g;
  for (const auto& W : kernels) {
    for (int k = 0; k < 1000; ++k) {
      const double x0 = g(rng), x1 = g(rng), y0 = g(rng), y1 = g(rng);
      ASSERT_EQ(eval2(W, x0, x1, y0, y1), eval2(W, y0, y1, x0, x1)) << W.label();
    }
  }
}

// ---- homogeneous assumptions ----

TEST(Homogeneous, NegLogPasses) { EXPECT_TRUE(check_homogeneous_assumptions(profiles::log_repulsive(), kGrid).passed()); }
TEST(Homogeneous, NegPowerPasses) { EXPECT_TRUE(check_homogeneous_assumptions(profiles::power(1.0), kGrid).passed()); }

TEST(Homogeneous, SquareFailsWithInteriorWitness) {
  const ValidationReport r = check_homogeneous_assumptions(profiles::monomial(1.0, 2.0), kGrid);
  ASSERT_FALSE(r.passed());
  const CheckEntry* f = r.first_failure();
  ASSERT_TRUE(f->witness.has_value());
  ASSERT_TRUE(f->witness->index.has_value());
  EXPECT_GT(*f->witness->index, 0u);
  EXPECT_LT(*f->witness->index, kGrid.size() - 1);
}

TEST(Homogeneous, RejectsShortGrid) {
  EXPECT_THROW(check_homogeneous_assumptions(profiles::log_repulsive(), log_grid(0.1, 1.0, 12)), LabError);
}

TEST(Homogeneous, NaNIsDataError) {
  const RadialProfile bad = profiles::custom([](double r) { return r < 1e-3 ? kNaN : -std::log(r); }, kNaN, "bad");
  try {
    check_homogeneous_assumptions(bad, kGrid);
    FAIL();
  } catch (const LabError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::data);
  }
}

TEST(Homogeneous, AgreesWithPshOnNegation) {
  const std::vector<RadialProfile> ps{profiles::log_repulsive(), profiles::power(0.5), profiles::monomial(1.0, 2.0),
                                      profiles::exponential(1.0, 1.0), profiles::inverse_power(0.5)};
  for (const auto& w : ps) {
    const bool concave = check_homogeneous_assumptions(w, kGrid).entries().front().passed;
    EXPECT_EQ(concave, check_psh_radial(w.negated(), kGrid).passed()) << w.label();
  }
}

// ---- complete monotonicity ----

TEST(CompleteMonotonicity, GaussianPasses) {
  EXPECT_TRUE(check_complete_monotonicity(profiles::exponential(2.0, 1.0), 4, log_grid(1e-3, 3.0, 40)).passed());
}

TEST(CompleteMonotonicity, InverseQuadraticPasses) {
  const RadialProfile w = profiles::custom([](double r) { return 1.0 / (1.0 + r * r); }, 1.0, "1/(1+r^2)");
  EXPECT_TRUE(check_complete_monotonicity(w, 4, log_grid(1e-3, 3.0, 40)).passed());
}

TEST(CompleteMonotonicity, QuarticExponentialFailsAtSecondOrderNearZero) {
  const ValidationReport r = check_complete_monotonicity(profiles::exponential(4.0, 1.0), 4, log_grid(1e-3, 3.0, 40));
  ASSERT_FALSE(r.passed());
  bool order2 = false;
  for (const auto& e : r.entries()) {
    if (!e.passed && e.name.find('2') != std::string::npos) {
      order2 = true;
      ASSERT_FALSE(e.witness->point.empty());
      EXPECT_LT(e.witness->point[0], 0.7);
    }
  }
  EXPECT_TRUE(order2);
}

TEST(CompleteMonotonicity, InfiniteValueIsDomainError) {
  try {
    const RadialProfile w = profiles::custom([](double r) { return r < 0.3 ? kInf : 1.0 / r; }, kInf, "blowup");
    check_complete_monotonicity(w, 4, {0.01, 0.1, 0.2, 0.3, 0.4, 0.5});
    FAIL();
  } catch (const LabError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::domain);
  }
}

// ---- weak positive definiteness ----

TEST(WeakPD, QuadraticFormOnThreeCollinearPoints) {
  const PairKernel W = PairKernel::radial(profiles::power(2.0));
  Eigen::MatrixXd p(3, 2);
  p << 0, 0, 1, 0, 2, 0;
  const Eigen::MatrixXd G = gram_matrix(W, p);
  const Eigen::Vector3d a(1, -2, 1);
  EXPECT_NEAR(a.dot(G * a), 0.0, 1e-14);
  EXPECT_TRUE(check_weak_positive_definiteness(W, p).passed());
}

TEST(WeakPD, SquareKernelFormIsTwiceSquaredMoment) {
  const PairKernel W = PairKernel::radial(profiles::power(2.0));
  Rng rng = make_rng(5, 0);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd p = disc_points(12, 100 + trial);
    Eigen::VectorXd a(12);
    for (int i = 0; i < 12; ++i) a(i) = g(rng);
    a.array() -= a.mean();
    const Eigen::RowVector2d m = a.transpose() * p;
    EXPECT_NEAR(a.dot(gram_matrix(W, p) * a), 2.0 * m.squaredNorm(), 1e-12 * (1 + m.squaredNorm()));
  }
}

TEST(WeakPD, PowerLawsInSchoenbergRangePass) {
  const Eigen::MatrixXd p = disc_points(64, 17);
  for (double a : {0.5, 1.0, 2.0}) {
    const PairKernel W = PairKernel::radial(profiles::power(a));
    EXPECT_TRUE(check_weak_positive_definiteness(W, p, 16).passed()) << a;
    const Eigen::MatrixXd G = gram_matrix(W, p);
    EXPECT_GE(helmert_min_eigenvalue(G), -1e-8 * G.norm()) << a;
  }
}

TEST(WeakPD, CubicFailsWithNegativeEigenvalue) {
  const Eigen::MatrixXd p = disc_points(64, 17);
  const PairKernel W = PairKernel::radial(profiles::power(3.0));
  const ValidationReport r = check_weak_positive_definiteness(W, p);
  ASSERT_FALSE(r.passed());
  EXPECT_LT(helmert_min_eigenvalue(gram_matrix(W, p)), 0.0);
  const ZeroSumSpectrum s = zero_sum_spectrum(gram_matrix(W, p));
  EXPECT_NEAR(s.min_eigenvalue, helmert_min_eigenvalue(gram_matrix(W, p)), 1e-9 * s.gram_norm);
  EXPECT_NEAR(s.witness.sum(), 0.0, 1e-10);
}

TEST(WeakPD, VerdictInvariantUnderConstantShift) {
  const Eigen::MatrixXd p = disc_points(40, 3);
  for (double a : {1.0, 3.0}) {
    const RadialProfile w = profiles::power(a);
    const RadialProfile shifted = profiles::custom([w](double r) { return w(r) + 1e3; }, w(0.0) + 1e3, "shifted");
    EXPECT_EQ(check_weak_positive_definiteness(PairKernel::radial(w), p).passed(),
              check_weak_positive_definiteness(PairKernel::radial(shifted), p).passed());
  }
}

TEST(WeakPD, SingularDiagonalIsPreconditionError) {
  try {
    check_weak_positive_definiteness(PairKernel::radial(profiles::log_repulsive()), disc_points(8, 1));
    FAIL();
  } catch (const LabError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::precondition);
    EXPECT_NE(std::string(e.what()).find("regulariz"), std::string::npos);
  }
}

TEST(WeakPD, BornMayerOnSmallBall) {
  Eigen::MatrixXd p = disc_points(64, 8) * 0.5;
  EXPECT_TRUE(check_weak_positive_definiteness(PairKernel::radial(profiles::exponential(1.0, 1.0)), p, 8).passed());
}

// ---- psh ----

TEST(PshRadial, LogPasses) {
  EXPECT_TRUE(check_psh_radial(profiles::log_repulsive().negated(), kGrid).passed());
}
TEST(PshRadial, SquarePasses) { EXPECT_TRUE(check_psh_radial(profiles::monomial(1.0, 2.0), kGrid).passed()); }
TEST(PshRadial, NegLogBoundaryCasePassesWithZeroMargin) {
  const ValidationReport r = check_psh_radial(profiles::log_repulsive(), kGrid);
  EXPECT_TRUE(r.passed());
  EXPECT_NEAR(r.entries().front().margin, 0.0, 1e-12);
}
TEST(PshRadial, StrictlyConcaveFails) { EXPECT_FALSE(check_psh_radial(profiles::power(1.0), kGrid).passed()); }

TEST(PshHessian, Examples) {
  const std::vector<ComplexPoint> pts{{{0.3, 0.1}}, {{-1.0, 0.5}}, {{1.0, 0.0}}};
  auto sq = [](const ComplexPoint& z) { return std::norm(z[0]); };
  auto logsq = [](const ComplexPoint& z) { return std::log(std::norm(z[0])); };
  auto neg = [](const ComplexPoint& z) { return -std::norm(z[0]); };
  EXPECT_TRUE(check_psh_hessian(sq, pts).passed());
  EXPECT_NEAR(complex_hessian(sq, pts[0], 1e-4)(0, 0).real(), 1.0, 1e-6);
  const ValidationReport lr = check_psh_hessian(logsq, {{{1.0, 0.0}}});
  EXPECT_TRUE(lr.passed());
  EXPECT_NEAR(complex_hessian(logsq, {{1.0, 0.0}}, 1e-4)(0, 0).real(), 0.0, 1e-6);
  const ValidationReport nr = check_psh_hessian(neg, pts);
  EXPECT_EQ(nr.failure_count(), pts.size());
}

TEST(S1Invariance, Examples) {
  const std::vector<double> angles{0.3, 1.0, std::numbers::pi / 2, std::numbers::pi};
  auto f1 = [](const ComplexPoint& z) { return std::norm(z[0]) + std::norm(z[1]); };
  EXPECT_TRUE(check_s1_invariance(f1, {1, 2}, {{{1, 2}, {0.5, -1}}, {{0.1, 0}, {3, 1}}}, angles).passed());
  // Both monomials have total degree 3, so the modulus is invariant under weights (1, 1).
  auto f2 = [](const ComplexPoint& z) { return std::log(std::abs(z[0] * z[0] * z[1] + z[1] * z[1] * z[1])); };
  EXPECT_TRUE(check_s1_invariance(f2, {1, 1}, {{{1, 0}, {1, 0}}}, {std::numbers::pi / 2}).passed());
  // The same function with weights (1, 2) is not.
  EXPECT_FALSE(check_s1_invariance(f2, {1, 2}, {{{1, 0}, {1, 0}}}, {std::numbers::pi / 2}).passed());
  auto f3 = [](const ComplexPoint& z) { return z[0].real(); };
  const ValidationReport r3 = check_s1_invariance(f3, {1}, {{{1, 0}}}, {std::numbers::pi});
  ASSERT_FALSE(r3.passed());
  EXPECT_TRUE(r3.first_failure()->witness.has_value());
}

TEST(S1Invariance, RejectsNonPositiveWeights) {
  auto f = [](const ComplexPoint& z) { return std::norm(z[0]); };
  EXPECT_THROW(check_s1_invariance(f, {0.0}, {{{1, 0}}}, {0.1}), LabError);
}

// ---- disc Green function ----

namespace {
std::vector<std::pair<std::complex<double>, std::complex<double>>> random_pairs(std::size_t n, std::uint64_t seed) {
  Rng rng = make_rng(seed, 0);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::pair<std::complex<double>, std::complex<double>>> out;
  auto draw = [&] {
    for (;;) {
      const std::complex<double> z(u(rng), u(rng));
      if (std::abs(z) < 0.999) return z;
    }
  };
  while (out.size() < n) {
    auto z = draw(), w = draw();
    if (std::abs(z - w) > 1e-6) out.emplace_back(z, w);
  }
  return out;
}
}  // namespace

TEST(DiscGreen, ThresholdAtOneHalf) {
  const auto pairs = random_pairs(1000, 42);
  EXPECT_TRUE(disc_green_psh_check(0.5, pairs).passed());
  EXPECT_TRUE(disc_green_psh_check(1.0, pairs).passed());
  const ValidationReport r = disc_green_psh_check(0.4, pairs);
  ASSERT_FALSE(r.passed());
  const auto& p = r.first_failure()->witness->point;
  ASSERT_EQ(p.size(), 4u);
  EXPECT_LT(std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3]), 0.05);
  // the origin itself: det = 4 lambda^2 - 1
  EXPECT_NEAR(disc_green_hessian(0.4, 0.0, 0.0).det(), 4 * 0.16 - 1, 1e-15);
}

TEST(DiscGreen, ClosedFormMatchesFiniteDifferenceHessian) {
  const double lambda = 0.7;
  auto f = [lambda](const ComplexPoint& v) {
    const auto z = v[0], w = v[1];
    return std::log(std::norm(z - w)) - std::log(std::norm(1.0 - z * std::conj(w))) -
           2 * lambda * (std::log(1 - std::norm(z)) + std::log(1 - std::norm(w)));
  };
  for (const auto& [z, w] : random_pairs(20, 7)) {
    if (std::abs(z - w) < 0.1 || std::abs(z) > 0.9 || std::abs(w) > 0.9) continue;
    const DiscHessian h = disc_green_hessian(lambda, z, w);
    const Eigen::MatrixXcd fd = complex_hessian(f, {z, w}, 1e-4);
    EXPECT_NEAR(h.h11, fd(0, 0).real(), 1e-5);
    EXPECT_NEAR(h.h22, fd(1, 1).real(), 1e-5);
    EXPECT_NEAR(std::abs(h.h12 - fd(0, 1)), 0.0, 1e-5);
  }
}

TEST(DiscGreen, DiagonalPairIsPreconditionError) {
  EXPECT_THROW(disc_green_psh_check(0.5, {{{0.1, 0.1}, {0.1, 0.1}}}), LabError);
}

// ---- dot_w ----

TEST(DotW, Examples) {
  EXPECT_NEAR(dot_w(profiles::log_repulsive()), -1.0, 1e-6);
  EXPECT_EQ(dot_w(profiles::power(1.0)), 0.0);
  EXPECT_EQ(dot_w(profiles::loglog()), 0.0);
  EXPECT_NEAR(dot_w(profiles::log_scaled(3.0)), -3.0, 1e-6);
}

// ---- priors ----

TEST(Prior, TotalMassIsOne) {
  EXPECT_NEAR(prior_total_mass(PriorMeasure::gaussian(2, 1.3)), 1.0, 1e-6);
  EXPECT_NEAR(prior_total_mass(PriorMeasure::uniform_ball(3, 2.0)), 1.0, 1e-6);
  const PriorMeasure rd = PriorMeasure::radial_density(Domain::ball(2, 1.0), profiles::monomial(1.0, 2.0));
  EXPECT_NEAR(prior_total_mass(rd), 1.0, 1e-6);
}

TEST(Prior, SamplerMomentsMatchQuadrature) {
  // <r^2> under e^{-r^2} on the unit disc: 1/(e - 1) * (e - 2).
  const PriorMeasure rd = PriorMeasure::radial_density(Domain::ball(2, 1.0), profiles::monomial(1.0, 2.0));
  const double exact = (std::exp(1.0) - 2.0) / (std::exp(1.0) - 1.0);
  Rng rng = make_rng(3, 0);
  const int M = 100000;
  double s = 0, s2 = 0;
  double x[2];
  for (int i = 0; i < M; ++i) {
    rd.sample(rng, x);
    const double v = x[0] * x[0] + x[1] * x[1];
    s += v;
    s2 += v * v;
  }
  const double mean = s / M, se = std::sqrt((s2 / M - mean * mean) / M);
  EXPECT_NEAR(mean, exact, 4 * se);
}

// ---- model JSON ----

TEST(ModelJson, ParsesAndPointsAtBadField) {
  const auto j = nlohmann::json::parse(R"({"domain":{"type":"ball","d":2,"R":1},
      "kernel":{"family":"log","regularization":{"scheme":"shift","delta":0.1}},
      "prior":{"family":"uniform"},"N":4,"seed":9})");
  const ModelSpec m = model_from_json(j);
  EXPECT_EQ(m.particles(), 4);
  EXPECT_TRUE(m.W.finite_on_diagonal());
  auto bad = j;
  bad["domain"]["R"] = -1;
  try {
    model_from_json(bad);
    FAIL();
  } catch (const LabError& e) {
    EXPECT_NE(std::string(e.what()).find("/domain/R"), std::string::npos);
  }
  auto bad2 = j;
  bad2["prior"]["family"] = "gaussian";
  EXPECT_THROW(model_from_json(bad2), LabError);
}
