#include "ensemble_lab/model/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ensemble_lab/curve.hpp"
#include "ensemble_lab/error.hpp"
#include "ensemble_lab/random.hpp"

namespace ensemble_lab {

std::vector<double> log_grid(double r_min, double r_max, std::size_t n) {
  require(r_min > 0.0 && r_max > r_min && n >= 2, ErrorKind::usage, "log_grid: bad arguments");
  std::vector<double> g(n);
  const double a = std::log(r_min);
  const double b = std::log(r_max);
  for (std::size_t i = 0; i < n; ++i) g[i] = std::exp(a + (b - a) * i / (n - 1));
  g.front() = r_min;
  g.back() = r_max;
  return g;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void check_log_grid(const std::vector<double>& grid) {
  require(grid.size() >= 8, ErrorKind::precondition, "grid needs at least 8 radii");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    require(grid[i] > 0.0, ErrorKind::precondition, "grid radii must be positive");
    if (i > 0) require(grid[i] > grid[i - 1], ErrorKind::precondition, "grid must be increasing");
  }
  require(std::log10(grid.back() / grid.front()) >= 4.0 - 1e-12, ErrorKind::precondition,
          "grid must span at least 4 decades");
}

struct LogShape {
  std::vector<double> t;
  std::vector<double> v;
};

LogShape sample_log_shape(const RadialProfile& w, const std::vector<double>& grid) {
  LogShape s;
  for (double r : grid) {
    const double v = w(r);
    if (std::isnan(v)) fail(ErrorKind::data, "profile '" + w.label() + "' is NaN at r=" + fmt(r));
    if (std::isinf(v)) fail(ErrorKind::domain, "profile '" + w.label() + "' is infinite at r=" + fmt(r));
    s.t.push_back(std::log(r));
    s.v.push_back(v);
  }
  return s;
}

// Signed curvature measure at interior index i: change of secant slope,
// together with the tolerance for that triple.
struct Triple {
  double change;
  double tol;
};

Triple curvature(const LogShape& s, std::size_t i, double rel_tol) {
  const double h1 = s.t[i] - s.t[i - 1];
  const double h2 = s.t[i + 1] - s.t[i];
  const double s1 = (s.v[i] - s.v[i - 1]) / h1;
  const double s2 = (s.v[i + 1] - s.v[i]) / h2;
  const double scale = std::max({std::abs(s.v[i - 1]), std::abs(s.v[i]), std::abs(s.v[i + 1]), 1.0});
  return {s2 - s1, rel_tol * scale / std::min(h1, h2)};
}

ValidationReport log_shape_report(const RadialProfile& w, const std::vector<double>& grid,
                                  double rel_tol, bool concave, const std::string& subject) {
  check_log_grid(grid);
  const LogShape s = sample_log_shape(w, grid);
  ValidationReport report(subject + ":" + w.label());
  double worst_margin = std::numeric_limits<double>::infinity();
  std::size_t worst = 0;
  for (std::size_t i = 1; i + 1 < s.t.size(); ++i) {
    const Triple c = curvature(s, i, rel_tol);
    const double margin = concave ? c.tol - c.change : c.change + c.tol;
    if (margin < worst_margin) {
      worst_margin = margin;
      worst = i;
    }
  }
  const std::string name = concave ? "concave_in_log_r" : "convex_in_log_r";
  // Report the margin net of tolerance so exactly affine profiles show 0.
  const Triple wc = curvature(s, worst, rel_tol);
  const double raw = concave ? -wc.change : wc.change;
  const double shown = std::abs(raw) <= wc.tol ? 0.0 : raw;
  if (worst_margin >= 0.0) {
    report.add_pass(name, shown, "most constrained triple centered at r=" + fmt(grid[worst]));
  } else {
    Witness wit{{grid[worst - 1], grid[worst], grid[worst + 1]}, worst,
                "second difference of w(e^t) has the wrong sign"};
    report.add_fail(name, raw, wit);
  }
  return report;
}

}  // namespace

ValidationReport check_homogeneous_assumptions(const RadialProfile& w,
                                               const std::vector<double>& grid, double rel_tol) {
  ValidationReport report = log_shape_report(w, grid, rel_tol, true, "homogeneous");
  // Bounded below as t -> -inf: for a concave function of t this holds iff the
  // left-most slope is <= 0.
  const double t0 = std::log(grid[0]);
  const double t1 = std::log(grid[1]);
  const double slope = (w(grid[1]) - w(grid[0])) / (t1 - t0);
  const double scale = std::max({std::abs(w(grid[0])), std::abs(w(grid[1])), 1.0});
  const double tol = rel_tol * scale / (t1 - t0);
  if (slope <= tol) {
    report.add_pass("bounded_below_at_zero", -slope);
  } else {
    report.add_fail("bounded_below_at_zero", -slope,
                    Witness{{grid[0], grid[1]}, std::size_t{0},
                            "w(e^t) increases in t at the small-r end (tends to -inf)"});
  }
  return report;
}

ValidationReport check_psh_radial(const RadialProfile& w, const std::vector<double>& grid,
                                  double rel_tol) {
  return log_shape_report(w, grid, rel_tol, false, "psh_radial");
}

ValidationReport check_complete_monotonicity(const RadialProfile& w, int m_max,
                                             const std::vector<double>& grid, double tol) {
  require(m_max >= 3, ErrorKind::precondition, "complete monotonicity: m_max must be >= 3");
  require(grid.size() > static_cast<std::size_t>(m_max), ErrorKind::precondition,
          "complete monotonicity: grid needs more than m_max points");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    require(grid[i] > 0.0, ErrorKind::precondition, "complete monotonicity: grid must be positive");
    if (i > 0) require(grid[i] > grid[i - 1], ErrorKind::precondition, "grid must be increasing");
  }
  std::vector<double> f(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    f[i] = w(std::sqrt(grid[i]));
    if (std::isnan(f[i])) fail(ErrorKind::data, "profile NaN at r=" + fmt(std::sqrt(grid[i])));
    if (std::isinf(f[i])) {
      fail(ErrorKind::domain, "profile is +inf at r=" + fmt(std::sqrt(grid[i])) +
                                   "; complete monotonicity needs finite values on the grid");
    }
  }
  ValidationReport report("complete_monotonicity:" + w.label());
  // Divided differences f[x_i..x_{i+m}] carry the sign of f^(m).
  std::vector<double> dd = f;
  for (int m = 0; m <= m_max; ++m) {
    if (m > 0) {
      for (std::size_t i = 0; i + m < grid.size(); ++i) {
        dd[i] = (dd[i + 1] - dd[i]) / (grid[i + m] - grid[i]);
      }
      dd.resize(grid.size() - m);
    }
    double scale = 0.0;
    for (double v : dd) scale = std::max(scale, std::abs(v));
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    double worst = std::numeric_limits<double>::infinity();
    std::size_t at = 0;
    for (std::size_t i = 0; i < dd.size(); ++i) {
      const double v = sign * dd[i];
      if (v < worst) {
        worst = v;
        at = i;
      }
    }
    const std::string name = "order_" + std::to_string(m);
    if (worst >= -tol * std::max(scale, 1.0)) {
      report.add_pass(name, worst);
    } else {
      report.add_fail(name, worst,
                      Witness{{grid[at], grid[std::min(at + m, grid.size() - 1)]}, at,
                              "(-1)^m Delta^m f < 0 starting at argument " + fmt(grid[at])});
    }
  }
  return report;
}

Eigen::MatrixXd gram_matrix(const PairKernel& W, const Eigen::MatrixXd& points) {
  const Eigen::Index n = points.rows();
  const std::size_t d = static_cast<std::size_t>(points.cols());
  Eigen::MatrixXd G(n, n);
  std::vector<double> xi(d), xj(d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < d; ++c) xi[c] = points(i, c);
    for (Eigen::Index j = i; j < n; ++j) {
      for (std::size_t c = 0; c < d; ++c) xj[c] = points(j, c);
      G(i, j) = W(xi, xj);
      G(j, i) = G(i, j);
    }
  }
  return G;
}

ZeroSumSpectrum zero_sum_spectrum(const Eigen::MatrixXd& G) {
  const Eigen::Index n = G.rows();
  require(n >= 2 && G.cols() == n, ErrorKind::usage, "zero_sum_spectrum: need a square matrix, n >= 2");
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n);
  A.col(0).setOnes();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
  const Eigen::MatrixXd Q = qr.householderQ();
  const Eigen::MatrixXd P = Q.rightCols(n - 1);
  const Eigen::MatrixXd reduced = P.transpose() * G * P;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (reduced + reduced.transpose()));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> full(G, Eigen::EigenvaluesOnly);
  ZeroSumSpectrum out;
  out.min_eigenvalue = es.eigenvalues()(0);
  out.gram_norm = full.eigenvalues().cwiseAbs().maxCoeff();
  out.witness = P * es.eigenvectors().col(0);
  return out;
}

ValidationReport check_weak_positive_definiteness(const PairKernel& W, const Eigen::MatrixXd& points,
                                                  std::size_t trials, double tol,
                                                  std::uint64_t seed) {
  require(points.rows() >= 2, ErrorKind::precondition, "weak PD: need at least 2 points");
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < points.rows(); ++j) {
      require((points.row(i) - points.row(j)).squaredNorm() > 0.0, ErrorKind::precondition,
              "weak PD: points must be pairwise distinct");
    }
  }
  const Eigen::MatrixXd G = gram_matrix(W, points);
  if (!G.diagonal().allFinite()) {
    fail(ErrorKind::precondition,
         "weak PD: kernel '" + W.label() +
             "' is infinite on the diagonal; apply regularize(shift|cap|mollify) first");
  }
  require(G.allFinite(), ErrorKind::data, "weak PD: Gram matrix has non-finite off-diagonal entries");
  const ZeroSumSpectrum spec = zero_sum_spectrum(G);
  ValidationReport report("weak_positive_definiteness:" + W.label());
  const double bound = -tol * spec.gram_norm;
  const std::string detail = "min zero-sum eigenvalue " + fmt(spec.min_eigenvalue) + ", |G| " +
                             fmt(spec.gram_norm);
  if (spec.min_eigenvalue >= bound) {
    report.add_pass("zero_sum_min_eigenvalue", spec.min_eigenvalue - bound, detail);
  } else {
    Eigen::Index at = 0;
    spec.witness.cwiseAbs().maxCoeff(&at);
    std::vector<double> coeffs(spec.witness.data(), spec.witness.data() + spec.witness.size());
    report.add_fail("zero_sum_min_eigenvalue", spec.min_eigenvalue - bound,
                    Witness{coeffs, static_cast<std::size_t>(at),
                            "zero-sum coefficient vector with a'Ga < 0 (largest weight at index)"},
                    detail);
  }
  if (trials > 0) {
    Rng rng = make_rng(seed, 0);
    std::normal_distribution<double> normal;
    double worst = std::numeric_limits<double>::infinity();
    Eigen::VectorXd worst_a;
    for (std::size_t t = 0; t < trials; ++t) {
      Eigen::VectorXd a(points.rows());
      for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = normal(rng);
      a.array() -= a.mean();
      const double q = a.dot(G * a) / a.squaredNorm();
      if (q < worst) {
        worst = q;
        worst_a = a;
      }
    }
    if (worst >= bound) {
      report.add_pass("random_zero_sum_vectors", worst - bound);
    } else {
      std::vector<double> coeffs(worst_a.data(), worst_a.data() + worst_a.size());
      report.add_fail("random_zero_sum_vectors", worst - bound,
                      Witness{coeffs, std::nullopt, "random zero-sum vector with a'Ga < 0"});
    }
  }
  return report;
}

Eigen::MatrixXcd complex_hessian(const ComplexFunction& f, const ComplexPoint& z, double h) {
  const std::size_t n = z.size();
  const std::size_t m = 2 * n;
  auto eval = [&](const std::vector<double>& shift) {
    ComplexPoint p = z;
    for (std::size_t k = 0; k < n; ++k) p[k] += std::complex<double>(shift[2 * k], shift[2 * k + 1]);
    const double v = f(p);
    if (std::isnan(v)) fail(ErrorKind::data, "psh Hessian: function returned NaN");
    return v;
  };
  std::vector<double> zero(m, 0.0);
  const double f0 = eval(zero);
  Eigen::MatrixXd R(m, m);
  for (std::size_t a = 0; a < m; ++a) {
    std::vector<double> s = zero;
    s[a] = h;
    const double fp = eval(s);
    s[a] = -h;
    const double fm = eval(s);
    R(a, a) = (fp - 2.0 * f0 + fm) / (h * h);
    for (std::size_t b = a + 1; b < m; ++b) {
      std::vector<double> q = zero;
      q[a] = h;
      q[b] = h;
      const double fpp = eval(q);
      q[b] = -h;
      const double fpm = eval(q);
      q[a] = -h;
      const double fmm = eval(q);
      q[b] = h;
      const double fmp = eval(q);
      R(a, b) = R(b, a) = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
    }
  }
  // d^2/dz_j dzbar_k = (f_xjxk + f_yjyk + i (f_xjyk - f_yjxk)) / 4
  Eigen::MatrixXcd H(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      const double re = R(2 * j, 2 * k) + R(2 * j + 1, 2 * k + 1);
      const double im = R(2 * j, 2 * k + 1) - R(2 * j + 1, 2 * k);
      H(j, k) = 0.25 * std::complex<double>(re, im);
    }
  }
  return H;
}

namespace {

std::vector<double> flatten(const ComplexPoint& z) {
  std::vector<double> out;
  for (const auto& c : z) {
    out.push_back(c.real());
    out.push_back(c.imag());
  }
  return out;
}

}  // namespace

ValidationReport check_psh_hessian(const ComplexFunction& f, const std::vector<ComplexPoint>& points,
                                   double h, double tol) {
  require(!points.empty(), ErrorKind::precondition, "psh Hessian: no points");
  ValidationReport report("psh_hessian");
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Eigen::MatrixXcd H = complex_hessian(f, points[i], h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (H + H.adjoint()), Eigen::EigenvaluesOnly);
    const double lam = es.eigenvalues()(0);
    worst = std::min(worst, lam);
    if (lam < -tol) {
      report.add_fail("min_hessian_eigenvalue", lam,
                      Witness{flatten(points[i]), i, "complex Hessian has a negative eigenvalue"});
    }
  }
  if (report.passed()) report.add_pass("min_hessian_eigenvalue", std::abs(worst) <= tol ? 0.0 : worst);
  return report;
}

ValidationReport check_s1_invariance(const ComplexFunction& f, const std::vector<double>& a,
                                     const std::vector<ComplexPoint>& points,
                                     const std::vector<double>& angles, double tol) {
  for (double ak : a) require(ak > 0.0, ErrorKind::configuration, "weight vector entries must be positive");
  ValidationReport report("s1_invariance");
  double worst = 0.0;
  std::size_t at_point = 0;
  double at_angle = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    require(points[i].size() == a.size(), ErrorKind::usage, "s1 invariance: weight length differs from point dimension");
    const double base = f(points[i]);
    for (double theta : angles) {
      ComplexPoint p = points[i];
      for (std::size_t k = 0; k < p.size(); ++k) p[k] *= std::polar(1.0, a[k] * theta);
      const double v = f(p);
      if (std::isnan(v) || std::isnan(base)) fail(ErrorKind::data, "s1 invariance: NaN evaluation");
      const double diff = std::abs(v - base);
      if (diff > worst) {
        worst = diff;
        at_point = i;
        at_angle = theta;
      }
    }
  }
  if (worst <= tol) {
    report.add_pass("circle_action_invariance", tol - worst);
  } else {
    std::vector<double> w = flatten(points[at_point]);
    w.push_back(at_angle);
    report.add_fail("circle_action_invariance", tol - worst,
                    Witness{w, at_point, "|f(e^{i a theta} z) - f(z)| exceeds tol (last entry is theta)"});
  }
  return report;
}

DiscHessian disc_green_hessian(double lambda, std::complex<double> z, std::complex<double> w) {
  const double az = 1.0 - std::norm(z);
  const double aw = 1.0 - std::norm(w);
  const std::complex<double> c = 1.0 - z * std::conj(w);
  return {2.0 * lambda / (az * az), 2.0 * lambda / (aw * aw), 1.0 / (c * c)};
}

ValidationReport disc_green_psh_check(
    double lambda, const std::vector<std::pair<std::complex<double>, std::complex<double>>>& pairs,
    double tol) {
  require(!pairs.empty(), ErrorKind::precondition, "disc check: no pairs");
  ValidationReport report("disc_green_psh(lambda=" + fmt(lambda) + ")");
  double worst_margin = std::numeric_limits<double>::infinity();
  std::optional<std::size_t> witness;
  double witness_norm = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto [z, w] = pairs[i];
    require(std::abs(z) < 1.0 && std::abs(w) < 1.0, ErrorKind::precondition,
            "disc check: points must lie in the open unit disc");
    require(z != w, ErrorKind::precondition, "disc check: pair lies on the diagonal");
    const DiscHessian H = disc_green_hessian(lambda, z, w);
    const double scale = H.h11 * H.h22;
    const double det_margin = H.det() + tol * scale;
    const double margin = std::min(H.trace(), det_margin) / std::max(scale, 1e-300);
    worst_margin = std::min(worst_margin, margin);
    if (H.trace() < 0.0 || det_margin < 0.0) {
      const double nrm = std::sqrt(std::norm(z) + std::norm(w));
      if (nrm < witness_norm) {
        witness_norm = nrm;
        witness = i;
      }
    }
  }
  if (!witness) {
    report.add_pass("hessian_psd", worst_margin, "normalized min(trace, det) margin");
  } else {
    // Contract the nearest violating pair towards (0,0) while it still violates.
    auto [z, w] = pairs[*witness];
    int halvings = 0;
    for (; halvings < 30; ++halvings) {
      const DiscHessian H = disc_green_hessian(lambda, 0.5 * z, 0.5 * w);
      if (H.trace() >= 0.0 && H.det() + tol * H.h11 * H.h22 >= 0.0) break;
      z *= 0.5;
      w *= 0.5;
    }
    report.add_fail("hessian_psd", worst_margin,
                    Witness{{z.real(), z.imag(), w.real(), w.imag()}, *witness,
                            "negative determinant; violating sample nearest (0,0), scaled by 2^-" +
                                std::to_string(halvings) + " along its ray"});
  }
  return report;
}

double dot_w(const RadialProfile& w) {
  // Derivative of t -> w(e^t) by a small central difference, at several t.
  auto slope = [&](double t) {
    const double eta = 1e-3;
    const double a = w(std::exp(t + eta));
    const double b = w(std::exp(t - eta));
    if (!std::isfinite(a) || !std::isfinite(b)) {
      fail(ErrorKind::data, "dot_w: profile not finite near r=e^" + fmt(t));
    }
    return (a - b) / (2.0 * eta);
  };
  std::vector<double> ts;
  for (int k = 15; k <= 60; k += 5) ts.push_back(-static_cast<double>(k));
  std::vector<double> s;
  for (double t : ts) s.push_back(slope(t));

  // The slope sequence must settle monotonically as t decreases.
  int direction = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    const double step = s[i] - s[i - 1];
    const double noise = 1e-9 * std::max(1.0, std::abs(s[i]));
    if (std::abs(step) <= noise) continue;
    const int sgn = step > 0 ? 1 : -1;
    if (direction == 0) direction = sgn;
    if (sgn != direction) fail(ErrorKind::data, "dot_w: no limit detected (slopes oscillate)");
  }

  // Unbounded growth, e.g. w(e^t) ~ t^2: slopes scale with |t|.
  const double s30 = slope(-30.0);
  const double s60 = s.back();
  if (s60 < -1.0 && s60 < 1.8 * s30) return -kInf;
  if (s60 > 1.0 && s60 > 1.8 * s30) return kInf;

  // Quadratic extrapolation in h = 1/|t| to h = 0 through t = -30, -45, -60;
  // removes 1/t and 1/t^2 corrections (e.g. log log(1/r)).
  const double h1 = 1.0 / 30.0, h2 = 1.0 / 45.0, h3 = 1.0 / 60.0;
  const double y1 = s30, y2 = slope(-45.0), y3 = s60;
  const double l1 = (h2 * h3) / ((h1 - h2) * (h1 - h3));
  const double l2 = (h1 * h3) / ((h2 - h1) * (h2 - h3));
  const double l3 = (h1 * h2) / ((h3 - h1) * (h3 - h2));
  const double quad = l1 * y1 + l2 * y2 + l3 * y3;
  const double lin = (h2 * y3 - h3 * y2) / (h2 - h3);
  if (std::abs(quad - lin) > 1e-3 * std::max(1.0, std::abs(quad))) {
    fail(ErrorKind::data, "dot_w: no limit detected (extrapolations disagree: " + fmt(lin) +
                              " vs " + fmt(quad) + ")");
  }
  if (std::abs(quad) < 1e-6) return 0.0;
  // Extraction is accurate to ~1e-10; snap so exact slopes come out exact.
  return std::round(quad * 1e9) / 1e9;
}

}  // namespace ensemble_lab
