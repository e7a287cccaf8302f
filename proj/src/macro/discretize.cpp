#include "ensemble_lab/macro/discretize.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/ellint_1.hpp>

#include "ensemble_lab/curve.hpp"
#include "ensemble_lab/error.hpp"
#include "ensemble_lab/kernels/dense.hpp"
#include "ensemble_lab/quadrature.hpp"

namespace ensemble_lab {

std::string to_string(DiscretizationMode mode) {
  return mode == DiscretizationMode::radial ? "radial" : "planar";
}

DiscretizationMode discretization_mode_from_string(const std::string& s) {
  if (s == "radial") return DiscretizationMode::radial;
  if (s == "planar") return DiscretizationMode::planar;
  fail(ErrorKind::usage, "mode must be 'radial' or 'planar', got '" + s + "'");
}

GridMeasure prior_measure(const DiscretizedModel& dm) {
  return GridMeasure{dm.grid_id, dm.prior, dm.prior};
}

GridMeasure make_measure(const DiscretizedModel& dm, Eigen::VectorXd weights) {
  require(weights.size() == dm.prior.size(), ErrorKind::usage, "measure: size differs from the grid");
  return GridMeasure{dm.grid_id, std::move(weights), dm.prior};
}

namespace {

template <class F>
double tanh_sinh_integral(F f, double a, double b) {
  if (!(b > a)) return 0.0;
  static thread_local boost::math::quadrature::tanh_sinh<double> integrator(12);
  return integrator.integrate(f, a, b, 1e-10);
}

// (2/pi) int_0^{pi/2} (1 - k^2 sin^2 phi)^{-alpha/2} dphi
double elliptic_mean(double alpha, double k2) {
  if (alpha == 1.0) {
    return k2 >= 1.0 ? kInf : 2.0 * std::numbers::inv_pi * boost::math::ellint_1(std::sqrt(k2));
  }
  if (k2 >= 1.0 && alpha >= 1.0) return kInf;
  const double v = tanh_sinh_integral(
      [&](double phi) {
        const double sp = std::sin(phi);
        return std::pow(1.0 - k2 * sp * sp, -0.5 * alpha);
      },
      0.0, 0.5 * std::numbers::pi);
  return 2.0 * std::numbers::inv_pi * v;
}

bool non_integrable_self_energy(const RadialProfile& w, int d) {
  return w.family() == ProfileFamily::inverse_power && w.params().at(0) >= d;
}

}  // namespace

double angular_average(const RadialProfile& w, int d, double r, double s, std::size_t points) {
  if (d == 1) return 0.5 * (w(std::abs(r - s)) + w(r + s));
  if (d == 2) {
    if (w.family() == ProfileFamily::log) {
      const double m = std::max(r, s);
      return m > 0.0 ? -w.log_coefficient() * std::log(m) : kInf;
    }
    if (w.family() == ProfileFamily::inverse_power) {
      const double alpha = w.params().at(0);
      const double sum = r + s;
      if (sum == 0.0) return kInf;
      const double k2 = 4.0 * r * s / (sum * sum);
      return std::pow(sum, -alpha) * elliptic_mean(alpha, k2);
    }
    const double rr = r * r + s * s;
    const double rs = 2.0 * r * s;
    double acc = 0.0;
    for (std::size_t k = 0; k < points; ++k) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(points);
      acc += w(std::sqrt(std::max(0.0, rr - rs * std::cos(theta))));
    }
    return acc / static_cast<double>(points);
  }
  // d >= 3: t = cos(theta) with density proportional to (1 - t^2)^{(d-3)/2}.
  auto at = [&](double t) { return w(std::sqrt(std::max(0.0, r * r + s * s - 2.0 * r * s * t))); };
  if (!std::isfinite(w.limit_at_zero()) && std::abs(r - s) < 0.5 * std::max(r, s)) {
    // Near-coincident shells of a singular kernel: the integrand peaks at t = 1.
    const double norm = std::sqrt(std::numbers::pi) * std::tgamma(0.5 * (d - 1)) / std::tgamma(0.5 * d);
    const double v = tanh_sinh_integral(
        [&](double t) {
          const double y = std::pow(1.0 - t * t, 0.5 * (d - 3)) * at(t);
          return std::isfinite(y) ? y : 0.0;
        },
        -1.0, 1.0);
    return v / norm;
  }
  const GaussRule& g = gauss_legendre(64);
  double acc = 0.0, norm = 0.0;
  for (std::size_t k = 0; k < g.nodes.size(); ++k) {
    const double t = g.nodes[k];
    const double wt = g.weights[k] * std::pow(1.0 - t * t, 0.5 * (d - 3));
    acc += wt * at(t);
    norm += wt;
  }
  return acc / norm;
}

namespace {

double default_truncation(const ModelSpec& model, const DiscretizationOptions& options) {
  if (model.domain.is_ball()) return model.domain.radius;
  if (options.truncation_radius > 0.0) return options.truncation_radius;
  return 8.0 * model.prior.sigma();
}

std::string make_grid_id(const ModelSpec& model, DiscretizationMode mode, std::size_t n, double R) {
  std::ostringstream os;
  os << model.name << ':' << to_string(mode) << ':' << n << ':' << R;
  return os.str();
}

DiscretizedModel discretize_radial(const ModelSpec& model, const DiscretizationOptions& options) {
  require(model.is_radial(), ErrorKind::precondition,
          "radial discretization requires rotation-invariant W, V and prior");
  const std::size_t n = options.resolution;
  require(n >= 2, ErrorKind::usage, "radial discretization: need at least 2 shells");
  const int d = model.dim();
  const double Rt = default_truncation(model, options);

  DiscretizedModel dm;
  dm.mode = DiscretizationMode::radial;
  dm.dim = d;
  dm.truncation_radius = Rt;
  dm.grid_id = make_grid_id(model, DiscretizationMode::radial, n, Rt);
  dm.nodes.resize(n, 1);
  dm.prior.resize(n);
  dm.V.resize(n);
  dm.cell_lo.resize(n);
  dm.cell_hi.resize(n);

  const PriorMeasure& prior = model.prior;
  const GaussRule& g16 = gauss_legendre(16);
  std::vector<double> mass(n);
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double a = Rt * static_cast<double>(k) / static_cast<double>(n);
    const double b = k + 1 == n ? Rt : Rt * static_cast<double>(k + 1) / static_cast<double>(n);
    dm.cell_lo[k] = a;
    dm.cell_hi[k] = b;
    mass[k] = prior.shell_mass(a, b);
    total += mass[k];
    std::vector<double> x, wq;
    gauss_legendre_on(16, a, b, x, wq);
    double m0 = 0.0, m1 = 0.0, mv = 0.0;
    for (std::size_t q = 0; q < x.size(); ++q) {
      const double f = wq[q] * prior.radial_density_at(x[q]);
      m0 += f;
      m1 += f * x[q];
      if (!model.V.is_zero()) mv += f * (*model.V.profile())(x[q]);
    }
    dm.nodes(k, 0) = m0 > 0.0 ? m1 / m0 : 0.5 * (a + b);
    dm.V(k) = m0 > 0.0 ? mv / m0 : 0.0;
    (void)g16;
  }
  require(total > 0.0, ErrorKind::configuration, "radial discretization: zero prior mass on the grid");
  dm.truncated_mass = std::max(0.0, 1.0 - total);
  for (std::size_t k = 0; k < n; ++k) dm.prior(k) = mass[k] / total;
  if (dm.truncated_mass > 1e-12) {
    dm.warnings.push_back("prior mass " + std::to_string(dm.truncated_mass) +
                          " beyond the truncation radius was renormalized away");
  }

  if (model.W.is_zero()) {
    dm.W = Eigen::MatrixXd::Zero(n, n);
    return dm;
  }
  const RadialProfile& w = *model.W.profile();

  if (d == 2 && w.family() == ProfileFamily::log) {
    // Exact cell averages: for disjoint shells max(r, s) is the outer radius.
    const double c = w.log_coefficient();
    std::vector<double> mean_log(n), self(n);
    for (std::size_t k = 0; k < n; ++k) {
      std::vector<double> x, wq;
      gauss_legendre_on(32, dm.cell_lo[k], dm.cell_hi[k], x, wq);
      double m0 = 0.0, ml = 0.0, sl = 0.0;
      for (std::size_t q = 0; q < x.size(); ++q) {
        const double f = wq[q] * prior.radial_density_at(x[q]);
        m0 += f;
        ml += f * std::log(x[q]);
        sl += f * std::log(x[q]) * prior.shell_mass(dm.cell_lo[k], x[q]);
      }
      mean_log[k] = ml / m0;
      self[k] = -c * 2.0 * sl / (m0 * m0);
    }
    dm.W = kernels::assemble_symmetric(
        n, [&](std::size_t i, std::size_t j) { return i == j ? self[i] : -c * mean_log[std::max(i, j)]; },
        options.execution);
    return dm;
  }

  const bool singular = !std::isfinite(w.limit_at_zero());
  const bool hopeless = non_integrable_self_energy(w, d);
  if (hopeless) {
    dm.singular_diagonal = true;
    dm.warnings.push_back("kernel '" + w.label() +
                          "' is not integrable on the diagonal: atoms have infinite energy; "
                          "diagonal set to a sentinel");
  }
  const std::size_t P = options.angular_points;
  auto self_energy = [&](std::size_t k) {
    if (hopeless) return kSingularDiagonal;
    const double a = dm.cell_lo[k], b = dm.cell_hi[k];
    std::vector<double> x, wq;
    gauss_legendre_on(24, a, b, x, wq);
    double m0 = 0.0, acc = 0.0;
    for (std::size_t q = 0; q < x.size(); ++q) {
      const double r = x[q];
      const double fr = wq[q] * prior.radial_density_at(r);
      m0 += fr;
      auto inner = [&](double s) {
        const double v = angular_average(w, d, r, s, P) * prior.radial_density_at(s);
        // Integrable log singularity at s = r; rounding can hit it exactly.
        return std::isfinite(v) || std::abs(s - r) > 1e-9 * (b - a) ? v : 0.0;
      };
      double in = 0.0;
      if (singular) {
        in = tanh_sinh_integral(inner, a, r) + tanh_sinh_integral(inner, r, b);
      } else {
        std::vector<double> y, wy;
        gauss_legendre_on(24, a, b, y, wy);
        for (std::size_t p = 0; p < y.size(); ++p) in += wy[p] * inner(y[p]);
      }
      acc += fr * in;
    }
    const double v = acc / (m0 * m0);
    return std::isfinite(v) ? v : kSingularDiagonal;
  };
  dm.W = kernels::assemble_symmetric(
      n,
      [&](std::size_t i, std::size_t j) {
        return i == j ? self_energy(i) : angular_average(w, d, dm.nodes(i, 0), dm.nodes(j, 0), P);
      },
      options.execution);
  for (std::size_t k = 0; k < n; ++k) {
    if (dm.W(k, k) >= kSingularDiagonal && !hopeless) {
      dm.singular_diagonal = true;
      dm.warnings.push_back("self-energy of shell " + std::to_string(k) + " is infinite; sentinel used");
    }
  }
  return dm;
}

// E f(U - U') for U, U' uniform on a square of side h: each coordinate of the
// difference has the triangular density (h - |t|)/h^2. Polar coordinates in
// each quadrant absorb an integrable singularity at the origin.
double square_self_average(const std::function<double(double, double)>& f, double h) {
  const GaussRule& g = gauss_legendre(32);
  double total = 0.0;
  for (int half = 0; half < 2; ++half) {
    const double p0 = half == 0 ? 0.0 : 0.25 * std::numbers::pi;
    const double p1 = p0 + 0.25 * std::numbers::pi;
    for (std::size_t q = 0; q < g.nodes.size(); ++q) {
      const double phi = 0.5 * (p0 + p1) + 0.5 * (p1 - p0) * g.nodes[q];
      const double wphi = 0.5 * (p1 - p0) * g.weights[q];
      const double c = std::cos(phi), s = std::sin(phi);
      const double rmax = h / std::max(c, s);
      const double radial = tanh_sinh_integral(
          [&](double rho) {
            const double a = rho * c, b = rho * s;
            const double avg = 0.25 * (f(a, b) + f(-a, b) + f(a, -b) + f(-a, -b));
            const double v = avg * (h - a) * (h - b) * rho;
            return std::isfinite(v) || rho > 1e-9 * h ? v : 0.0;
          },
          0.0, rmax);
      total += wphi * radial;
    }
  }
  return 4.0 * total / (h * h * h * h);
}

// Average of f(x - y) over x, y uniform in two cells offset by (a h, b h):
// the triangular difference density on [-h, h]^2, Gauss rule per quadrant.
double square_pair_average(const std::function<double(double, double)>& f, double h, int a, int b) {
  const GaussRule& g = gauss_legendre(24);
  double total = 0.0;
  for (int sx = -1; sx <= 1; sx += 2) {
    for (int sy = -1; sy <= 1; sy += 2) {
      for (std::size_t p = 0; p < g.nodes.size(); ++p) {
        const double u = 0.5 * h * (1.0 + g.nodes[p]);
        for (std::size_t q = 0; q < g.nodes.size(); ++q) {
          const double v = 0.5 * h * (1.0 + g.nodes[q]);
          const double val = f(a * h + sx * u, b * h + sy * v);
          if (std::isfinite(val)) total += 0.25 * h * h * g.weights[p] * g.weights[q] * val * (h - u) * (h - v);
        }
      }
    }
  }
  return total / (h * h * h * h);
}

DiscretizedModel discretize_planar(const ModelSpec& model, const DiscretizationOptions& options) {
  require(model.dim() == 2, ErrorKind::configuration, "planar discretization requires d = 2");
  require(!std::holds_alternative<PairKernel::Table>(model.W.variant()), ErrorKind::configuration,
          "planar discretization: table kernels are not supported");
  const std::size_t res = options.resolution;
  require(res >= 4, ErrorKind::usage, "planar discretization: resolution must be >= 4");
  const double Rt = default_truncation(model, options);
  const double h = 2.0 * Rt / static_cast<double>(res);

  DiscretizedModel dm;
  dm.mode = DiscretizationMode::planar;
  dm.dim = 2;
  dm.truncation_radius = Rt;
  dm.cell_width = h;
  dm.grid_id = make_grid_id(model, DiscretizationMode::planar, res, Rt);

  std::vector<std::array<double, 2>> centers;
  std::vector<double> mass;
  const GaussRule& g = gauss_legendre(6);
  double total = 0.0;
  for (std::size_t i = 0; i < res; ++i) {
    for (std::size_t j = 0; j < res; ++j) {
      const double cx = -Rt + (static_cast<double>(i) + 0.5) * h;
      const double cy = -Rt + (static_cast<double>(j) + 0.5) * h;
      if (cx * cx + cy * cy > Rt * Rt) continue;
      double m = 0.0;
      for (std::size_t p = 0; p < g.nodes.size(); ++p) {
        for (std::size_t q = 0; q < g.nodes.size(); ++q) {
          const double x[2] = {cx + 0.5 * h * g.nodes[p], cy + 0.5 * h * g.nodes[q]};
          if (x[0] * x[0] + x[1] * x[1] > Rt * Rt) continue;
          const double psi = model.prior.neg_log_density(x);
          if (std::isfinite(psi)) m += 0.25 * h * h * g.weights[p] * g.weights[q] * std::exp(-psi);
        }
      }
      if (m <= 0.0) continue;
      centers.push_back({cx, cy});
      mass.push_back(m);
      total += m;
    }
  }
  const std::size_t n = centers.size();
  require(n >= 2, ErrorKind::configuration, "planar discretization: fewer than 2 cells");
  dm.nodes.resize(n, 2);
  dm.prior.resize(n);
  dm.V.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    dm.nodes(k, 0) = centers[k][0];
    dm.nodes(k, 1) = centers[k][1];
    dm.prior(k) = mass[k] / total;
    dm.V(k) = model.V(std::span<const double>(centers[k].data(), 2));
  }
  dm.truncated_mass = std::max(0.0, 1.0 - total);
  if (dm.truncated_mass > 1e-6) {
    dm.warnings.push_back("prior mass " + std::to_string(dm.truncated_mass) +
                          " outside the grid was renormalized away");
  }
  if (model.W.is_zero()) {
    dm.W = Eigen::MatrixXd::Zero(n, n);
    return dm;
  }

  double diag = 0.0;
  const RadialProfile* prof = model.W.profile();
  if (prof != nullptr && non_integrable_self_energy(*prof, 2)) {
    diag = kSingularDiagonal;
  } else {
    const PairKernel& W = model.W;
    diag = square_self_average(
        [&](double a, double b) {
          const double o[2] = {0.0, 0.0};
          const double z[2] = {a, b};
          return W(o, z);
        },
        h);
    if (!std::isfinite(diag)) diag = kSingularDiagonal;
  }
  if (diag >= kSingularDiagonal) {
    dm.singular_diagonal = true;
    dm.warnings.push_back("cell self-energy is infinite; diagonal set to a sentinel");
  }
  const PairKernel& W = model.W;
  // Neighbouring cells: exact cell-pair averages (the centre value is poor
  // near a singularity); farther cells use the centres.
  constexpr int kNear = 2;
  std::array<std::array<double, 2 * kNear + 1>, 2 * kNear + 1> near{};
  if (diag < kSingularDiagonal) {
    auto f = [&](double a, double b) {
      const double o[2] = {0.0, 0.0};
      const double z[2] = {a, b};
      return W(o, z);
    };
    for (int a = -kNear; a <= kNear; ++a) {
      for (int b = -kNear; b <= kNear; ++b) {
        if (a != 0 || b != 0) near[a + kNear][b + kNear] = square_pair_average(f, h, a, b);
      }
    }
  }
  dm.W = kernels::assemble_symmetric(
      n,
      [&](std::size_t i, std::size_t j) {
        if (i == j) return diag;
        const int a = static_cast<int>(std::lround((centers[i][0] - centers[j][0]) / h));
        const int b = static_cast<int>(std::lround((centers[i][1] - centers[j][1]) / h));
        if (diag < kSingularDiagonal && std::abs(a) <= kNear && std::abs(b) <= kNear) {
          return 0.5 * (near[a + kNear][b + kNear] + near[kNear - a][kNear - b]);
        }
        return W(std::span<const double>(centers[i].data(), 2), std::span<const double>(centers[j].data(), 2));
      },
      options.execution);
  return dm;
}

}  // namespace

DiscretizedModel discretize(const ModelSpec& model, DiscretizationMode mode,
                            const DiscretizationOptions& options) {
  model.validate();
  return mode == DiscretizationMode::radial ? discretize_radial(model, options)
                                            : discretize_planar(model, options);
}

}  // namespace ensemble_lab
