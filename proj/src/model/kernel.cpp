#include "ensemble_lab/model/kernel.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "ensemble_lab/curve.hpp"
#include "ensemble_lab/error.hpp"
#include "ensemble_lab/quadrature.hpp"

namespace ensemble_lab {

std::string to_string(RegularizationScheme scheme) {
  switch (scheme) {
    case RegularizationScheme::shift: return "shift";
    case RegularizationScheme::cap: return "cap";
    case RegularizationScheme::mollify: return "mollify";
  }
  return "unknown";
}

RegularizationScheme regularization_from_string(const std::string& name) {
  if (name == "shift") return RegularizationScheme::shift;
  if (name == "cap") return RegularizationScheme::cap;
  if (name == "mollify") return RegularizationScheme::mollify;
  fail(ErrorKind::configuration, "unknown regularization scheme '" + name + "'");
}

PairKernel::PairKernel(std::variant<Radial, TranslationInvariant, Table> data)
    : data_(std::move(data)) {}

PairKernel PairKernel::radial(RadialProfile profile) {
  const bool z = profile.family() == ProfileFamily::zero;
  PairKernel k(Radial{std::move(profile)});
  k.zero_ = z;
  return k;
}

PairKernel PairKernel::translation_invariant(PointFunction psi, std::string label, int dim) {
  require(static_cast<bool>(psi), ErrorKind::usage, "kernel: empty function");
  require(dim >= 1, ErrorKind::configuration, "kernel: dimension must be >= 1");
  return PairKernel(TranslationInvariant{std::move(psi), std::move(label), dim});
}

PairKernel PairKernel::table(Eigen::MatrixXd nodes, Eigen::MatrixXd values) {
  require(values.rows() == values.cols() && values.rows() == nodes.rows(), ErrorKind::usage,
          "table kernel: values must be n x n for n nodes");
  require((values - values.transpose()).cwiseAbs().maxCoeff() == 0.0 || values.size() == 0,
          ErrorKind::configuration, "table kernel: matrix is not symmetric");
  return PairKernel(Table{std::move(nodes), std::move(values)});
}

PairKernel PairKernel::zero() { return radial(profiles::zero()); }

namespace {

// Symmetric in (x, y) bit for bit: the squared differences are identical.
double distance(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return std::sqrt(s);
}

std::ptrdiff_t find_node(const Eigen::MatrixXd& nodes, std::span<const double> x) {
  for (Eigen::Index i = 0; i < nodes.rows(); ++i) {
    bool same = static_cast<std::size_t>(nodes.cols()) == x.size();
    for (Eigen::Index c = 0; same && c < nodes.cols(); ++c) same = nodes(i, c) == x[c];
    if (same) return i;
  }
  return -1;
}

}  // namespace

double PairKernel::operator()(std::span<const double> x, std::span<const double> y) const {
  if (zero_) return 0.0;
  if (const auto* r = std::get_if<Radial>(&data_)) return r->profile(distance(x, y));
  if (const auto* t = std::get_if<TranslationInvariant>(&data_)) {
    // Evaluate at +/-(x - y) and average so W is symmetric even for a
    // slightly non-even psi; for even psi this is exact.
    std::array<double, 8> buf{};
    std::vector<double> heap;
    double* z = buf.data();
    if (x.size() > buf.size() / 2) {
      heap.resize(2 * x.size());
      z = heap.data();
    }
    double* zm = z + x.size();
    for (std::size_t i = 0; i < x.size(); ++i) {
      z[i] = x[i] - y[i];
      zm[i] = y[i] - x[i];
    }
    const double a = t->psi({z, x.size()});
    const double b = t->psi({zm, x.size()});
    return -0.5 * (a + b);
  }
  const auto& tab = std::get<Table>(data_);
  const auto i = find_node(tab.nodes, x);
  const auto j = find_node(tab.nodes, y);
  require(i >= 0 && j >= 0, ErrorKind::usage, "table kernel: evaluation point is not a node");
  return tab.values(i, j);
}

const RadialProfile* PairKernel::profile() const {
  if (const auto* r = std::get_if<Radial>(&data_)) return &r->profile;
  return nullptr;
}

bool PairKernel::is_zero() const { return zero_; }

bool PairKernel::finite_on_diagonal() const {
  if (zero_) return true;
  if (const auto* r = std::get_if<Radial>(&data_)) return std::isfinite(r->profile.limit_at_zero());
  if (const auto* t = std::get_if<TranslationInvariant>(&data_)) {
    const std::vector<double> origin(static_cast<std::size_t>(t->dim), 0.0);
    return std::isfinite(t->psi(origin));
  }
  const auto& tab = std::get<Table>(data_);
  return tab.values.diagonal().allFinite();
}

std::string PairKernel::label() const {
  std::string base;
  if (const auto* r = std::get_if<Radial>(&data_)) {
    base = r->profile.label();
  } else if (const auto* t = std::get_if<TranslationInvariant>(&data_)) {
    base = t->label;
  } else {
    base = "table";
  }
  return base;
}

namespace {

// Unnormalized bump exp(-1/(1 - s^2)) for s = |u|/delta < 1.
double bump(double s) { return s < 1.0 ? std::exp(-1.0 / (1.0 - s * s)) : 0.0; }

// Fixed product rule for the bump in R^dim, dim in {1, 2}. Points are offsets
// u, weights include the normalized bump density.
struct BumpRule {
  std::vector<std::array<double, 2>> offsets;
  std::vector<double> weights;
};

BumpRule make_bump_rule(double delta, int dim) {
  BumpRule rule;
  const GaussRule& g = gauss_legendre(kMollifierOrder);
  double total = 0.0;
  if (dim == 1) {
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      const double u = delta * g.nodes[i];
      const double w = delta * g.weights[i] * bump(std::abs(g.nodes[i]));
      rule.offsets.push_back({u, 0.0});
      rule.weights.push_back(w);
      total += w;
    }
  } else {
    // Polar coordinates: rho in (0, delta), theta in (0, 2 pi).
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      const double s = 0.5 * (g.nodes[i] + 1.0);
      const double rho = delta * s;
      const double wr = 0.5 * delta * g.weights[i] * rho * bump(s);
      for (std::size_t k = 0; k < g.nodes.size(); ++k) {
        const double theta = std::numbers::pi * (g.nodes[k] + 1.0);
        const double w = wr * std::numbers::pi * g.weights[k];
        rule.offsets.push_back({rho * std::cos(theta), rho * std::sin(theta)});
        rule.weights.push_back(w);
        total += w;
      }
    }
  }
  for (double& w : rule.weights) w /= total;
  return rule;
}

}  // namespace

PairKernel regularize(const PairKernel& base, RegularizationScheme scheme, double delta, int dim) {
  require(delta > 0.0 && std::isfinite(delta), ErrorKind::configuration,
          "regularize: delta must be positive");
  const RadialProfile* prof = base.profile();
  const bool ti = std::holds_alternative<PairKernel::TranslationInvariant>(base.variant());
  if (std::holds_alternative<PairKernel::Table>(base.variant())) {
    fail(ErrorKind::configuration, "regularize: table kernels cannot be regularized");
  }
  RegularizationInfo info{base.label(), scheme, delta};

  if (scheme == RegularizationScheme::shift || scheme == RegularizationScheme::cap) {
    require(prof != nullptr, ErrorKind::configuration,
            "regularize: " + to_string(scheme) + " requires a radial base kernel");
    RadialProfile p = *prof;
    RadialProfile out =
        scheme == RegularizationScheme::shift
            ? RadialProfile([p, delta](double r) { return p(r + delta); }, p(delta),
                            p.label() + "+shift(" + std::to_string(delta) + ")",
                            ProfileFamily::shifted, {delta})
            : RadialProfile([p, delta](double r) { return p(std::max(r, delta)); }, p(delta),
                            p.label() + "+cap(" + std::to_string(delta) + ")",
                            ProfileFamily::capped, {delta});
    PairKernel k = PairKernel::radial(std::move(out));
    k.set_regularization(info);
    return k;
  }

  require(dim == 1 || dim == 2, ErrorKind::configuration,
          "regularize: mollify supports dimension 1 or 2");
  require(prof != nullptr || ti, ErrorKind::configuration,
          "regularize: mollify requires a radial or translation-invariant base");
  auto rule = std::make_shared<const BumpRule>(make_bump_rule(delta, dim));

  if (prof != nullptr) {
    RadialProfile p = *prof;
    auto eval = [p, rule, dim](double r) {
      double s = 0.0;
      for (std::size_t q = 0; q < rule->weights.size(); ++q) {
        const auto& u = rule->offsets[q];
        const double dx = r + u[0];
        const double dy = dim == 2 ? u[1] : 0.0;
        s += rule->weights[q] * p(std::sqrt(dx * dx + dy * dy));
      }
      return s;
    };
    const double at_zero = eval(0.0);
    PairKernel k = PairKernel::radial(RadialProfile(
        eval, at_zero, p.label() + "+mollify(" + std::to_string(delta) + ")",
        ProfileFamily::mollified, {delta}));
    k.set_regularization(info);
    return k;
  }

  const auto& tbase = std::get<PairKernel::TranslationInvariant>(base.variant());
  require(tbase.dim == dim, ErrorKind::configuration,
          "regularize: kernel dimension differs from the requested dimension");
  auto psi = tbase.psi;
  auto smoothed = [psi, rule, dim](std::span<const double> z) {
    require(static_cast<int>(z.size()) == dim, ErrorKind::usage,
            "mollified kernel: dimension mismatch");
    double s = 0.0;
    std::array<double, 2> p{};
    for (std::size_t q = 0; q < rule->weights.size(); ++q) {
      for (int c = 0; c < dim; ++c) p[c] = z[c] + rule->offsets[q][c];
      s += rule->weights[q] * psi({p.data(), static_cast<std::size_t>(dim)});
    }
    return s;
  };
  PairKernel k = PairKernel::translation_invariant(
      smoothed, base.label() + "+mollify(" + std::to_string(delta) + ")", dim);
  k.set_regularization(info);
  return k;
}

}  // namespace ensemble_lab
