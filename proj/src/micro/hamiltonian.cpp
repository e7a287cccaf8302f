#include "ensemble_lab/micro/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ensemble_lab/curve.hpp"
#include "ensemble_lab/error.hpp"

namespace ensemble_lab {

namespace {

// Canonical order by magnitude (ties by value): invariant under permutation
// and, for distinct magnitudes, under negating every term.
double canonical_sum(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end(), [](double a, double b) {
    const double fa = std::abs(a), fb = std::abs(b);
    return fa < fb || (fa == fb && a < b);
  });
  double s = 0.0;
  for (double t : terms) s += t;
  return s;
}

}  // namespace

double hamiltonian(const ModelSpec& model, const Configuration& config) {
  const std::size_t n = config.size();
  require(n >= 1, ErrorKind::usage, "hamiltonian: empty configuration");
  std::vector<double> ones;
  ones.reserve(n);
  if (!model.V.is_zero()) {
    for (std::size_t i = 0; i < n; ++i) {
      const double v = model.V(config.point(i));
      if (v == kInf) return kInf;
      ones.push_back(v);
    }
  }
  std::vector<double> pairs;
  if (!model.W.is_zero() && n > 1) {
    pairs.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double w = model.W(config.point(i), config.point(j));
        if (w == kInf) return kInf;
        pairs.push_back(w);
      }
    }
  }
  const double pair_sum = pairs.empty() ? 0.0 : canonical_sum(pairs);
  const double one_sum = ones.empty() ? 0.0 : canonical_sum(ones);
  return pair_sum / static_cast<double>(n) + one_sum;
}

ModelSpec negated_model(const ModelSpec& model) {
  ModelSpec out = model;
  out.name = model.name + "(negated)";
  if (!model.W.is_zero()) {
    if (const auto* p = model.W.profile()) {
      out.W = PairKernel::radial(p->negated());
    } else if (const auto* t = std::get_if<PairKernel::TranslationInvariant>(&model.W.variant())) {
      auto psi = t->psi;
      out.W = PairKernel::translation_invariant(
          [psi](std::span<const double> z) { return -psi(z); }, "-(" + t->label + ")", t->dim);
    } else {
      const auto& tab = std::get<PairKernel::Table>(model.W.variant());
      out.W = PairKernel::table(tab.nodes, -tab.values);
    }
  }
  if (!model.V.is_zero()) {
    if (const auto* p = model.V.profile()) {
      out.V = ExteriorPotential::radial(p->negated());
    } else {
      const ExteriorPotential v = model.V;
      out.V = ExteriorPotential::general([v](std::span<const double> x) { return -v(x); },
                                         "-(" + v.label() + ")");
    }
  }
  return out;
}

}  // namespace ensemble_lab
