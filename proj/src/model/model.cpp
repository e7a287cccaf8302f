#include "ensemble_lab/model/model.hpp"

#include "ensemble_lab/error.hpp"

namespace ensemble_lab {

bool ModelSpec::is_radial() const {
  return (W.is_zero() || W.profile() != nullptr) && V.is_radial();
}

void ModelSpec::validate() const {
  require(domain.dim >= 1, ErrorKind::configuration, "model: d must be >= 1");
  require(prior.dim() == domain.dim, ErrorKind::configuration,
          "model: prior dimension differs from the domain dimension");
  require(prior.domain().kind == domain.kind, ErrorKind::configuration,
          "model: prior domain type differs from the model domain");
  if (domain.is_ball()) {
    require(prior.domain().radius == domain.radius, ErrorKind::configuration,
            "model: prior ball radius differs from the domain radius");
  }
  if (const auto* t = std::get_if<PairKernel::TranslationInvariant>(&W.variant())) {
    require(t->dim == domain.dim, ErrorKind::configuration,
            "model: kernel dimension differs from the domain dimension");
  }
  if (const auto* tab = std::get_if<PairKernel::Table>(&W.variant())) {
    require(tab->nodes.cols() == domain.dim, ErrorKind::configuration,
            "model: table kernel nodes have the wrong dimension");
  }
  if (N) require(*N >= 1, ErrorKind::configuration, "model: N must be >= 1");
}

int ModelSpec::particles() const {
  require(N.has_value(), ErrorKind::precondition, "model: N is required for finite-N operations");
  return *N;
}

}  // namespace ensemble_lab
