#include <cmath>
#include <cstdio>

#include "commands.hpp"
#include "common.hpp"
#include "ensemble_lab/curve.hpp"
#include "ensemble_lab/error.hpp"
#include "ensemble_lab/model/checks.hpp"
#include "ensemble_lab/random.hpp"

namespace ensemble_lab::cli {

namespace {

// Radii spanning the domain for log-scale tests.
std::vector<double> radius_grid(const ModelSpec& model) {
  const double top = model.domain.is_ball() ? 0.999 * model.domain.radius : 10.0 * model.prior.sigma();
  return log_grid(top * 1e-6, top, 48);
}

}  // namespace

int run_validate(const ValidateArgs& a, io::RunManifest& m) {
  const LoadedModel lm = load_model_recorded(a.model, m);
  const ModelSpec& model = lm.model;
  model.validate();
  ValidationReport report(model.name);
  const RadialProfile* w = model.W.profile();
  const std::vector<double> grid = radius_grid(model);

  for (const std::string& check : a.checks) {
    if (check == "homogeneous") {
      require(w != nullptr, ErrorKind::configuration, "homogeneous check needs a radial kernel");
      report.merge(check_homogeneous_assumptions(*w, grid));
    } else if (check == "psh") {
      if (w != nullptr) {
        ValidationReport r = check_psh_radial(w->negated(), grid);
        for (auto e : r.entries()) {
          e.name = "phi:" + e.name;
          e.passed ? report.add_pass(e.name, e.margin, e.detail) : report.add_fail(e.name, e.margin, *e.witness, e.detail);
        }
      }
      const PriorMeasure prior = model.prior;
      const int d = model.dim();
      const RadialProfile psi0 = profiles::custom(
          [prior, d](double r) {
            std::vector<double> x(static_cast<std::size_t>(d), 0.0);
            x[0] = r;
            return prior.neg_log_density(x);
          },
          kNaN, "psi0");
      const ValidationReport rp = check_psh_radial(psi0, grid);
      for (auto e : rp.entries()) {
        e.name = "psi0:" + e.name;
        e.passed ? report.add_pass(e.name, e.margin, e.detail) : report.add_fail(e.name, e.margin, *e.witness, e.detail);
      }
      if (const RadialProfile* v = model.V.profile(); v != nullptr && !model.V.is_zero()) {
        const ValidationReport rv = check_psh_radial(v->negated(), grid);
        for (auto e : rv.entries()) {
          e.name = "minus_V:" + e.name;
          e.passed ? report.add_pass(e.name, e.margin, e.detail) : report.add_fail(e.name, e.margin, *e.witness, e.detail);
        }
      }
    } else if (check == "weak_pd") {
      if (w != nullptr && !std::isfinite(w->limit_at_zero())) {
        // Infinite diagonal: only regularized versions of the kernel are testable.
        m.add_warning("weak_pd skipped: kernel '" + w->label() + "' is infinite at r = 0; regularize it to test");
        report.add_pass("weak_pd:not_applicable", 0.0, "singular diagonal");
        continue;
      }
      const std::uint64_t seed = require_seed(a.seed, model, m);
      Rng rng = make_rng(seed, 0);
      Eigen::MatrixXd pts(static_cast<Eigen::Index>(a.points), model.dim());
      std::vector<double> x(static_cast<std::size_t>(model.dim()));
      for (std::size_t i = 0; i < a.points; ++i) {
        model.prior.sample(rng, x);
        for (int k = 0; k < model.dim(); ++k) pts(static_cast<Eigen::Index>(i), k) = x[static_cast<std::size_t>(k)];
      }
      report.merge(check_weak_positive_definiteness(model.W, pts, 16, 1e-8, seed));
    } else if (check == "monotone") {
      require(w != nullptr, ErrorKind::configuration, "monotone check needs a radial kernel");
      report.merge(check_complete_monotonicity(*w, 4, grid));
    } else {
      fail(ErrorKind::usage, "unknown check '" + check + "'");
    }
  }

  m.write(output_path(a.out_dir, "validation.json"), report.to_json().dump(2) + "\n");
  m.set_result("passed", report.passed());
  m.set_result("failures", report.failure_count());
  std::printf("%s: %zu checks, %zu failed\n", model.name.c_str(), report.entries().size(), report.failure_count());
  if (const CheckEntry* f = report.first_failure()) std::printf("first failure: %s %s\n", f->name.c_str(), f->detail.c_str());
  return report.passed() ? kPass : kCheckFailed;
}

}  // namespace ensemble_lab::cli
