#include <cstdio>

#include "commands.hpp"
#include "common.hpp"
#include "ensemble_lab/io/csv.hpp"
#include "ensemble_lab/macro/functionals.hpp"
#include "ensemble_lab/macro/sweep.hpp"

namespace ensemble_lab::cli {

namespace {

std::string sweep_table(const FreeEnergyCurve& fc) {
  std::string s = "beta,F,E,S,iterations,residual,converged,diverged\n";
  for (std::size_t i = 0; i < fc.curve.size(); ++i) {
    s += io::format_number(fc.curve.x[i]) + ',' + io::format_number(fc.curve.y[i]) + ',' +
         io::format_number(fc.energies[i]) + ',' + io::format_number(fc.entropies[i]) + ',' +
         std::to_string(fc.iterations[i]) + ',' + io::format_number(fc.residuals[i]) + ',' +
         (fc.curve.is_flagged(i) ? "0" : "1") + ',' + (fc.diverged[i] ? "1" : "0") + '\n';
  }
  return s;
}

std::string measure_table(const DiscretizedModel& dm, const EntropyCurve& ec) {
  std::string s = "node";
  for (Eigen::Index k = 1; k < dm.nodes.cols(); ++k) s += ",node" + std::to_string(k);
  s += ",prior";
  for (double e : ec.curve.x) s += ",mu_e=" + io::format_number(e);
  s += '\n';
  for (std::size_t j = 0; j < dm.size(); ++j) {
    for (Eigen::Index k = 0; k < dm.nodes.cols(); ++k) {
      s += (k ? "," : "") + io::format_number(dm.nodes(static_cast<Eigen::Index>(j), k));
    }
    s += ',' + io::format_number(dm.prior(static_cast<Eigen::Index>(j)));
    for (const auto& mu : ec.measures) s += ',' + io::format_number(mu.weights(static_cast<Eigen::Index>(j)));
    s += '\n';
  }
  return s;
}

}  // namespace

int run_macro(const MacroArgs& a, io::RunManifest& m) {
  const LoadedModel lm = load_model_recorded(a.model, m);
  const std::vector<double> betas = parse_grid(a.beta_grid, "--beta-grid");
  DiscretizationOptions dopt;
  dopt.resolution = a.resolution;
  dopt.truncation_radius = a.truncation;
  const DiscretizedModel dm = discretize(lm.model, discretization_mode_from_string(a.mode), dopt);
  for (const auto& w : dm.warnings) m.add_warning(w);
  m.set_budget("resolution", a.resolution);
  m.set_budget("max_iter", a.max_iter);
  m.set_budget("tol", a.tol);

  SolverOptions sopt;
  sopt.damping = a.damping;
  sopt.tol = a.tol;
  sopt.max_iter = a.max_iter;
  const FreeEnergyCurve fc =
      free_energy_curve(dm, betas, sopt, a.start == "cold" ? SweepStart::cold : SweepStart::warm);
  for (const auto& n : fc.curve.notes) m.add_warning(n);

  const std::string prefix = a.out_prefix.empty() ? output_path(a.out_dir, "macro").string() : a.out_prefix;
  m.write(prefix + "_F.csv", io::curve_to_csv(fc.curve, "beta"));
  m.write(prefix + "_sweep.csv", sweep_table(fc));
  m.set_result("e0", finite_or_string(energy(dm, prior_measure(dm))));
  m.set_result("F_concave", fc.concavity.passed());
  std::size_t nonconv = 0;
  for (std::size_t i = 0; i < fc.curve.size(); ++i) nonconv += fc.curve.is_flagged(i) ? 1 : 0;
  m.set_result("nonconverged_betas", nonconv);

  bool ok = fc.concavity.passed();
  if (!a.e_grid.empty()) {
    const std::vector<double> es = parse_grid(a.e_grid, "--e-grid");
    EnergyInversionOptions inv;
    inv.solver = sopt;
    inv.sweep = &fc;
    const EntropyCurve ec = entropy_curve_direct(dm, es, {betas.front(), betas.back()}, inv);
    for (const auto& n : ec.curve.notes) m.add_warning(n);
    m.write(prefix + "_S.csv", io::curve_to_csv(ec.curve, "e"));
    m.write(prefix + "_measures.csv", measure_table(dm, ec));
  }
  std::printf("%s: %zu betas (%zu not converged), F concave: %s -> %s_*.csv\n", lm.model.name.c_str(), betas.size(),
              nonconv, ok ? "yes" : "NO", prefix.c_str());
  return ok ? kPass : kCheckFailed;
}

}  // namespace ensemble_lab::cli
