#include <cmath>
#include <cstdio>

#include "commands.hpp"
#include "common.hpp"
#include "ensemble_lab/duality/critical.hpp"
#include "ensemble_lab/error.hpp"
#include "ensemble_lab/io/csv.hpp"
#include "ensemble_lab/macro/catastrophe.hpp"
#include "ensemble_lab/micro/concavity.hpp"
#include "ensemble_lab/model/checks.hpp"
#include "ensemble_lab/random.hpp"

namespace ensemble_lab::cli {

nlohmann::ordered_json critical_report_json(const CriticalBetaReport& r);

namespace {

constexpr std::uint64_t kDemoSeed = 20240601;

int demo_vortex(std::uint64_t seed, const std::string& dir, io::RunManifest& m) {
  ModelSpec model;
  model.name = "vortex_gaussian";
  model.domain = Domain::full_space(2);
  model.W = PairKernel::radial(profiles::log_repulsive());
  model.prior = PriorMeasure::gaussian(2, 1.0);
  model.N = 8;

  CrossCheckOptions o;
  o.micro.N = 8;
  o.micro.pipeline.wl.replicas = 4;
  o.micro.pipeline.wl.log_f_final = 1e-5;
  m.set_budget("macro_shells", o.macro.grid.resolution);
  m.set_budget("micro_N", o.micro.N);
  m.set_budget("wl_replicas", o.micro.pipeline.wl.replicas);
  const CriticalBetaReport r = critical_beta_crosscheck(model, o, seed);

  const SampledCurve& S = r.macro_curve;
  bool decreasing = S.size() >= 2;
  for (std::size_t i = 1; i < S.size(); ++i) decreasing = decreasing && S.y[i] <= S.y[i - 1] + 1e-10;
  const bool concave = S.size() >= 4 && concavity_check(S, {ConcavityMode::weak, 0.0, 2.0, 1e-8}).passed();

  nlohmann::ordered_json summary;
  summary["preset"] = "vortex";
  summary["anchor_slope"] = -4.0;
  summary["macro_S_decreasing"] = decreasing;
  summary["macro_S_concave"] = concave;
  summary["crosscheck"] = critical_report_json(r);
  m.write(output_path(dir, "vortex_summary.json"), summary.dump(2) + "\n");
  if (S.size() > 0) m.write(output_path(dir, "vortex_macro_S.csv"), io::curve_to_csv(S));
  if (r.micro_curve.size() > 0) m.write(output_path(dir, "vortex_micro_S.csv"), io::curve_to_csv(r.micro_curve));
  std::printf("vortex: macro slope %.4f, micro slope %.4f (anchor -4); S decreasing %s, concave %s\n", r.beta_macro,
              r.beta_micro, decreasing ? "yes" : "no", concave ? "yes" : "no");
  for (const auto& e : r.errors) m.add_warning(e);
  const bool ok = r.errors.empty() && r.macro_agrees && r.micro_agrees && decreasing && concave;
  m.set_result("passed", ok);
  return ok ? kPass : kCheckFailed;
}

int demo_catastrophe(const std::string& dir, io::RunManifest& m) {
  const double alpha = 1.0;
  const int d = 2;
  const double e0 = uniform_ball_energy(alpha, d);
  const std::vector<double> eps{0.5, 0.2, 0.1, 0.05, 0.02, 0.01};
  const auto rows = catastrophe_family(alpha, e0, d, eps);
  std::string csv = "eps,weight,energy_bound,entropy_bound,scaled_energy,scaled_ratio,eps_pow_minus_alpha,energy,entropy\n";
  for (const auto& r : rows) {
    csv += io::format_number(r.eps) + ',' + io::format_number(r.weight) + ',' + io::format_number(r.energy_bound) +
           ',' + io::format_number(r.entropy_bound) + ',' + io::format_number(r.scaled_energy) + ',' +
           io::format_number(r.scaled_ratio) + ',' + io::format_number(std::pow(r.eps, -alpha)) + ',' +
           io::format_number(r.energy) + ',' + io::format_number(r.entropy) + '\n';
  }
  m.write(output_path(dir, "catastrophe_table.csv"), csv);

  const CoreHalo ch = core_halo_at_energy(alpha, d, 5.0 * e0, -0.05);
  nlohmann::ordered_json summary;
  summary["preset"] = "catastrophe";
  summary["alpha"] = alpha;
  summary["d"] = d;
  summary["e0"] = e0;
  summary["core_halo"] = {{"target", ch.target}, {"lambda", ch.lambda}, {"rho", ch.rho},
                          {"energy", ch.energy}, {"entropy", ch.entropy}, {"found", ch.found}};
  bool ratios_ok = true;
  for (const auto& r : rows) ratios_ok = ratios_ok && std::abs(r.scaled_ratio * std::pow(r.eps, alpha) - 1.0) <= 0.01;
  summary["scaled_ratio_within_1pct"] = ratios_ok;
  m.write(output_path(dir, "catastrophe_summary.json"), summary.dump(2) + "\n");
  std::printf("catastrophe: e0 %.6f, E ratios %s, core-halo at 5 e0: lambda %.4g rho %.4g S %.4f (%s)\n", e0,
              ratios_ok ? "match eps^-alpha" : "MISMATCH", ch.lambda, ch.rho, ch.entropy, ch.found ? "found" : "not found");
  const bool ok = ratios_ok && ch.found;
  m.set_result("passed", ok);
  return ok ? kPass : kCheckFailed;
}

int demo_born_mayer(std::uint64_t seed, const std::string& dir, io::RunManifest& m) {
  const double a = 1.0;
  const int d = 2;
  const double radius = 1.0 / (2.0 * a);
  const RadialProfile w = profiles::exponential(1.0, a);
  const PairKernel W = PairKernel::radial(w);
  const PriorMeasure ball = PriorMeasure::uniform_ball(d, radius);
  Rng rng = make_rng(seed, 0);
  const std::size_t n = 64;
  Eigen::MatrixXd pts(static_cast<Eigen::Index>(n), d);
  std::vector<double> x(d);
  for (std::size_t i = 0; i < n; ++i) {
    ball.sample(rng, x);
    for (int k = 0; k < d; ++k) pts(static_cast<Eigen::Index>(i), k) = x[static_cast<std::size_t>(k)];
  }
  ValidationReport report("born_mayer");
  report.merge(check_weak_positive_definiteness(W, pts, 16, 1e-8, seed));
  report.merge(check_complete_monotonicity(w, 4, log_grid(1e-6, 2.0 * radius, 48)));
  m.write(output_path(dir, "born_mayer_validation.json"), report.to_json().dump(2) + "\n");
  std::printf("born-mayer (a=%g, radius %g): %zu checks, %zu failed\n", a, radius, report.entries().size(),
              report.failure_count());
  m.set_result("passed", report.passed());
  return report.passed() ? kPass : kCheckFailed;
}

}  // namespace

int run_demo(const DemoArgs& a, io::RunManifest& m) {
  const std::uint64_t seed = a.seed.value_or(kDemoSeed);
  m.add_seed("seed", seed);
  if (a.name == "vortex") return demo_vortex(seed, a.out_dir, m);
  if (a.name == "catastrophe") return demo_catastrophe(a.out_dir, m);
  if (a.name == "born-mayer") return demo_born_mayer(seed, a.out_dir, m);
  fail(ErrorKind::usage, "unknown demo '" + a.name + "' (vortex, catastrophe, born-mayer)");
}

}  // namespace ensemble_lab::cli
