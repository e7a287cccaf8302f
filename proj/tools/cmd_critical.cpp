#include <cstdio>

#include "commands.hpp"
#include "common.hpp"
#include "ensemble_lab/duality/critical.hpp"
#include "ensemble_lab/io/csv.hpp"

namespace ensemble_lab::cli {

nlohmann::ordered_json critical_report_json(const CriticalBetaReport& r) {
  auto slope_json = [](const AsymptoticSlope& s) {
    return nlohmann::ordered_json{{"value", finite_or_string(s.value)},
                                  {"final_slope", finite_or_string(s.final_slope)},
                                  {"extrapolated", finite_or_string(s.extrapolated)},
                                  {"slopes", s.slopes},
                                  {"trend_ok", s.trend_ok},
                                  {"consistent_with_minus_infinity", s.consistent_with_minus_infinity},
                                  {"warnings", s.warnings}};
  };
  nlohmann::ordered_json j;
  j["beta_analytic"] = finite_or_string(r.beta_analytic);
  j["w_dot"] = finite_or_string(r.w_dot);
  j["beta_macro"] = finite_or_string(r.beta_macro);
  j["beta_micro"] = finite_or_string(r.beta_micro);
  j["macro_agrees"] = r.macro_agrees;
  j["micro_agrees"] = r.micro_agrees;
  j["macro_slope"] = slope_json(r.macro_slope);
  j["micro_slope"] = slope_json(r.micro_slope);
  j["partition"] = nlohmann::ordered_json::array();
  for (const auto& z : r.partition) {
    nlohmann::ordered_json zj{{"beta", z.beta}, {"N", z.N}, {"replicates", z.replicates}, {"growth", finite_or_string(z.growth)},
                              {"unbounded", z.unbounded}, {"verdict", z.verdict}};
    for (const auto& n : z.nested) {
      zj["nested"].push_back({{"samples", n.samples}, {"value", finite_or_string(n.value)},
                              {"std_error", finite_or_string(n.std_error)}});
    }
    j["partition"].push_back(zj);
  }
  j["notes"] = r.notes;
  j["errors"] = r.errors;
  return j;
}

int run_critical(const CriticalArgs& a, io::RunManifest& m) {
  const LoadedModel lm = load_model_recorded(a.model, m);
  const std::uint64_t seed = require_seed(a.seed, lm.model, m);
  CrossCheckOptions o;
  o.macro.grid.resolution = a.resolution;
  o.macro.grid.truncation_radius = a.truncation;
  o.macro.window = a.window;
  o.micro.N = a.N;
  o.micro.window = a.window;
  o.micro.pipeline.direct_samples = a.samples;
  o.micro.pipeline.wl.replicas = a.wl_replicas;
  o.micro.pipeline.wl.log_f_final = a.wl_log_f_final;
  o.rel_tol = a.rel_tol;
  o.run_micro = !a.skip_micro;
  o.run_partition = !a.skip_partition && lm.model.prior.family() == PriorMeasure::Family::gaussian;
  m.set_budget("resolution", a.resolution);
  m.set_budget("N", a.N);
  m.set_budget("samples", a.samples);
  m.set_budget("wl_replicas", a.wl_replicas);

  const CriticalBetaReport r = critical_beta_crosscheck(lm.model, o, seed);
  m.write(output_path(a.out_dir, "critical.json"), critical_report_json(r).dump(2) + "\n");
  if (r.macro_curve.size() > 0) m.write(output_path(a.out_dir, "critical_macro_S.csv"), io::curve_to_csv(r.macro_curve));
  if (r.micro_curve.size() > 0) m.write(output_path(a.out_dir, "critical_micro_S.csv"), io::curve_to_csv(r.micro_curve));
  for (const auto& e : r.errors) m.add_warning(e);
  std::printf("beta_c: analytic %g, macro %.4f (%s), micro %.4f (%s)\n", r.beta_analytic, r.beta_macro,
              r.macro_agrees ? "agrees" : "disagrees", r.beta_micro,
              o.run_micro ? (r.micro_agrees ? "agrees" : "disagrees") : "skipped");
  const bool ok = r.errors.empty() && r.macro_agrees && (!o.run_micro || r.micro_agrees);
  m.set_result("agreement", ok);
  return ok ? kPass : kCheckFailed;
}

}  // namespace ensemble_lab::cli
