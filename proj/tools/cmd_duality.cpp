#include <cstdio>

#include "commands.hpp"
#include "common.hpp"
#include "ensemble_lab/duality/legendre.hpp"
#include "ensemble_lab/error.hpp"
#include "ensemble_lab/io/csv.hpp"

namespace ensemble_lab::cli {

int run_duality(const DualityArgs& a, io::RunManifest& m) {
  require(!a.s_curve.empty() || !a.f_curve.empty(), ErrorKind::usage, "duality: pass --s-curve and/or --f-curve");
  const std::string prefix = a.out_prefix.empty() ? output_path(a.out_dir, "duality").string() : a.out_prefix;
  nlohmann::ordered_json report;
  int code = kPass;

  if (!a.s_curve.empty()) {
    const SampledCurve S = io::read_curve_csv(a.s_curve);
    const SampledCurve env = concave_envelope(S);
    m.write(prefix + "_S_envelope.csv", io::curve_to_csv(env, "e"));
    m.write(prefix + "_S_transform.csv", io::curve_to_csv(legendre_concave(S), "beta"));
    const AsymptoticSlope sl = asymptotic_slope(S, a.window);
    report["asymptotic_slope"] = {{"value", finite_or_string(sl.value)},
                                  {"final_slope", finite_or_string(sl.final_slope)},
                                  {"extrapolated", finite_or_string(sl.extrapolated)},
                                  {"slopes", sl.slopes},
                                  {"trend_ok", sl.trend_ok},
                                  {"consistent_with_minus_infinity", sl.consistent_with_minus_infinity},
                                  {"warnings", sl.warnings}};
    for (const auto& w : sl.warnings) m.add_warning(w);
  }
  if (!a.f_curve.empty()) {
    const SampledCurve F = io::read_curve_csv(a.f_curve);
    m.write(prefix + "_F_transform.csv", io::curve_to_csv(legendre_concave(F), "e"));
  }
  if (!a.s_curve.empty() && !a.f_curve.empty()) {
    const EquivalenceGap g = equivalence_gap(io::read_curve_csv(a.s_curve), io::read_curve_csv(a.f_curve), a.tol_equiv);
    report["equivalence_gap"] = {{"gap", finite_or_string(g.gap)},
                                 {"argmax", finite_or_string(g.argmax)},
                                 {"points", g.points},
                                 {"tol_equiv", a.tol_equiv},
                                 {"pass", g.pass}};
    std::printf("equivalence gap %.3e at e=%.6g (%zu points): %s\n", g.gap, g.argmax, g.points, g.pass ? "pass" : "FAIL");
    if (!g.pass) code = kCheckFailed;
    m.set_result("equivalence_pass", g.pass);
  }
  m.write(prefix + "_report.json", report.dump(2) + "\n");
  return code;
}

}  // namespace ensemble_lab::cli
