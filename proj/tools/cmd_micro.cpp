#include <cstdio>

#include "commands.hpp"
#include "common.hpp"
#include "ensemble_lab/io/csv.hpp"
#include "ensemble_lab/micro/concavity.hpp"
#include "ensemble_lab/micro/pipeline.hpp"

namespace ensemble_lab::cli {

int run_micro(const MicroArgs& a, io::RunManifest& m) {
  LoadedModel lm = load_model_recorded(a.model, m);
  ModelSpec& model = lm.model;
  if (a.N) model.N = *a.N;
  model.validate();
  const int N = model.particles();
  const std::uint64_t seed = require_seed(a.seed, model, m);
  const std::vector<double> grid = parse_grid(a.e_grid, "--e-grid");

  TailPipelineOptions opt;
  opt.direct_samples = a.samples;
  opt.dos = a.estimator == "dos" ? DosMode::always : DosMode::off;
  opt.wl.replicas = a.wl_replicas;
  opt.wl.bins = a.wl_bins;
  opt.wl.log_f_final = a.wl_log_f_final;
  m.set_budget("samples", a.samples);
  m.set_budget("N", N);
  if (opt.dos != DosMode::off) {
    m.set_budget("wl_replicas", a.wl_replicas);
    m.set_budget("wl_bins", a.wl_bins);
    m.set_budget("wl_log_f_final", a.wl_log_f_final);
  }

  const TailDirection dir = tail_direction_from_string(a.direction);
  const TailPipelineResult res = estimate_tail(model, grid, dir, opt, seed);
  for (const auto& n : res.notes) m.add_warning(n);
  std::size_t flagged = 0;
  for (auto f : res.combined.flagged) flagged += f;
  if (flagged > 0) m.add_warning(std::to_string(flagged) + " grid points flagged (too few hits)");

  const std::string out = a.out.empty() ? output_path(a.out_dir, "micro.csv").string() : a.out;
  m.write(out, io::curve_to_csv(res.combined.as_curve()));
  if (res.dos_curve) {
    std::string dos_out = out;
    const auto dot = dos_out.rfind(".csv");
    dos_out = (dot == std::string::npos ? dos_out : dos_out.substr(0, dot)) + "_dos.csv";
    m.write(dos_out, io::curve_to_csv(res.dos_curve->as_curve()));
  }
  std::printf("N=%d: %zu grid points, %zu flagged -> %s\n", N, grid.size(), flagged, out.c_str());

  if (a.check_concavity) {
    const ValidationReport r = concavity_check(res.combined);
    m.write(output_path(a.out_dir, "micro_concavity.json"), r.to_json().dump(2) + "\n");
    m.set_result("concavity_passed", r.passed());
    std::printf("weak concavity: %s\n", r.passed() ? "pass" : "FAIL");
    return r.passed() ? kPass : kCheckFailed;
  }
  return kPass;
}

}  // namespace ensemble_lab::cli
