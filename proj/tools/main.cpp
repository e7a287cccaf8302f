#include <cstdio>
#include <filesystem>
#include <functional>
#include <memory>

#include <CLI11.hpp>

#include "commands.hpp"
#include "common.hpp"
#include "ensemble_lab/error.hpp"

using namespace ensemble_lab;
using namespace ensemble_lab::cli;

namespace {

int exit_code_for(const LabError& e) {
  switch (e.kind()) {
    case ErrorKind::usage:
    case ErrorKind::configuration:
    case ErrorKind::data:
      return kUsageError;
    default:
      return kCheckFailed;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ensemble_lab: microcanonical and canonical mean-field ensembles"};
  app.require_subcommand(1);
  std::string manifest_path;
  app.add_option("--manifest", manifest_path, "Run manifest path (default: <out-dir>/manifest.json)");

  ValidateArgs va;
  MicroArgs mi;
  MacroArgs ma;
  DualityArgs du;
  CriticalArgs cr;
  DemoArgs de;
  PlotArgs pl;
  std::function<int(io::RunManifest&)> run;
  std::string out_dir = ".";

  auto* v = app.add_subcommand("validate", "Check a model against the structural assumptions");
  v->add_option("--model", va.model, "Model JSON")->required();
  v->add_option("--checks", va.checks, "homogeneous, psh, weak_pd, monotone")->delimiter(',');
  v->add_option("--points", va.points, "Random domain points for the weak positive-definiteness test");
  v->add_option("--seed", va.seed, "Seed for the random points (else the model's)");
  v->add_option("--out-dir", va.out_dir, "Output directory");
  v->callback([&] { run = [&](io::RunManifest& m) { return run_validate(va, m); }; out_dir = va.out_dir; });

  auto* mic = app.add_subcommand("micro", "Finite-N tail entropies S_+/S_-");
  mic->add_option("--model", mi.model, "Model JSON")->required();
  mic->add_option("--N", mi.N, "Particle number (overrides the model)");
  mic->add_option("--e-grid", mi.e_grid, "min:max:steps")->required();
  mic->add_option("--samples", mi.samples, "Direct Monte Carlo samples");
  mic->add_option("--seed", mi.seed, "Run seed (else the model's)");
  mic->add_option("--direction", mi.direction, "upper|lower")->check(CLI::IsMember({"upper", "lower"}));
  mic->add_option("--estimator", mi.estimator, "direct|dos")->check(CLI::IsMember({"direct", "dos"}));
  mic->add_option("--out", mi.out, "Output CSV (default <out-dir>/micro.csv)");
  mic->add_option("--wl-replicas", mi.wl_replicas, "Wang-Landau replicas");
  mic->add_option("--wl-bins", mi.wl_bins, "Wang-Landau bins");
  mic->add_option("--wl-log-f-final", mi.wl_log_f_final, "Final Wang-Landau modification factor");
  mic->add_flag("--check-concavity", mi.check_concavity, "Weak concavity check; exit 1 on failure");
  mic->add_option("--out-dir", mi.out_dir, "Output directory");
  mic->callback([&] { run = [&](io::RunManifest& m) { return run_micro(mi, m); }; out_dir = mi.out_dir; });

  auto* mac = app.add_subcommand("macro", "Mean-field free energy F(beta) and entropy S(e)");
  mac->add_option("--model", ma.model, "Model JSON")->required();
  mac->add_option("--mode", ma.mode, "radial|planar")->check(CLI::IsMember({"radial", "planar"}));
  mac->add_option("--resolution", ma.resolution, "Shells (radial) or cells across (planar)");
  mac->add_option("--truncation", ma.truncation, "Truncation radius for full-space domains");
  mac->add_option("--beta-grid", ma.beta_grid, "min:max:steps");
  mac->add_option("--e-grid", ma.e_grid, "min:max:steps; S(e) is skipped when absent");
  mac->add_option("--damping", ma.damping, "Initial damping theta in (0, 1]");
  mac->add_option("--tol", ma.tol, "l1 residual tolerance");
  mac->add_option("--max-iter", ma.max_iter, "Iteration cap per beta");
  mac->add_option("--start", ma.start, "warm|cold")->check(CLI::IsMember({"warm", "cold"}));
  mac->add_option("--out-prefix", ma.out_prefix, "Prefix of output files (default <out-dir>/macro)");
  mac->add_option("--out-dir", ma.out_dir, "Output directory");
  mac->callback([&] { run = [&](io::RunManifest& m) { return run_macro(ma, m); }; out_dir = ma.out_dir; });

  auto* dua = app.add_subcommand("duality", "Legendre transforms, envelopes and the equivalence gap");
  dua->add_option("--s-curve", du.s_curve, "Entropy CSV");
  dua->add_option("--f-curve", du.f_curve, "Free energy CSV");
  dua->add_option("--window", du.window, "Secant slopes used by the asymptotic slope");
  dua->add_option("--tol-equiv", du.tol_equiv, "Equivalence gap tolerance");
  dua->add_option("--out-prefix", du.out_prefix, "Prefix of output files (default <out-dir>/duality)");
  dua->add_option("--out-dir", du.out_dir, "Output directory");
  dua->callback([&] { run = [&](io::RunManifest& m) { return run_duality(du, m); }; out_dir = du.out_dir; });

  auto* cri = app.add_subcommand("critical", "Analytic, macroscopic and microscopic beta_c");
  cri->add_option("--model", cr.model, "Model JSON")->required();
  cri->add_option("--seed", cr.seed, "Run seed (else the model's)");
  cri->add_option("--N", cr.N, "Particle number of the micro pipeline");
  cri->add_option("--resolution", cr.resolution, "Radial shells");
  cri->add_option("--truncation", cr.truncation, "Truncation radius for full-space domains");
  cri->add_option("--window", cr.window, "Secant slopes used by the asymptotic slope");
  cri->add_option("--rel-tol", cr.rel_tol, "Relative agreement tolerance");
  cri->add_option("--samples", cr.samples, "Direct Monte Carlo samples");
  cri->add_option("--wl-replicas", cr.wl_replicas, "Wang-Landau replicas");
  cri->add_option("--wl-log-f-final", cr.wl_log_f_final, "Final Wang-Landau modification factor");
  cri->add_flag("--skip-micro", cr.skip_micro, "Skip the finite-N pipeline");
  cri->add_flag("--skip-partition", cr.skip_partition, "Skip the Z diagnostic");
  cri->add_option("--out-dir", cr.out_dir, "Output directory");
  cri->callback([&] { run = [&](io::RunManifest& m) { return run_critical(cr, m); }; out_dir = cr.out_dir; });

  auto* dem = app.add_subcommand("demo", "Built-in presets: vortex, catastrophe, born-mayer");
  dem->add_option("name", de.name, "Preset")->required()->check(CLI::IsMember({"vortex", "catastrophe", "born-mayer"}));
  dem->add_option("--seed", de.seed, "Override the preset seed");
  dem->add_option("--out-dir", de.out_dir, "Output directory");
  dem->callback([&] { run = [&](io::RunManifest& m) { return run_demo(de, m); }; out_dir = de.out_dir; });

  auto* plo = app.add_subcommand("plot", "Render CSV curves to SVG");
  plo->add_option("csv", pl.csv, "Curve CSV files")->required();
  plo->add_option("--out", pl.out, "Output SVG (default <out-dir>/plot.svg)");
  plo->add_option("--title", pl.title, "Plot title");
  plo->add_option("--out-dir", pl.out_dir, "Output directory");
  plo->callback([&] { run = [&](io::RunManifest& m) { return run_plot(pl, m); }; out_dir = pl.out_dir; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsageError;
  }

  std::string command;
  for (const auto* sub : app.get_subcommands()) command = sub->get_name();
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == command) {
      for (int k = i + 1; k < argc; ++k) command += std::string(" ") + argv[k];
      break;
    }
  }
  if (manifest_path.empty()) manifest_path = (std::filesystem::path(out_dir) / "manifest.json").string();
  io::RunManifest manifest(command, manifest_path);

  int code = kPass;
  std::string status = "pass";
  try {
    code = run(manifest);
    status = code == kPass ? "pass" : "check failed";
  } catch (const LabError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    code = exit_code_for(e);
    status = e.what();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    code = kUsageError;
    status = e.what();
  }
  try {
    manifest.finish(code, status);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "could not write manifest: %s\n", e.what());
    if (code == kPass) code = kUsageError;
  }
  return code;
}
