#include "ensemble_lab/duality/critical.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "ensemble_lab/error.hpp"
#include "ensemble_lab/macro/functionals.hpp"
#include "ensemble_lab/micro/sampling.hpp"
#include "ensemble_lab/model/checks.hpp"
#include "ensemble_lab/random.hpp"

namespace ensemble_lab {

double beta_c_analytic(const RadialProfile& w, int d) {
  require(d >= 1, ErrorKind::usage, "beta_c_analytic: dimension must be >= 1");
  const double wd = dot_w(w);
  if (wd > 0.0) fail(ErrorKind::model, "beta_c_analytic: w_dot = " + std::to_string(wd) + " > 0, profile not decreasing");
  if (wd == 0.0) return -kInf;
  return 2.0 * d / wd;
}

namespace {

std::vector<double> descending_beta_grid(double floor) {
  std::vector<double> g;
  for (int k = 0; k <= 100; ++k) g.push_back(-0.05 * k);
  for (double b = -5.0 * 1.25; b >= floor; b *= 1.25) g.push_back(b);
  std::reverse(g.begin(), g.end());
  return g;
}

std::size_t median_cell(const Eigen::VectorXd& mu) {
  double c = 0.0;
  for (Eigen::Index k = 0; k < mu.size(); ++k) {
    c += mu(k);
    if (c >= 0.5) return static_cast<std::size_t>(k);
  }
  return static_cast<std::size_t>(mu.size()) - 1;
}

bool singular_at_zero(const ModelSpec& model) {
  const RadialProfile* p = model.W.profile();
  return p != nullptr && !std::isfinite(p->limit_at_zero());
}

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const auto k = static_cast<std::size_t>(q * static_cast<double>(v.size() - 1));
  return v[k];
}

}  // namespace

MacroTail macro_entropy_tail(const ModelSpec& model, const MacroTailOptions& options) {
  const DiscretizationMode mode = model.is_radial() ? DiscretizationMode::radial : DiscretizationMode::planar;
  const DiscretizedModel dm = discretize(model, mode, options.grid);
  MacroTail out;
  out.grid_id = dm.grid_id;
  out.notes = dm.warnings;
  out.e0 = energy(dm, prior_measure(dm));

  const std::vector<double> betas = descending_beta_grid(options.beta_floor);
  out.sweep = free_energy_curve(dm, betas, options.solver, SweepStart::warm);

  const bool guard = singular_at_zero(model) && mode == DiscretizationMode::radial;
  std::size_t top = betas.size() - 1;  // beta = 0
  for (std::size_t i = betas.size(); i-- > 0;) {
    if (out.sweep.diverged[i] || out.sweep.curve.is_flagged(i)) break;
    if (guard && static_cast<double>(median_cell(out.sweep.measures[i].weights)) < options.min_core_cells) break;
    top = i;
  }
  require(top + 1 < betas.size(), ErrorKind::insufficient_data,
          "macro tail: no resolvable negative-temperature state");
  out.beta_top = betas[top];
  out.e_top = out.sweep.energies[top];
  if (guard) {
    out.notes.push_back("window ends at beta=" + std::to_string(out.beta_top) + " where the median radius reaches " +
                        std::to_string(options.min_core_cells) + " cells");
  } else {
    out.notes.push_back("window ends at the last converged beta=" + std::to_string(out.beta_top));
  }

  std::vector<double> e_grid;
  const double e_start = out.e0 + 0.25 * (out.e_top - out.e0);
  for (std::size_t k = 0; k < options.e_points; ++k) {
    e_grid.push_back(e_start + (out.e_top - e_start) * static_cast<double>(k) /
                                   static_cast<double>(options.e_points - 1));
  }
  e_grid.back() = out.e_top;
  EnergyInversionOptions inv;
  inv.solver = options.solver;
  inv.sweep = &out.sweep;
  out.entropy = entropy_curve_direct(dm, e_grid, {out.beta_top, 0.0}, inv);
  out.slope = asymptotic_slope(out.entropy.curve, options.window);
  return out;
}

MicroTail micro_entropy_tail(const ModelSpec& model, const MicroTailOptions& options, std::uint64_t seed) {
  ModelSpec m = model;
  m.N = options.N;
  m.validate();
  double lo = options.e_lo, hi = options.e_hi;
  if (std::isnan(lo) || std::isnan(hi)) {
    const std::vector<double> pilot = sample_energies(m, 20000, stream_seed(seed, 3));
    const double q30 = quantile(pilot, 0.3), q999 = quantile(pilot, 0.999);
    if (std::isnan(lo)) lo = q30;
    if (std::isnan(hi)) {
      const RadialProfile* p = m.W.profile();
      if (p != nullptr && std::isfinite(p->limit_at_zero()) && m.V.is_zero()) {
        // All particles at one point maximize H/N for a decreasing profile.
        hi = 0.95 * (options.N - 1) / (2.0 * options.N) * p->limit_at_zero();
      } else {
        hi = q999 + 4.0 * (q999 - q30);
      }
    }
  }
  require(hi > lo, ErrorKind::usage, "micro tail: empty energy range");
  MicroTail out;
  for (std::size_t k = 0; k < options.e_points; ++k) {
    out.e_grid.push_back(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(options.e_points - 1));
  }
  out.tail = estimate_tail(m, out.e_grid, TailDirection::upper, options.pipeline, seed);
  out.slope = asymptotic_slope(out.tail.combined.as_curve(), options.window);
  return out;
}

CriticalBetaReport critical_beta_crosscheck(const ModelSpec& model, const CrossCheckOptions& options,
                                            std::uint64_t seed) {
  model.validate();
  CriticalBetaReport rep;
  const RadialProfile* w = model.W.profile();
  if (w == nullptr) {
    rep.errors.push_back("analytic: kernel is not radial");
  } else {
    try {
      rep.w_dot = dot_w(*w);
      rep.beta_analytic = beta_c_analytic(*w, model.dim());
    } catch (const LabError& e) {
      rep.errors.push_back(std::string("analytic: ") + e.what());
    }
  }

  auto macro_job = std::async(std::launch::async, [&]() -> std::optional<MacroTail> {
    if (!options.run_macro) return std::nullopt;
    return macro_entropy_tail(model, options.macro);
  });
  auto micro_job = std::async(std::launch::async, [&]() -> std::optional<MicroTail> {
    if (!options.run_micro) return std::nullopt;
    return micro_entropy_tail(model, options.micro, stream_seed(seed, 10));
  });
  const double ba = rep.beta_analytic;
  auto z_job = std::async(std::launch::async, [&]() {
    std::vector<PartitionDiagnostic> z;
    if (!options.run_partition || !std::isfinite(ba)) return z;
    ModelSpec m = model;
    m.N = options.z_N;
    for (double f : {1.0 - options.z_margin, 1.0 + options.z_margin}) {
      z.push_back(partition_function_diagnostic(m, ba * f, options.z_sizes, stream_seed(seed, 20)));
    }
    return z;
  });

  try {
    if (auto mt = macro_job.get()) {
      rep.macro_slope = mt->slope;
      rep.beta_macro = mt->slope.value;
      rep.macro_curve = mt->entropy.curve;
      for (const auto& n : mt->notes) rep.notes.push_back("macro: " + n);
    }
  } catch (const std::exception& e) {
    rep.errors.push_back(std::string("macro: ") + e.what());
  }
  try {
    if (auto mt = micro_job.get()) {
      rep.micro_slope = mt->slope;
      rep.beta_micro = mt->slope.value;
      rep.micro_curve = mt->tail.combined.as_curve();
      for (const auto& n : mt->tail.notes) rep.notes.push_back("micro: " + n);
    }
  } catch (const std::exception& e) {
    rep.errors.push_back(std::string("micro: ") + e.what());
  }
  try {
    rep.partition = z_job.get();
    if (options.run_partition && !std::isfinite(ba)) rep.notes.push_back("Z diagnostic skipped: no finite analytic beta_c");
  } catch (const std::exception& e) {
    rep.errors.push_back(std::string("partition: ") + e.what());
  }

  auto agrees = [&](double b, const AsymptoticSlope& s) {
    if (std::isnan(b)) return false;
    if (std::isinf(ba)) return s.consistent_with_minus_infinity;
    return std::abs(b - ba) <= options.rel_tol * std::abs(ba);
  };
  rep.macro_agrees = agrees(rep.beta_macro, rep.macro_slope);
  rep.micro_agrees = agrees(rep.beta_micro, rep.micro_slope);
  rep.notes.push_back("sign convention: beta_c = 2d / w_dot (non-positive for repulsive profiles)");
  return rep;
}

}  // namespace ensemble_lab
