#include "ensemble_lab/macro/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ensemble_lab/error.hpp"
#include "ensemble_lab/macro/functionals.hpp"
#include "ensemble_lab/micro/concavity.hpp"
#include "ensemble_lab/parallel.hpp"
#include "ensemble_lab/random.hpp"

namespace ensemble_lab {

namespace {

void require_increasing(const std::vector<double>& grid, const char* what) {
  require(!grid.empty(), ErrorKind::usage, std::string(what) + " grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    require(grid[i] > grid[i - 1], ErrorKind::usage, std::string(what) + " grid must be strictly increasing");
  }
}

SolverOptions inner_options(SolverOptions o) {
  if (worker_count() > 1) o.execution = Execution::serial;
  return o;
}

}  // namespace

FreeEnergyCurve free_energy_curve(const DiscretizedModel& dm, const std::vector<double>& beta_grid,
                                  const SolverOptions& options, SweepStart start) {
  require_increasing(beta_grid, "beta");
  const std::size_t n = beta_grid.size();
  std::vector<SolverResult> results(n);

  if (start == SweepStart::cold) {
    const SolverOptions o = inner_options(options);
    parallel_blocks(n, [&](std::size_t i) { results[i] = solve_mean_field(dm, beta_grid[i], o); });
  } else {
    std::size_t origin = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (std::abs(beta_grid[i]) < std::abs(beta_grid[origin])) origin = i;
    }
    results[origin] = solve_mean_field(dm, beta_grid[origin], options);
    for (std::size_t i = origin + 1; i < n; ++i) {
      const GridMeasure& init = results[i - 1].diverged ? prior_measure(dm) : results[i - 1].mu;
      results[i] = solve_mean_field(dm, beta_grid[i], init, options);
    }
    for (std::size_t i = origin; i-- > 0;) {
      const GridMeasure& init = results[i + 1].diverged ? prior_measure(dm) : results[i + 1].mu;
      results[i] = solve_mean_field(dm, beta_grid[i], init, options);
    }
  }

  FreeEnergyCurve out;
  out.curve.provenance = Provenance::macro;
  out.curve.x = beta_grid;
  out.curve.notes.push_back(start == SweepStart::warm ? "warm continuation outward from beta nearest 0"
                                                      : "cold start from the prior at every beta");
  for (std::size_t i = 0; i < n; ++i) {
    const SolverResult& r = results[i];
    out.curve.y.push_back(r.diverged ? -kInf : r.free_energy);
    out.curve.flagged.push_back(r.converged ? 0 : 1);
    out.energies.push_back(r.energy);
    out.entropies.push_back(r.entropy);
    out.iterations.push_back(r.iterations);
    out.residuals.push_back(r.residual);
    out.diverged.push_back(r.diverged ? 1 : 0);
    out.measures.push_back(r.mu);
    if (!r.converged) {
      out.curve.notes.push_back("beta=" + std::to_string(beta_grid[i]) + ": " + r.message);
    }
  }
  out.concavity = ValidationReport("free energy concavity");
  try {
    out.concavity.merge(concavity_check(out.curve, ConcavityOptions{ConcavityMode::weak, 0.0, 2.0, 1e-8}));
  } catch (const LabError& e) {
    out.concavity.add_pass("concavity", 0.0, std::string("not assessed: ") + e.what());
  }
  return out;
}

BetaForEnergy beta_for_energy(const DiscretizedModel& dm, double e, std::pair<double, double> beta_bracket,
                              const EnergyInversionOptions& options) {
  double lo = beta_bracket.first, hi = beta_bracket.second;
  require(std::isfinite(lo) && std::isfinite(hi) && lo < hi, ErrorKind::usage,
          "beta_for_energy: bracket must be finite with lo < hi");
  require(std::isfinite(e), ErrorKind::usage, "beta_for_energy: energy must be finite");

  BetaForEnergy out;
  std::vector<SolverResult> seen;
  auto solve = [&](double beta) -> const SolverResult& {
    const SolverResult* nearest = nullptr;
    for (const SolverResult& s : seen) {
      if (!s.diverged && (nearest == nullptr || std::abs(s.beta - beta) < std::abs(nearest->beta - beta))) {
        nearest = &s;
      }
    }
    SolverResult r = nearest != nullptr ? solve_mean_field(dm, beta, nearest->mu, options.solver)
                                        : solve_mean_field(dm, beta, options.solver);
    ++out.evaluations;
    seen.push_back(std::move(r));
    return seen.back();
  };

  if (options.sweep != nullptr) {
    const FreeEnergyCurve& sw = *options.sweep;
    for (std::size_t i = 0; i + 1 < sw.curve.size(); ++i) {
      const double b0 = sw.curve.x[i], b1 = sw.curve.x[i + 1];
      if (sw.diverged[i] || sw.diverged[i + 1] || b0 < lo || b1 > hi) continue;
      if (sw.energies[i] >= e && sw.energies[i + 1] <= e) {
        lo = b0;
        hi = b1;
        for (std::size_t k : {i, i + 1}) {
          SolverResult seed;
          seed.beta = sw.curve.x[k];
          seed.mu = sw.measures[k];
          seen.push_back(std::move(seed));
        }
        break;
      }
    }
  }

  SolverResult r_hi = solve(hi);
  require(!r_hi.diverged, ErrorKind::bracket,
          "beta_for_energy: solver diverges at the upper bracket end beta=" + std::to_string(hi));
  SolverResult r_lo = solve(lo);
  for (int k = 0; r_lo.diverged && k < 40; ++k) {
    lo += 0.25 * (hi - lo);
    r_lo = solve(lo);
  }
  double g_lo = r_lo.diverged ? kInf : r_lo.energy - e;
  double g_hi = r_hi.energy - e;
  if (!(g_lo >= -options.tol_e && g_hi <= options.tol_e)) {
    fail(ErrorKind::bracket, "beta_for_energy: e=" + std::to_string(e) + " not bracketed: E(beta=" +
                                 std::to_string(lo) + ")=" + std::to_string(r_lo.energy) + ", E(beta=" +
                                 std::to_string(hi) + ")=" + std::to_string(r_hi.energy) +
                                 "; widen the bracket or choose e inside (e_min, e_max)");
  }
  if (std::abs(g_lo) <= options.tol_e) {
    out.beta = lo;
    out.solution = r_lo;
    return out;
  }
  if (std::abs(g_hi) <= options.tol_e) {
    out.beta = hi;
    out.solution = r_hi;
    return out;
  }

  // Illinois false position; bisection when a secant is unavailable.
  int side = 0;
  SolverResult best = std::abs(g_lo) < std::abs(g_hi) ? r_lo : r_hi;
  while (out.evaluations < options.max_evaluations) {
    double beta = std::isfinite(g_lo) && g_lo != g_hi ? hi - g_hi * (hi - lo) / (g_hi - g_lo) : 0.5 * (lo + hi);
    if (!(beta > lo && beta < hi)) beta = 0.5 * (lo + hi);
    const SolverResult& r = solve(beta);
    const double g = r.diverged ? kInf : r.energy - e;
    if (!r.diverged && std::abs(g) < std::abs(best.energy - e)) best = r;
    if (std::abs(g) <= options.tol_e) break;
    if (g > 0.0) {
      lo = beta;
      g_lo = g;
      if (side == -1 && std::isfinite(g_hi)) g_hi *= 0.5;
      side = -1;
    } else {
      hi = beta;
      g_hi = g;
      if (side == 1 && std::isfinite(g_lo)) g_lo *= 0.5;
      side = 1;
    }
    if (hi - lo <= 1e-15 * (1.0 + std::abs(hi))) break;
  }
  out.beta = best.beta;
  out.solution = std::move(best);
  if (std::abs(out.solution.energy - e) > options.tol_e) {
    out.solution.message += (out.solution.message.empty() ? "" : "; ") +
                            std::string("energy tolerance not reached: |E-e|=") +
                            std::to_string(std::abs(out.solution.energy - e));
  }
  return out;
}

EntropyCurve entropy_curve_direct(const DiscretizedModel& dm, const std::vector<double>& e_grid,
                                  std::pair<double, double> beta_bracket,
                                  const EnergyInversionOptions& options) {
  require_increasing(e_grid, "energy");
  const std::size_t n = e_grid.size();
  std::vector<BetaForEnergy> sol(n);
  EnergyInversionOptions o = options;
  o.solver = inner_options(options.solver);
  parallel_blocks(n, [&](std::size_t i) { sol[i] = beta_for_energy(dm, e_grid[i], beta_bracket, o); });

  EntropyCurve out;
  out.curve.provenance = Provenance::macro;
  out.curve.x = e_grid;
  for (std::size_t i = 0; i < n; ++i) {
    const SolverResult& r = sol[i].solution;
    out.curve.y.push_back(r.entropy);
    const bool bad = !r.converged || std::abs(r.energy - e_grid[i]) > options.tol_e;
    out.curve.flagged.push_back(bad ? 1 : 0);
    if (bad) out.curve.notes.push_back("e=" + std::to_string(e_grid[i]) + ": " + r.message);
    out.betas.push_back(sol[i].beta);
    out.measures.push_back(r.mu);
  }
  return out;
}

namespace {

EnergyBound energy_extreme(const DiscretizedModel& dm, std::size_t random_starts, std::uint64_t seed,
                           std::size_t iterations, double sign) {
  const std::size_t n = dm.size();
  EnergyBound best;
  best.value = -kInf;
  auto consider = [&](const Eigen::VectorXd& mu) {
    const double v = sign * energy(dm, GridMeasure{dm.grid_id, mu, dm.prior});
    if (v > best.value) {
      best.value = v;
      best.argmax = GridMeasure{dm.grid_id, mu, dm.prior};
    }
  };

  // Point masses.
  for (std::size_t j = 0; j < n; ++j) {
    const double v = sign * (0.5 * dm.W(j, j) + dm.V(j));
    if (v > best.value) {
      Eigen::VectorXd mu = Eigen::VectorXd::Zero(n);
      mu(j) = 1.0;
      best.value = v;
      best.argmax = GridMeasure{dm.grid_id, mu, dm.prior};
    }
  }

  std::vector<Eigen::VectorXd> starts{dm.prior};
  for (std::size_t k = 0; k < random_starts; ++k) {
    Rng rng = make_rng(seed, k);
    std::exponential_distribution<double> ex(1.0);
    Eigen::VectorXd mu(n);
    for (std::size_t j = 0; j < n; ++j) mu(j) = ex(rng);
    starts.push_back(mu / mu.sum());
  }
  best.starts = starts.size() + n;
  std::vector<Eigen::VectorXd> finals(starts.size());
  parallel_blocks(starts.size(), [&](std::size_t k) {
    Eigen::VectorXd mu = starts[k];
    Eigen::VectorXd phi;
    for (std::size_t it = 0; it < iterations; ++it) {
      phi = sign * mean_field_potential(dm, mu, Execution::serial);
      const double m = phi.minCoeff(), M = phi.maxCoeff();
      if (!(M > m)) break;
      // Multiplicative update with positive fitness phi - min + slack.
      mu = mu.cwiseProduct((phi.array() - m + 1e-3 * (M - m)).matrix());
      mu /= mu.sum();
    }
    finals[k] = mu;
  });
  for (const auto& mu : finals) consider(mu);
  best.value *= sign;
  best.note = sign > 0 ? "lower bound on e_max over the grid simplex" : "upper bound on e_min over the grid simplex";
  return best;
}

}  // namespace

EnergyBound estimate_e_max(const DiscretizedModel& dm, std::size_t random_starts, std::uint64_t seed,
                           std::size_t iterations) {
  return energy_extreme(dm, random_starts, seed, iterations, 1.0);
}

EnergyBound estimate_e_min(const DiscretizedModel& dm, std::size_t random_starts, std::uint64_t seed,
                           std::size_t iterations) {
  return energy_extreme(dm, random_starts, seed, iterations, -1.0);
}

}  // namespace ensemble_lab
