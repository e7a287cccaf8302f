#include "ensemble_lab/micro/partition.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ensemble_lab/curve.hpp"
#include "ensemble_lab/error.hpp"
#include "ensemble_lab/micro/configuration.hpp"
#include "ensemble_lab/micro/hamiltonian.hpp"
#include "ensemble_lab/micro/sampling.hpp"

namespace ensemble_lab {

PartitionDiagnostic partition_function_diagnostic(const ModelSpec& model, double beta,
                                                  const std::vector<std::size_t>& sizes,
                                                  std::uint64_t seed, double gamma,
                                                  std::size_t replicates) {
  model.validate();
  require(model.prior.family() == PriorMeasure::Family::gaussian, ErrorKind::configuration,
          "Z diagnostic: only Gaussian priors are supported");
  const int N = model.particles();
  require(N >= 2, ErrorKind::precondition, "Z diagnostic: needs N >= 2");
  require(!sizes.empty() && std::is_sorted(sizes.begin(), sizes.end()), ErrorKind::usage,
          "Z diagnostic: sizes must be non-empty and increasing");
  const int d = model.dim();
  const double sigma = model.prior.sigma();
  const double D = static_cast<double>(d * (N - 1));
  const double rho_s = sigma * std::sqrt(D);
  if (gamma <= 0.0) gamma = 0.1 * (N - 1);

  // log densities of rho under the chi law (scale sigma) and the tail law.
  const double log_chi_norm = (0.5 * D - 1.0) * std::log(2.0) + std::lgamma(0.5 * D) + D * std::log(sigma);
  auto log_chi = [&](double r) {
    return (D - 1.0) * std::log(r) - r * r / (2.0 * sigma * sigma) - log_chi_norm;
  };
  auto log_tail = [&](double r) {
    if (r >= rho_s) return -kInf;
    return std::log(gamma) + gamma * std::log(r / rho_s) - std::log(r);
  };

  ModelSpec pair_model = model;
  pair_model.V = ExteriorPotential::zero();
  const std::size_t M = sizes.back();
  const std::size_t blocks = (M + kSampleBlock - 1) / kSampleBlock;
  require(replicates >= 1, ErrorKind::usage, "Z diagnostic: needs at least one replicate");
  // per size: replicate estimates and standard errors
  std::vector<std::vector<double>> values(sizes.size()), errors(sizes.size());
  std::vector<double> logw(M);
  for (std::size_t rep = 0; rep < replicates; ++rep) {
    for (std::size_t b = 0; b < blocks; ++b) {
      Rng rng = make_rng(seed, rep * blocks + b);
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      std::exponential_distribution<double> expo(gamma);
      Configuration x(d, static_cast<std::size_t>(N));
      std::vector<double> c(d), shifted(d);
      const std::size_t end = std::min(M, (b + 1) * kSampleBlock);
      for (std::size_t s = b * kSampleBlock; s < end; ++s) {
        draw_configuration(model, rng, x);
        std::fill(c.begin(), c.end(), 0.0);
        for (int i = 0; i < N; ++i) {
          for (int k = 0; k < d; ++k) c[k] += x.point(i)[k] / N;
        }
        double rho2 = 0.0;
        for (int i = 0; i < N; ++i) {
          for (int k = 0; k < d; ++k) {
            const double u = x.point(i)[k] - c[k];
            rho2 += u * u;
          }
        }
        const double rho = std::sqrt(rho2);
        // The prior rho is itself a chi draw, so the chi component reuses it.
        const bool use_tail = unif(rng) < 0.5;
        const double rnew = use_tail ? rho_s * std::exp(-expo(rng)) : rho;
        const double lambda = rnew / rho;
        // Pair energies use centred coordinates: c + lambda u would round
        // deep tail draws onto a single point.
        for (int i = 0; i < N; ++i) {
          for (int k = 0; k < d; ++k) x.point(i)[k] = lambda * (x.point(i)[k] - c[k]);
        }
        double H = hamiltonian(pair_model, x);
        if (!model.V.is_zero()) {
          for (int i = 0; i < N; ++i) {
            for (int k = 0; k < d; ++k) shifted[k] = c[k] + x.point(i)[k];
            H += model.V(shifted);
          }
        }
        const double lp = log_chi(rnew);
        const double lq_tail = log_tail(rnew);
        const double lm = std::max(lp, lq_tail);
        const double lq = lm + std::log(0.5 * std::exp(lp - lm) + 0.5 * std::exp(lq_tail - lm));
        logw[s] = lp - lq - beta * H;
      }
    }
    for (std::size_t k = 0; k < sizes.size(); ++k) {
      const std::size_t m = sizes[k];
      require(m >= 2 && m <= M, ErrorKind::usage, "Z diagnostic: bad nested size");
      double mx = -kInf;
      for (std::size_t s = 0; s < m; ++s) mx = std::max(mx, logw[s]);
      double sum = 0.0, sum2 = 0.0;
      for (std::size_t s = 0; s < m; ++s) {
        const double v = std::exp(logw[s] - mx);
        sum += v;
        sum2 += v * v;
      }
      const double mean = sum / m;
      const double var = std::max(0.0, (sum2 / m - mean * mean) * m / (m - 1.0));
      const double scale = std::exp(mx);
      values[k].push_back(mean * scale);
      errors[k].push_back(std::sqrt(var / m) * scale);
    }
  }

  auto median = [](std::vector<double> v) {
    const std::size_t h = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + h, v.end());
    if (v.size() % 2 == 1) return v[h];
    const double hi = v[h];
    return 0.5 * (hi + *std::max_element(v.begin(), v.begin() + h));
  };
  PartitionDiagnostic out;
  out.beta = beta;
  out.N = N;
  out.gamma = gamma;
  out.replicates = replicates;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    out.nested.push_back({sizes[k], median(values[k]), median(errors[k])});
  }
  const auto& first = out.nested.front();
  const auto& last = out.nested.back();
  out.growth = last.value / first.value;
  out.stderr_shrinks = last.std_error <= 0.5 * first.std_error;
  out.unbounded = out.growth > 10.0 && !out.stderr_shrinks;
  std::ostringstream os;
  os << (out.unbounded ? "unbounded" : "bounded") << ": estimate x" << out.growth << " from "
     << first.samples << " to " << last.samples << " samples, stderr " << first.std_error
     << " -> " << last.std_error << " (median of " << replicates << " streams)";
  out.verdict = os.str();
  return out;
}

}  // namespace ensemble_lab
