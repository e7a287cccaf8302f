#include "ensemble_lab/micro/wang_landau.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ensemble_lab/curve.hpp"
#include "ensemble_lab/error.hpp"
#include "ensemble_lab/micro/configuration.hpp"
#include "ensemble_lab/micro/sampling.hpp"
#include "ensemble_lab/parallel.hpp"

namespace ensemble_lab {

std::size_t DosEstimate::state_of(double e) const {
  const std::size_t offset = has_underflow ? 1 : 0;
  const std::size_t bins = edges.size() - 1;
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  if (!(e >= edges.front())) return has_underflow && !std::isnan(e) ? 0 : none;
  if (e >= edges.back()) return has_overflow ? offset + bins : none;
  const double w = (edges.back() - edges.front()) / static_cast<double>(bins);
  auto k = static_cast<std::size_t>((e - edges.front()) / w);
  k = std::min(k, bins - 1);
  // Guard the floor against rounding at bin edges.
  if (e < edges[k] && k > 0) --k;
  if (e >= edges[k + 1] && k + 1 < bins) ++k;
  return offset + k;
}

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

double log_sum_exp(const std::vector<double>& v) {
  double m = -kInf;
  for (double x : v) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) {
    if (std::isfinite(x)) s += std::exp(x - m);
  }
  return m + std::log(s);
}

// N-particle state with cached pair and one-body terms.
class Walker {
 public:
  Walker(const ModelSpec& model, Configuration x)
      : model_(model), N_(static_cast<int>(x.size())), d_(x.dim), x_(std::move(x)),
        pair_(static_cast<std::size_t>(N_) * N_, 0.0), one_(N_, 0.0), psi_(N_, 0.0) {
    recompute();
  }

  void recompute() {
    pair_sum_ = 0.0;
    for (int i = 0; i < N_; ++i) {
      for (int j = i + 1; j < N_; ++j) {
        const double w = model_.W.is_zero() ? 0.0 : model_.W(x_.point(i), x_.point(j));
        pair_[idx(i, j)] = pair_[idx(j, i)] = w;
        pair_sum_ += w;
      }
    }
    one_sum_ = 0.0;
    for (int i = 0; i < N_; ++i) {
      one_[i] = model_.V.is_zero() ? 0.0 : model_.V(x_.point(i));
      one_sum_ += one_[i];
      psi_[i] = model_.prior.neg_log_density(x_.point(i));
    }
  }

  double energy() const { return (pair_sum_ / N_ + one_sum_) / N_; }
  int particles() const { return N_; }
  int dim() const { return d_; }
  const Configuration& config() const { return x_; }

  // Single-particle proposal; fills the candidate and returns its energy and
  // log prior ratio. Returns false when the point leaves the domain.
  bool propose_single(int i, std::span<const double> y, double& e_new, double& log_prior_ratio) {
    if (!model_.domain.contains(y)) return false;
    cand_row_.resize(N_);
    double dpair = 0.0;
    for (int j = 0; j < N_; ++j) {
      if (j == i) continue;
      const double w = model_.W.is_zero() ? 0.0 : model_.W(y, x_.point(j));
      cand_row_[j] = w;
      dpair += w - pair_[idx(i, j)];
    }
    cand_one_ = model_.V.is_zero() ? 0.0 : model_.V(y);
    cand_psi_ = model_.prior.neg_log_density(y);
    cand_i_ = i;
    cand_pair_sum_ = pair_sum_ + dpair;
    cand_one_sum_ = one_sum_ + (cand_one_ - one_[i]);
    e_new = (cand_pair_sum_ / N_ + cand_one_sum_) / N_;
    log_prior_ratio = -(cand_psi_ - psi_[i]);
    return std::isfinite(e_new) && std::isfinite(log_prior_ratio);
  }

  void accept_single(std::span<const double> y) {
    const int i = cand_i_;
    std::copy(y.begin(), y.end(), x_.point(i).begin());
    for (int j = 0; j < N_; ++j) {
      if (j == i) continue;
      pair_[idx(i, j)] = pair_[idx(j, i)] = cand_row_[j];
    }
    one_[i] = cand_one_;
    psi_[i] = cand_psi_;
    pair_sum_ = cand_pair_sum_;
    one_sum_ = cand_one_sum_;
  }

  // Dilation x_j -> c + lambda (x_j - c) about the centroid c.
  bool propose_dilation(double lambda, Walker& scratch, double& e_new, double& log_prior_ratio) {
    std::vector<double> c(d_, 0.0);
    for (int j = 0; j < N_; ++j) {
      for (int k = 0; k < d_; ++k) c[k] += x_.point(j)[k];
    }
    for (double& v : c) v /= N_;
    for (int j = 0; j < N_; ++j) {
      auto p = scratch.x_.point(j);
      for (int k = 0; k < d_; ++k) p[k] = c[k] + lambda * (x_.point(j)[k] - c[k]);
      if (!model_.domain.contains(p)) return false;
    }
    scratch.recompute();
    double dpsi = 0.0;
    for (int j = 0; j < N_; ++j) dpsi += scratch.psi_[j] - psi_[j];
    e_new = scratch.energy();
    log_prior_ratio = -dpsi;
    return std::isfinite(e_new) && std::isfinite(log_prior_ratio);
  }

  void assign(const Walker& other) {
    x_ = other.x_;
    pair_ = other.pair_;
    one_ = other.one_;
    psi_ = other.psi_;
    pair_sum_ = other.pair_sum_;
    one_sum_ = other.one_sum_;
  }

  std::span<const double> point(int i) const { return x_.point(i); }

 private:
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * N_ + j; }

  const ModelSpec& model_;
  int N_;
  int d_;
  Configuration x_;
  std::vector<double> pair_;
  std::vector<double> one_;
  std::vector<double> psi_;
  double pair_sum_ = 0.0;
  double one_sum_ = 0.0;

  std::vector<double> cand_row_;
  double cand_one_ = 0.0;
  double cand_psi_ = 0.0;
  double cand_pair_sum_ = 0.0;
  double cand_one_sum_ = 0.0;
  int cand_i_ = 0;
};

struct ReplicaResult {
  std::vector<double> log_g;
  std::vector<double> flatness_history;
  std::vector<double> log_f_schedule;
  double acceptance = 0.0;
  double scale = 0.0;
  std::size_t moves = 0;
};

std::string histogram_dump(const std::vector<std::size_t>& hist, const DosEstimate& shape) {
  std::ostringstream os;
  os << "histogram (state: count):";
  for (std::size_t k = 0; k < hist.size(); ++k) {
    os << ' ' << k << ':' << hist[k];
  }
  os << " [edges " << shape.edges.front() << " .. " << shape.edges.back() << "]";
  return os.str();
}

ReplicaResult run_replica(const ModelSpec& model, const DosEstimate& shape,
                          const WangLandauParams& p, std::uint64_t seed, std::size_t replica) {
  Rng rng = make_rng(seed, replica);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  const int N = model.particles();
  const int d = model.dim();
  const std::size_t S = shape.edges.size() - 1 + (shape.has_underflow ? 1 : 0) +
                        (shape.has_overflow ? 1 : 0);

  // Start from a prior draw inside the allowed states.
  Configuration x0(d, static_cast<std::size_t>(N));
  std::size_t state = kNone;
  for (int attempt = 0; attempt < 100000 && state == kNone; ++attempt) {
    draw_configuration(model, rng, x0);
    Walker probe(model, x0);
    state = shape.state_of(probe.energy());
  }
  require(state != kNone, ErrorKind::precondition,
          "DOS: no prior draw lands in the energy range; add an underflow/overflow state");
  Walker w(model, x0);
  Walker scratch(model, x0);

  std::vector<double> lg(S, 0.0);
  std::vector<std::size_t> hist(S, 0);
  std::vector<std::uint8_t> seen(S, 0);
  double lnf = p.log_f_initial;

  // Typical single-particle scale from the prior.
  double scale = model.domain.is_ball() ? 0.5 * model.domain.radius : model.prior.sigma();
  const double dil_prob = N > 1 ? p.dilation_probability : 0.0;
  std::vector<double> y(d);

  std::size_t tried = 0, accepted = 0;
  auto step = [&]() {
    double e_new = 0.0, lpr = 0.0;
    bool ok = false;
    bool dilation = unif(rng) < dil_prob;
    if (dilation) {
      const double ll = p.dilation_log_step * (2.0 * unif(rng) - 1.0);
      ok = w.propose_dilation(std::exp(ll), scratch, e_new, lpr);
      lpr += d * (N - 1) * ll;  // Jacobian lambda^{d(N-1)}
    } else {
      const int i = static_cast<int>(unif(rng) * N) % N;
      const auto level = static_cast<std::size_t>(unif(rng) * p.scale_levels) % p.scale_levels;
      const double s = scale * std::pow(0.25, static_cast<double>(level));
      for (int k = 0; k < d; ++k) y[k] = w.point(i)[k] + s * normal(rng);
      ok = w.propose_single(i, y, e_new, lpr);
      ++tried;
    }
    if (ok) {
      const std::size_t b = shape.state_of(e_new);
      if (b != kNone) {
        const double la = lpr + lg[state] - lg[b];
        if (la >= 0.0 || std::log(unif(rng)) < la) {
          if (dilation) {
            w.assign(scratch);
          } else {
            w.accept_single(y);
            ++accepted;
          }
          state = b;
        }
      }
    }
    lg[state] += lnf;
    ++hist[state];
    seen[state] = 1;
  };

  // Burn-in: adapt the single-particle scale towards 30-50% acceptance.
  for (std::size_t m = 0; m < p.burn_in_moves; ++m) {
    step();
    if (tried >= 1000) {
      const double rate = static_cast<double>(accepted) / tried;
      if (rate < 0.3) scale *= 0.8;
      if (rate > 0.5) scale *= 1.25;
      tried = accepted = 0;
    }
    if ((m + 1) % p.recompute_interval == 0) w.recompute();
  }
  std::fill(hist.begin(), hist.end(), 0);
  tried = accepted = 0;

  ReplicaResult out;
  out.scale = scale;
  bool stage_one = true;
  std::size_t moves = 0;
  const double states = static_cast<double>(S);
  while (lnf > p.log_f_final) {
    step();
    ++moves;
    if (moves % p.recompute_interval == 0) {
      w.recompute();
      const std::size_t b = shape.state_of(w.energy());
      if (b != kNone) state = b;
    }
    if (stage_one) {
      if (moves % p.check_interval == 0) {
        std::size_t lo = static_cast<std::size_t>(-1);
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t k = 0; k < S; ++k) {
          if (!seen[k]) continue;
          lo = std::min(lo, hist[k]);
          sum += static_cast<double>(hist[k]);
          ++count;
        }
        const double mean = sum / static_cast<double>(count);
        const double ratio = mean > 0 ? static_cast<double>(lo) / mean : 0.0;
        if (ratio >= p.flatness) {
          lnf *= 0.5;
          std::fill(hist.begin(), hist.end(), 0);
          if (replica == 0) {
            out.flatness_history.push_back(ratio);
            out.log_f_schedule.push_back(lnf);
          }
          if (lnf <= states / static_cast<double>(moves)) stage_one = false;
        }
      }
    } else {
      lnf = states / static_cast<double>(moves);
      if (replica == 0 && (moves & (moves - 1)) == 0) out.log_f_schedule.push_back(lnf);
    }
    if (moves >= p.max_moves) {
      fail(ErrorKind::budget, "DOS: replica " + std::to_string(replica) +
                                  " did not converge within " + std::to_string(p.max_moves) +
                                  " moves (log f = " + std::to_string(lnf) + "); " +
                                  histogram_dump(hist, shape));
    }
  }
  for (std::size_t k = 0; k < S; ++k) {
    if (!seen[k]) lg[k] = -kInf;
  }
  const double z = log_sum_exp(lg);
  for (double& v : lg) v -= z;
  out.log_g = std::move(lg);
  out.acceptance = tried > 0 ? static_cast<double>(accepted) / tried : 0.0;
  out.moves = moves;
  return out;
}

}  // namespace

DosEstimate tail_logprob_dos(const ModelSpec& model, double e_lo, double e_hi,
                             const WangLandauParams& params, std::uint64_t seed) {
  model.validate();
  require(e_hi > e_lo, ErrorKind::usage, "DOS: need e_lo < e_hi");
  require(params.bins >= 2, ErrorKind::usage, "DOS: need at least 2 bins");
  require(params.replicas >= 2, ErrorKind::usage, "DOS: need at least 2 replicas for error bars");
  require(params.scale_levels >= 1, ErrorKind::usage, "DOS: need at least one step scale");
  require(params.log_f_final > 0.0 && params.log_f_final < params.log_f_initial, ErrorKind::usage,
          "DOS: need 0 < log_f_final < log_f_initial");

  DosEstimate dos;
  dos.N = model.particles();
  dos.has_underflow = params.underflow_bin;
  dos.has_overflow = params.overflow_bin;
  dos.edges.resize(params.bins + 1);
  for (std::size_t k = 0; k <= params.bins; ++k) {
    dos.edges[k] = e_lo + (e_hi - e_lo) * static_cast<double>(k) / static_cast<double>(params.bins);
  }
  dos.edges.back() = e_hi;

  std::vector<ReplicaResult> results(params.replicas);
  parallel_blocks(params.replicas, [&](std::size_t r) {
    results[r] = run_replica(model, dos, params, seed, r);
  });

  const std::size_t S = results[0].log_g.size();
  const double R = static_cast<double>(params.replicas);
  dos.log_g.assign(S, -kInf);
  dos.log_g_stderr.assign(S, kNaN);
  for (std::size_t k = 0; k < S; ++k) {
    double sum = 0.0, sum2 = 0.0;
    bool finite = true;
    for (const auto& r : results) {
      finite = finite && std::isfinite(r.log_g[k]);
      sum += r.log_g[k];
      sum2 += r.log_g[k] * r.log_g[k];
    }
    if (!finite) continue;
    const double mean = sum / R;
    const double var = std::max(0.0, (sum2 - R * mean * mean) / (R - 1.0));
    dos.log_g[k] = mean;
    dos.log_g_stderr[k] = std::sqrt(var / R);
  }
  for (auto& r : results) {
    dos.replica_log_g.push_back(r.log_g);
    dos.acceptance.push_back(r.acceptance);
    dos.moves.push_back(r.moves);
  }
  dos.flatness_history = results[0].flatness_history;
  dos.log_f_schedule = results[0].log_f_schedule;
  dos.proposal_scale = results[0].scale;
  return dos;
}

namespace {

// log P(tail) at every finite edge for one replica's log g.
std::vector<double> edge_tails(const DosEstimate& dos, const std::vector<double>& lg,
                               TailDirection direction) {
  const std::size_t bins = dos.edges.size() - 1;
  const std::size_t offset = dos.has_underflow ? 1 : 0;
  std::vector<double> out(bins + 1);
  for (std::size_t k = 0; k <= bins; ++k) {
    std::vector<double> part;
    if (direction == TailDirection::upper) {
      for (std::size_t s = offset + k; s < lg.size(); ++s) part.push_back(lg[s]);
    } else {
      for (std::size_t s = 0; s < offset + k; ++s) part.push_back(lg[s]);
    }
    out[k] = part.empty() ? -kInf : log_sum_exp(part);
  }
  return out;
}

}  // namespace

TailCurve dos_tail_curve(const DosEstimate& dos, std::span<const double> e_grid,
                         TailDirection direction) {
  TailCurve out;
  out.direction = direction;
  out.N = dos.N;
  const std::size_t bins = dos.edges.size() - 1;
  const double lo = dos.edges.front(), hi = dos.edges.back();
  const double width = (hi - lo) / static_cast<double>(bins);
  std::vector<std::vector<double>> tails;
  for (const auto& lg : dos.replica_log_g) tails.push_back(edge_tails(dos, lg, direction));
  const double R = static_cast<double>(tails.size());

  for (double e : e_grid) {
    out.e.push_back(e);
    out.hits.push_back(0);
    if (e < lo - 1e-12 * std::abs(lo) || e > hi + 1e-12 * std::abs(hi)) {
      out.value.push_back(kNaN);
      out.std_error.push_back(kNaN);
      out.flagged.push_back(1);
      continue;
    }
    double pos = std::clamp((e - lo) / width, 0.0, static_cast<double>(bins));
    auto k = static_cast<std::size_t>(std::floor(pos));
    if (k >= bins) k = bins - 1;
    const double t = pos - static_cast<double>(k);
    double sum = 0.0, sum2 = 0.0;
    bool finite = true;
    for (const auto& tr : tails) {
      // Tail probabilities fall by orders of magnitude across a bin: the
      // density is taken exponential there (log-linear tail). An empty
      // edge (-inf) falls back to a flat density.
      double v = tr[k];
      if (t > 0.0) {
        const double a = tr[k], b = tr[k + 1];
        if (std::isfinite(a) && std::isfinite(b)) {
          v = (1.0 - t) * a + t * b;
        } else {
          const double m = std::max(a, b);
          v = std::isfinite(m) ? m + std::log((1.0 - t) * std::exp(a - m) + t * std::exp(b - m)) : -kInf;
        }
      }
      finite = finite && std::isfinite(v);
      sum += v;
      sum2 += v * v;
    }
    if (!finite) {
      out.value.push_back(kNaN);
      out.std_error.push_back(kNaN);
      out.flagged.push_back(1);
      continue;
    }
    const double mean = sum / R;
    const double var = std::max(0.0, (sum2 - R * mean * mean) / (R - 1.0));
    out.value.push_back(mean / dos.N);
    out.std_error.push_back(std::sqrt(var / R) / dos.N);
    out.flagged.push_back(0);
  }
  out.notes.push_back("density-of-states estimate, " + std::to_string(tails.size()) + " replicas");
  return out;
}

AnchoredTail anchor_dos_tail(const TailCurve& dos, const TailCurve& direct) {
  require(dos.e.size() == direct.e.size(), ErrorKind::usage, "anchor: grids differ in size");
  for (std::size_t i = 0; i < dos.e.size(); ++i) {
    require(dos.e[i] == direct.e[i], ErrorKind::usage, "anchor: grids differ");
  }
  require(dos.direction == direct.direction, ErrorKind::usage, "anchor: tail directions differ");
  double sw = 0.0, swd = 0.0;
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < dos.e.size(); ++i) {
    const bool a = !direct.flagged[i] && std::isfinite(direct.value[i]);
    const bool b = !dos.flagged[i] && std::isfinite(dos.value[i]);
    if (!a || !b) continue;
    const double var = direct.std_error[i] * direct.std_error[i] + dos.std_error[i] * dos.std_error[i];
    const double wgt = 1.0 / std::max(var, 1e-30);
    sw += wgt;
    swd += wgt * (direct.value[i] - dos.value[i]);
    idx.push_back(i);
  }
  require(idx.size() >= 3, ErrorKind::precondition,
          "anchor: DOS range overlaps the directly reachable region in fewer than 3 points");
  AnchoredTail out;
  out.offset = swd / sw;
  out.offset_stderr = 1.0 / std::sqrt(sw);
  out.overlap = idx.size();
  out.curve = dos;
  for (std::size_t i = 0; i < out.curve.e.size(); ++i) {
    if (!std::isfinite(out.curve.value[i])) continue;
    out.curve.value[i] += out.offset;
    out.curve.std_error[i] = std::hypot(out.curve.std_error[i], out.offset_stderr);
  }
  double gap = 0.0, pooled = 0.0;
  for (std::size_t i : idx) {
    gap += std::abs(direct.value[i] - out.curve.value[i]);
    pooled += direct.std_error[i] * direct.std_error[i] + dos.std_error[i] * dos.std_error[i];
  }
  out.mean_abs_gap = gap / static_cast<double>(idx.size());
  out.pooled_stderr = std::sqrt(pooled / static_cast<double>(idx.size()));
  out.curve.notes.push_back("anchored to direct estimate on " + std::to_string(idx.size()) +
                            " points, offset " + std::to_string(out.offset));
  return out;
}

TailCurve combine_tails(const TailCurve& direct, const TailCurve& dos) {
  require(direct.e == dos.e, ErrorKind::usage, "combine: grids differ");
  TailCurve out = direct;
  out.notes.push_back("direct and DOS estimates combined by inverse variance");
  for (std::size_t i = 0; i < out.e.size(); ++i) {
    const bool a = !direct.flagged[i] && std::isfinite(direct.value[i]);
    const bool b = !dos.flagged[i] && std::isfinite(dos.value[i]);
    if (a && b) {
      const double wa = 1.0 / std::max(direct.std_error[i] * direct.std_error[i], 1e-30);
      const double wb = 1.0 / std::max(dos.std_error[i] * dos.std_error[i], 1e-30);
      out.value[i] = (wa * direct.value[i] + wb * dos.value[i]) / (wa + wb);
      out.std_error[i] = 1.0 / std::sqrt(wa + wb);
      out.flagged[i] = 0;
    } else if (b) {
      out.value[i] = dos.value[i];
      out.std_error[i] = dos.std_error[i];
      out.flagged[i] = 0;
    } else if (!a) {
      out.flagged[i] = 1;
    }
  }
  return out;
}

}  // namespace ensemble_lab
