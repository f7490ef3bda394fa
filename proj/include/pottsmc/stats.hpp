#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "dynamics.hpp"
#include "graph.hpp"
#include "model.hpp"
#include "rng.hpp"

namespace pottsmc {

/// Graph plus whatever a dynamics needs beyond it.
struct ChainSetup {
  Graph graph;
  std::optional<DualMap> dual;
  RestrictedContext pin;
};

struct RecordOptions {
  bool energy_series = true;
  bool histogram = true;
  bool state_indices = false;
  std::size_t thin = 1;
  std::size_t histogram_cap = std::size_t{1} << 16;
};

struct IatResult {
  double tau = 0.5;
  double stderr_ = 0.0;
  std::size_t window = 0;
  /// Raw windowed estimate fell below 0.5 (anticorrelated series) and was
  /// floored.
  bool antithetic = false;
};

struct TrajectorySummary {
  std::size_t n_steps = 0;  // recorded samples
  double mean_energy = 0.0;
  double energy_sum = 0.0;
  std::vector<double> energy_series;
  std::vector<std::uint64_t> state_indices;
  std::vector<std::uint64_t> state_histogram;
  std::optional<IatResult> iat;
};

/// Windowed integrated autocorrelation time,
///   tau(W) = 1/2 + sum_{t=1..W} rho(t),
/// with W the first lag satisfying W >= 6 tau(W). Standard error from the
/// large-sample variance 2(2W+1)/n tau^2.
inline IatResult integrated_autocorrelation(std::span<const double> xs, double c = 6.0) {
  const std::size_t n = xs.size();
  if (n < 1000) throw std::invalid_argument("integrated_autocorrelation: need at least 1000 samples");
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(n);
  double c0 = 0.0;
  for (double x : xs) c0 += (x - mean) * (x - mean);
  c0 /= static_cast<double>(n);

  IatResult r;
  if (c0 == 0.0) return r;

  double tau = 0.5;
  std::size_t w = 0;
  while (w + 1 < n / 2) {
    ++w;
    double ct = 0.0;
    for (std::size_t i = 0; i + w < n; ++i) ct += (xs[i] - mean) * (xs[i + w] - mean);
    tau += ct / static_cast<double>(n) / c0;
    if (static_cast<double>(w) >= c * tau) break;
  }
  r.window = w;
  if (tau < 0.5) {
    r.antithetic = true;
    tau = 0.5;
  }
  r.tau = tau;
  r.stderr_ = tau * std::sqrt(2.0 * (2.0 * static_cast<double>(w) + 1.0) / static_cast<double>(n));
  return r;
}

/// Total-variation distance between an empirical histogram and a distribution.
inline double tv_distance(std::span<const std::uint64_t> hist, std::span<const double> exact) {
  if (hist.size() != exact.size()) throw std::invalid_argument("tv_distance: dimension mismatch");
  double total = 0.0;
  for (auto h : hist) total += static_cast<double>(h);
  if (total == 0.0) throw std::invalid_argument("tv_distance: empty histogram");
  double d = 0.0;
  for (std::size_t i = 0; i < hist.size(); ++i)
    d += std::abs(static_cast<double>(hist[i]) / total - exact[i]);
  return 0.5 * d;
}

inline PottsConfig default_start(const ChainSetup& setup, Dynamics dyn) {
  const Color c = dyn == Dynamics::restricted_hb ? setup.pin.color : 1;
  return PottsConfig::constant(setup.graph.n_vertices(), c);
}

/// Advances sigma by one step of dyn.
inline void chain_step(const ChainSetup& setup, const ModelParams& m, Dynamics dyn,
                       PottsConfig& sigma, RngStream& rng) {
  switch (dyn) {
    case Dynamics::heat_bath: heat_bath_step(setup.graph, m, sigma, rng); return;
    case Dynamics::swendsen_wang: sw_step(setup.graph, m, sigma, rng); return;
    case Dynamics::modified_sw: modified_sw_step(*setup.dual, m, sigma, rng); return;
    case Dynamics::restricted_hb: restricted_hb_step(setup.graph, m, setup.pin, sigma, rng); return;
  }
}

inline void validate_setup(const ChainSetup& setup, const ModelParams& m, Dynamics dyn) {
  if (dyn == Dynamics::modified_sw) {
    if (!setup.dual) throw std::invalid_argument("msw dynamics needs a planar dual of the graph");
    m.require_open_p("modified Swendsen-Wang");
  }
  if (dyn == Dynamics::restricted_hb) setup.pin.validate(setup.graph, m.q());
}

/// Runs `steps` steps from `start` (or the default start), discarding the
/// first `burnin` and recording every `thin`-th step after that.
inline TrajectorySummary run_chain(const ChainSetup& setup, const ModelParams& m, Dynamics dyn,
                                   std::size_t steps, std::size_t burnin, RngStream& rng,
                                   const RecordOptions& rec = {},
                                   std::optional<PottsConfig> start = std::nullopt) {
  if (steps <= burnin) throw std::invalid_argument("run_chain: steps must exceed burnin");
  if (rec.thin == 0) throw std::invalid_argument("run_chain: thin must be >= 1");
  validate_setup(setup, m, dyn);
  const Graph& g = setup.graph;
  PottsConfig sigma = start ? *start : default_start(setup, dyn);
  if (!is_valid_config(sigma, g.n_vertices(), m.q()))
    throw std::invalid_argument("run_chain: invalid starting configuration");

  const auto space = checked_power(static_cast<std::uint64_t>(m.q()), g.n_vertices());
  const bool indexable = space && *space <= rec.histogram_cap;

  TrajectorySummary out;
  if (rec.histogram && indexable) out.state_histogram.assign(static_cast<std::size_t>(*space), 0);

  for (std::size_t t = 0; t < steps; ++t) {
    chain_step(setup, m, dyn, sigma, rng);
    if (t < burnin || (t - burnin) % rec.thin != 0) continue;
    const auto e = static_cast<double>(mono_count(g, sigma));
    ++out.n_steps;
    out.energy_sum += e;
    if (rec.energy_series) out.energy_series.push_back(e);
    if (indexable && (rec.histogram || rec.state_indices)) {
      const std::uint64_t idx = sigma.index(m.q());
      if (rec.histogram) ++out.state_histogram[idx];
      if (rec.state_indices) out.state_indices.push_back(idx);
    }
  }
  out.mean_energy = out.energy_sum / static_cast<double>(out.n_steps);
  if (out.energy_series.size() >= 1000) out.iat = integrated_autocorrelation(out.energy_series);
  return out;
}

/// Sums step counts, energies and histograms; per-replica series and
/// autocorrelation estimates are dropped.
inline TrajectorySummary merge_summaries(const std::vector<TrajectorySummary>& parts) {
  TrajectorySummary out;
  for (const auto& p : parts) {
    out.n_steps += p.n_steps;
    out.energy_sum += p.energy_sum;
    if (out.state_histogram.size() < p.state_histogram.size())
      out.state_histogram.resize(p.state_histogram.size(), 0);
    for (std::size_t i = 0; i < p.state_histogram.size(); ++i)
      out.state_histogram[i] += p.state_histogram[i];
  }
  if (out.n_steps > 0) out.mean_energy = out.energy_sum / static_cast<double>(out.n_steps);
  return out;
}

/// Independent replicas on streams 1..n of the seed, run on up to `threads`
/// threads. The merged result does not depend on the thread count.
inline TrajectorySummary run_replicas(const ChainSetup& setup, const ModelParams& m, Dynamics dyn,
                                      std::size_t steps, std::size_t burnin, std::uint64_t seed,
                                      std::size_t replicas, std::size_t threads,
                                      RecordOptions rec = {}) {
  rec.energy_series = false;
  rec.state_indices = false;
  std::vector<TrajectorySummary> parts(replicas);
  const RngStream root(seed);
  auto work = [&](std::size_t first) {
    for (std::size_t r = first; r < replicas; r += threads) {
      RngStream rng = root.split(r + 1);
      parts[r] = run_chain(setup, m, dyn, steps, burnin, rng, rec);
    }
  };
  threads = std::max<std::size_t>(1, std::min(threads, replicas));
  std::vector<std::jthread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(work, t);
  work(0);
  pool.clear();
  return merge_summaries(parts);
}

}  // namespace pottsmc
