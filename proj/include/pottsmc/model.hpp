#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"
#include "rc_state.hpp"

namespace pottsmc {

using Color = int;

/// Potts configuration: colors in [1..q], one per vertex.
///
/// Enumeration index: base-q integer with digit (color - 1), vertex 0 least
/// significant.
struct PottsConfig {
  std::vector<Color> colors;

  std::size_t size() const noexcept { return colors.size(); }
  Color operator[](Vertex v) const { return colors[v]; }
  Color& operator[](Vertex v) { return colors[v]; }

  static PottsConfig constant(std::size_t n, Color c) { return {std::vector<Color>(n, c)}; }

  static PottsConfig from_index(std::uint64_t index, std::size_t n, int q) {
    PottsConfig s{std::vector<Color>(n)};
    for (std::size_t v = 0; v < n; ++v) {
      s.colors[v] = static_cast<Color>(index % static_cast<std::uint64_t>(q)) + 1;
      index /= static_cast<std::uint64_t>(q);
    }
    return s;
  }

  std::uint64_t index(int q) const {
    std::uint64_t idx = 0;
    for (std::size_t v = colors.size(); v-- > 0;)
      idx = idx * static_cast<std::uint64_t>(q) + static_cast<std::uint64_t>(colors[v] - 1);
    return idx;
  }

  /// Global color shift: (sigma + l)(u) = ((sigma(u) + l - 1) mod q) + 1.
  PottsConfig shifted(int l, int q) const {
    PottsConfig s = *this;
    for (auto& c : s.colors) c = static_cast<Color>(((c - 1 + l) % q + q) % q) + 1;
    return s;
  }

  friend bool operator==(const PottsConfig&, const PottsConfig&) = default;
};

inline bool is_valid_config(const PottsConfig& s, std::size_t n, int q) {
  if (s.size() != n) return false;
  for (Color c : s.colors)
    if (c < 1 || c > q) return false;
  return true;
}

/// Number of states q^n, or nullopt on 64-bit overflow.
inline std::optional<std::uint64_t> checked_power(std::uint64_t base, std::size_t exp) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (r > std::numeric_limits<std::uint64_t>::max() / base) return std::nullopt;
    r *= base;
  }
  return r;
}

/// Size of an enumerated space, throwing CapExceeded when above cap.
inline std::size_t capped_size(std::uint64_t base, std::size_t exp, std::size_t cap,
                               const std::string& what) {
  const auto n = checked_power(base, exp);
  if (!n || *n > cap)
    throw CapExceeded(what, n ? static_cast<std::size_t>(*n) : std::numeric_limits<std::size_t>::max(),
                      cap);
  return static_cast<std::size_t>(*n);
}

inline std::size_t potts_space_size(const Graph& g, int q, std::size_t cap) {
  return capped_size(static_cast<std::uint64_t>(q), g.n_vertices(), cap, "Potts space");
}
inline std::size_t rc_space_size(const Graph& g, std::size_t cap) {
  if (g.n_edges() >= 63) throw CapExceeded("RC space", std::numeric_limits<std::size_t>::max(), cap);
  return capped_size(2, g.n_edges(), cap, "RC space");
}

// ---------------------------------------------------------------------------

/// Model parameters. p = 1 - exp(-beta) is cached; the dual pair satisfies
/// p*/(1-p*) = q(1-p)/p.
class ModelParams {
 public:
  static ModelParams from_beta(int q, double beta) {
    if (q < 2) throw std::invalid_argument("ModelParams: q must be >= 2");
    if (!(beta >= 0.0) || !std::isfinite(beta))
      throw std::invalid_argument("ModelParams: beta must be finite and >= 0");
    ModelParams m;
    m.q_ = q;
    m.beta_ = beta;
    m.p_ = -std::expm1(-beta);
    return m;
  }

  static ModelParams from_p(int q, double p) {
    if (!(p >= 0.0 && p < 1.0)) throw std::invalid_argument("ModelParams: p must lie in [0, 1)");
    ModelParams m = from_beta(q, -std::log1p(-p));
    m.p_ = p;
    return m;
  }

  int q() const noexcept { return q_; }
  double beta() const noexcept { return beta_; }
  double p() const noexcept { return p_; }

  /// log(p / (1 - p)) = log(e^beta - 1).
  double log_odds() const {
    require_open_p("log_odds");
    return std::log(std::expm1(beta_));
  }

  /// Dual parameter p*; undefined at p = 0.
  double p_star() const {
    require_open_p("dual parameter");
    const double odds_star = q_ / std::expm1(beta_);
    return odds_star / (1.0 + odds_star);
  }

  /// beta* with p* = 1 - exp(-beta*): beta* = log(1 + q / (e^beta - 1)).
  double beta_star() const {
    require_open_p("dual parameter");
    return std::log1p(q_ / std::expm1(beta_));
  }

  /// Parameters of the dual model on the dual graph.
  ModelParams dual() const {
    ModelParams m = from_beta(q_, beta_star());
    m.p_ = p_star();
    return m;
  }

  void require_open_p(const char* who) const {
    if (!(p_ > 0.0 && p_ < 1.0))
      throw std::domain_error(std::string(who) + ": p must lie strictly in (0, 1)");
  }

 private:
  ModelParams() = default;
  int q_ = 2;
  double beta_ = 0.0;
  double p_ = 0.0;
};

inline double self_dual_p(int q) {
  const double s = std::sqrt(static_cast<double>(q));
  return s / (1.0 + s);
}

/// beta_c(q) = log(1 + sqrt q), the self-dual inverse temperature.
inline double critical_beta(int q) { return std::log1p(std::sqrt(static_cast<double>(q))); }

// ---------------------------------------------------------------------------
// Weights. Loops always count as monochromatic.

inline std::size_t mono_count(const Graph& g, const PottsConfig& s) {
  std::size_t n = 0;
  for (const auto& e : g.edges())
    if (s[e.u] == s[e.v]) ++n;
  return n;
}

/// E(sigma): the monochromatic edges.
inline RCState mono_edges(const Graph& g, const PottsConfig& s) {
  RCState out(g.n_edges());
  for (EdgeIndex e = 0; e < g.n_edges(); ++e)
    if (s[g.edge(e).u] == s[g.edge(e).v]) out.set(e);
  return out;
}

inline double potts_log_weight(const Graph& g, const ModelParams& m, const PottsConfig& s) {
  return m.beta() * static_cast<double>(mono_count(g, s));
}

inline double potts_weight(const Graph& g, const ModelParams& m, const PottsConfig& s) {
  return std::exp(potts_log_weight(g, m, s));
}

inline double rc_log_weight(const Graph& g, const ModelParams& m, const RCState& a) {
  m.require_open_p("rc_weight");
  return static_cast<double>(a.count()) * m.log_odds() +
         static_cast<double>(count_components(g, a)) * std::log(static_cast<double>(m.q()));
}

inline double rc_weight(const Graph& g, const ModelParams& m, const RCState& a) {
  return std::exp(rc_log_weight(g, m, a));
}

/// Edwards-Sokal joint weight (p/(1-p))^|A| 1(A subset of E(sigma)).
inline double joint_weight(const Graph& g, const ModelParams& m, const PottsConfig& s,
                           const RCState& a) {
  m.require_open_p("joint_weight");
  if (!a.subset_of(mono_edges(g, s))) return 0.0;
  return std::exp(static_cast<double>(a.count()) * m.log_odds());
}

// ---------------------------------------------------------------------------
// Exact distributions

enum class Space { potts, rc };

inline constexpr std::size_t kDefaultDistributionCap = std::size_t{1} << 20;

namespace detail {

struct KahanSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double y = x - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

/// exp(log_w - max) normalized; returns log of the normalizer too.
inline std::vector<double> normalize_log_weights(const std::vector<double>& log_w,
                                                 double* log_z = nullptr) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double x : log_w) mx = std::max(mx, x);
  std::vector<double> out(log_w.size());
  KahanSum z;
  for (std::size_t i = 0; i < log_w.size(); ++i) {
    out[i] = std::exp(log_w[i] - mx);
    z.add(out[i]);
  }
  for (double& x : out) x /= z.sum;
  if (log_z) *log_z = mx + std::log(z.sum);
  return out;
}

}  // namespace detail

inline std::vector<double> potts_log_weights(const Graph& g, const ModelParams& m,
                                             std::size_t cap = kDefaultDistributionCap) {
  const std::size_t n = potts_space_size(g, m.q(), cap);
  std::vector<double> lw(n);
  for (std::size_t i = 0; i < n; ++i)
    lw[i] = potts_log_weight(g, m, PottsConfig::from_index(i, g.n_vertices(), m.q()));
  return lw;
}

inline std::vector<double> rc_log_weights(const Graph& g, const ModelParams& m,
                                          std::size_t cap = kDefaultDistributionCap) {
  m.require_open_p("RC distribution");
  const std::size_t n = rc_space_size(g, cap);
  std::vector<double> lw(n);
  for (std::size_t i = 0; i < n; ++i)
    lw[i] = rc_log_weight(g, m, RCState::from_index(i, g.n_edges()));
  return lw;
}

/// pi_beta or mu_p over the enumerated space, in enumeration order.
inline std::vector<double> exact_distribution(const Graph& g, const ModelParams& m, Space space,
                                              std::size_t cap = kDefaultDistributionCap) {
  return detail::normalize_log_weights(space == Space::potts ? potts_log_weights(g, m, cap)
                                                             : rc_log_weights(g, m, cap));
}

/// log Z. With unnormalized weights as defined above, the Potts and RC
/// partition functions coincide.
inline double log_partition_function(const Graph& g, const ModelParams& m, Space space,
                                     std::size_t cap = kDefaultDistributionCap) {
  double log_z = 0.0;
  detail::normalize_log_weights(
      space == Space::potts ? potts_log_weights(g, m, cap) : rc_log_weights(g, m, cap), &log_z);
  return log_z;
}

}  // namespace pottsmc
