#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "graph.hpp"
#include "model.hpp"
#include "rc_state.hpp"
#include "rng.hpp"

namespace pottsmc {

/// Pins sigma(vertex) = color; the state space of the restricted chain is
/// Lambda = { sigma : sigma(vertex) = color }.
struct RestrictedContext {
  Vertex vertex = 0;
  Color color = 1;

  void validate(const Graph& g, int q) const {
    if (vertex >= g.n_vertices())
      throw std::invalid_argument("RestrictedContext: pinned vertex out of range");
    if (color < 1 || color > q)
      throw std::invalid_argument("RestrictedContext: pinned color out of range");
  }
  bool contains(const PottsConfig& s) const { return s[vertex] == color; }
};

namespace detail {

/// Number of non-loop edges at v whose other endpoint has color c.
inline std::size_t agreeing_neighbors(const Graph& g, const PottsConfig& s, Vertex v, Color c) {
  std::size_t n = 0;
  for (EdgeIndex e : g.incident(v)) {
    const Edge& ed = g.edge(e);
    if (ed.is_loop()) continue;
    if (s[ed.u == v ? ed.v : ed.u] == c) ++n;
  }
  return n;
}

}  // namespace detail

/// Resamples sigma(v) from its conditional law given the other colors.
inline void heat_bath_update(const Graph& g, const ModelParams& m, PottsConfig& sigma, Vertex v,
                             RngStream& rng) {
  const int q = m.q();
  std::vector<double> w(static_cast<std::size_t>(q));
  std::size_t best = 0;
  std::vector<std::size_t> agree(static_cast<std::size_t>(q));
  for (int c = 1; c <= q; ++c) {
    agree[c - 1] = detail::agreeing_neighbors(g, sigma, v, c);
    best = std::max(best, agree[c - 1]);
  }
  double total = 0.0;
  for (int c = 0; c < q; ++c) {
    w[c] = std::exp(m.beta() * (static_cast<double>(agree[c]) - static_cast<double>(best)));
    total += w[c];
  }
  double u = rng.uniform() * total;
  for (int c = 0; c < q; ++c) {
    if (u < w[c] || c == q - 1) {
      sigma[v] = c + 1;
      return;
    }
    u -= w[c];
  }
}

/// One step of the random-scan heat-bath chain.
inline void heat_bath_step(const Graph& g, const ModelParams& m, PottsConfig& sigma,
                           RngStream& rng) {
  if (g.n_vertices() == 0) return;
  const auto v = static_cast<Vertex>(rng.uniform_int(g.n_vertices()));
  heat_bath_update(g, m, sigma, v, rng);
}

/// Keeps each monochromatic edge independently with probability p.
inline RCState sw_bond_step(const Graph& g, const ModelParams& m, const PottsConfig& sigma,
                            RngStream& rng) {
  RCState a(g.n_edges());
  const double p = m.p();
  for (EdgeIndex e = 0; e < g.n_edges(); ++e) {
    const Edge& ed = g.edge(e);
    if (sigma[ed.u] == sigma[ed.v] && rng.bernoulli(p)) a.set(e);
  }
  return a;
}

/// Colors each component of (V, A) independently and uniformly; components
/// draw in order of their smallest vertex.
inline PottsConfig sw_color_step(const Graph& g, const ModelParams& m, const RCState& a,
                                 RngStream& rng) {
  const ComponentLabeling comp = connected_components(g, a);
  std::vector<Color> color(comp.count);
  for (auto& c : color) c = static_cast<Color>(rng.uniform_int(static_cast<std::uint64_t>(m.q()))) + 1;
  PottsConfig out{std::vector<Color>(g.n_vertices())};
  for (Vertex v = 0; v < g.n_vertices(); ++v) out[v] = color[comp.label[v]];
  return out;
}

/// Swendsen-Wang on spins: bond step followed by color step.
inline void sw_step(const Graph& g, const ModelParams& m, PottsConfig& sigma, RngStream& rng) {
  const RCState a = sw_bond_step(g, m, sigma, rng);
  sigma = sw_color_step(g, m, a, rng);
}

/// Swendsen-Wang on RC states: color step followed by bond step.
inline void sw_rc_step(const Graph& g, const ModelParams& m, RCState& a, RngStream& rng) {
  const PottsConfig sigma = sw_color_step(g, m, a, rng);
  a = sw_bond_step(g, m, sigma, rng);
}

/// Modified Swendsen-Wang: primal bond step, one RC Swendsen-Wang step on the
/// dual graph at p* started from the dual state, primal color step.
inline void modified_sw_step(const DualMap& dmap, const ModelParams& m, PottsConfig& sigma,
                             RngStream& rng) {
  m.require_open_p("modified_sw_step");
  const ModelParams dual = m.dual();
  const RCState a = sw_bond_step(dmap.primal, m, sigma, rng);
  RCState dual_state = dual_rc_state(a, dmap);
  sw_rc_step(dmap.dual, dual, dual_state, rng);
  sigma = sw_color_step(dmap.primal, m, primal_rc_state(dual_state, dmap), rng);
}

/// Restricted heat-bath chain on Lambda.
///
/// Picks u uniformly from V \ {v}, proposes a color uniformly from the q-1
/// colors other than sigma(u) and accepts with probability
/// min(1, (q-1) / (1 + pi(sigma)/pi(tau))). For q = 2 the off-diagonal
/// transition probabilities are exactly (1/(N-1)) (1 + pi(sigma)/pi(tau))^-1.
inline void restricted_hb_step(const Graph& g, const ModelParams& m, const RestrictedContext& ctx,
                               PottsConfig& sigma, RngStream& rng) {
  if (!ctx.contains(sigma))
    throw std::invalid_argument("restricted_hb_step: configuration is not in the pinned set");
  const std::size_t n = g.n_vertices();
  if (n <= 1) return;
  std::size_t u = rng.uniform_int(n - 1);
  if (u >= ctx.vertex) ++u;
  const int q = m.q();
  const Color old_color = sigma[u];
  const Color proposed =
      static_cast<Color>((old_color + static_cast<int>(rng.uniform_int(q - 1))) % q) + 1;
  const double log_ratio =
      m.beta() * (static_cast<double>(detail::agreeing_neighbors(g, sigma, u, old_color)) -
                  static_cast<double>(detail::agreeing_neighbors(g, sigma, u, proposed)));
  const double accept = std::min(1.0, (q - 1) / (1.0 + std::exp(log_ratio)));
  if (rng.uniform() < accept) sigma[u] = proposed;
}

enum class Dynamics { heat_bath, swendsen_wang, modified_sw, restricted_hb };

inline const char* dynamics_name(Dynamics d) {
  switch (d) {
    case Dynamics::heat_bath: return "hb";
    case Dynamics::swendsen_wang: return "sw";
    case Dynamics::modified_sw: return "msw";
    case Dynamics::restricted_hb: return "rhb";
  }
  return "?";
}

inline Dynamics parse_dynamics(const std::string& s) {
  if (s == "hb") return Dynamics::heat_bath;
  if (s == "sw") return Dynamics::swendsen_wang;
  if (s == "msw") return Dynamics::modified_sw;
  if (s == "rhb") return Dynamics::restricted_hb;
  throw std::invalid_argument("unknown dynamics '" + s + "'");
}

}  // namespace pottsmc
