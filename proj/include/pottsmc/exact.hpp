#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dynamics.hpp"
#include "errors.hpp"
#include "graph.hpp"
#include "linalg.hpp"
#include "model.hpp"

namespace pottsmc {

/// Row-stochastic matrix on an enumerated state space together with the
/// distribution it is reversible with respect to.
struct ChainMatrix {
  std::string label;
  Matrix entries;
  std::vector<double> stationary;

  std::size_t dim() const noexcept { return entries.rows(); }
};

struct SpectrumResult {
  std::vector<double> eigenvalues;  // descending
  double gap = 0.0;
};

struct ExactOptions {
  /// Largest enumerated space allowed for any single factor.
  std::size_t cap = 4096;
};

inline constexpr double kChainTolerance = 1e-10;

// ---------------------------------------------------------------------------
// Invariants

struct ChainInvariants {
  double max_row_sum_error = 0.0;
  double max_balance_error = 0.0;
  double min_entry = 0.0;
  bool ok(double tol = kChainTolerance) const {
    return max_row_sum_error <= tol && max_balance_error <= tol && min_entry >= -tol;
  }
};

inline ChainInvariants check_invariants(const ChainMatrix& m) {
  ChainInvariants inv;
  const std::size_t n = m.dim();
  for (std::size_t i = 0; i < n; ++i) {
    inv.max_row_sum_error =
        std::max(inv.max_row_sum_error, std::abs(kahan_sum(m.entries.row(i)) - 1.0));
    for (std::size_t j = 0; j < n; ++j) {
      inv.min_entry = std::min(inv.min_entry, m.entries(i, j));
      if (j > i)
        inv.max_balance_error =
            std::max(inv.max_balance_error, std::abs(m.stationary[i] * m.entries(i, j) -
                                                     m.stationary[j] * m.entries(j, i)));
    }
  }
  return inv;
}

// ---------------------------------------------------------------------------
// State spaces

namespace detail {

inline std::vector<std::uint64_t> mono_masks(const Graph& g, int q, std::size_t n_states) {
  std::vector<std::uint64_t> masks(n_states);
  for (std::size_t i = 0; i < n_states; ++i)
    masks[i] = mono_edges(g, PottsConfig::from_index(i, g.n_vertices(), q)).index();
  return masks;
}

inline std::vector<std::uint64_t> powers_of(std::uint64_t base, std::size_t n) {
  std::vector<std::uint64_t> out(n + 1, 1);
  for (std::size_t i = 1; i <= n; ++i) out[i] = out[i - 1] * base;
  return out;
}

/// Calls f(index) for every coloring constant on the components of `labels`.
template <typename F>
void for_each_compatible_coloring(const ComponentLabeling& comp, int q,
                                  const std::vector<std::uint64_t>& qpow, F&& f) {
  std::vector<int> digit(comp.count, 0);
  while (true) {
    std::uint64_t idx = 0;
    for (std::size_t v = 0; v < comp.label.size(); ++v)
      idx += static_cast<std::uint64_t>(digit[comp.label[v]]) * qpow[v];
    f(idx);
    std::size_t d = 0;
    while (d < digit.size() && ++digit[d] == q) digit[d++] = 0;
    if (d == digit.size()) break;
  }
}

inline std::size_t hamming(const PottsConfig& a, const PottsConfig& b) {
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

}  // namespace detail

/// Full-space indices of Lambda = { sigma : sigma(v) = k }, increasing.
inline std::vector<std::uint64_t> restricted_states(const Graph& g, int q,
                                                    const RestrictedContext& ctx,
                                                    std::size_t cap) {
  ctx.validate(g, q);
  // |Lambda| = q^(N-1), so the full space may be q times the cap.
  const std::size_t n = potts_space_size(g, q, cap * static_cast<std::size_t>(q));
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < n; ++i)
    if (PottsConfig::from_index(i, g.n_vertices(), q)[ctx.vertex] == ctx.color) out.push_back(i);
  if (out.size() > cap) throw CapExceeded("restricted space", out.size(), cap);
  return out;
}

// ---------------------------------------------------------------------------
// Transfer matrices

/// T(sigma, A) = p^|A| (1-p)^(|E(sigma)|-|A|) 1(A subset of E(sigma)).
inline Matrix build_T_matrix(const Graph& g, const ModelParams& m, const ExactOptions& opt = {}) {
  const std::size_t ns = potts_space_size(g, m.q(), opt.cap);
  const std::size_t nr = rc_space_size(g, opt.cap);
  const auto masks = detail::mono_masks(g, m.q(), ns);
  const double p = m.p();
  std::vector<double> pp(g.n_edges() + 1), qq(g.n_edges() + 1);
  for (std::size_t k = 0; k <= g.n_edges(); ++k) {
    pp[k] = std::pow(p, static_cast<double>(k));
    qq[k] = std::pow(1.0 - p, static_cast<double>(k));
  }
  Matrix t(ns, nr);
  for (std::size_t s = 0; s < ns; ++s) {
    const std::uint64_t mask = masks[s];
    const auto k = static_cast<std::size_t>(std::popcount(mask));
    // Enumerate submasks of E(sigma), including the empty set.
    std::uint64_t a = mask;
    while (true) {
      const auto j = static_cast<std::size_t>(std::popcount(a));
      t(s, a) = pp[j] * qq[k - j];
      if (a == 0) break;
      a = (a - 1) & mask;
    }
  }
  return t;
}

/// T*(A, sigma) = q^-C(A) 1(sigma constant on components of A).
inline Matrix build_Tstar_matrix(const Graph& g, const ModelParams& m,
                                 const ExactOptions& opt = {}) {
  const std::size_t ns = potts_space_size(g, m.q(), opt.cap);
  const std::size_t nr = rc_space_size(g, opt.cap);
  const auto qpow = detail::powers_of(static_cast<std::uint64_t>(m.q()), g.n_vertices());
  Matrix t(nr, ns);
  for (std::size_t a = 0; a < nr; ++a) {
    const ComponentLabeling comp = connected_components(g, RCState::from_index(a, g.n_edges()));
    const double w = std::pow(static_cast<double>(m.q()), -static_cast<double>(comp.count));
    detail::for_each_compatible_coloring(comp, m.q(), qpow,
                                         [&](std::uint64_t s) { t(a, s) = w; });
  }
  return t;
}

/// D(A, B) = 1(B = A_D), a permutation matrix between primal and dual RC
/// spaces.
inline Matrix build_D_matrix(const DualMap& dmap, const ExactOptions& opt = {}) {
  const std::size_t nr = rc_space_size(dmap.primal, opt.cap);
  Matrix d(nr, nr);
  for (std::size_t a = 0; a < nr; ++a)
    d(a, dual_rc_state(RCState::from_index(a, dmap.primal.n_edges()), dmap).index()) = 1.0;
  return d;
}

// ---------------------------------------------------------------------------
// Chain builders

/// Random-scan heat bath P_HB.
inline ChainMatrix build_hb_matrix(const Graph& g, const ModelParams& m,
                                   const ExactOptions& opt = {}) {
  const int q = m.q();
  const std::size_t ns = potts_space_size(g, q, opt.cap);
  const std::size_t n = g.n_vertices();
  const auto qpow = detail::powers_of(static_cast<std::uint64_t>(q), n);
  ChainMatrix out{"P_HB", Matrix(ns, ns), exact_distribution(g, m, Space::potts, opt.cap)};
  if (n == 0) {
    out.entries(0, 0) = 1.0;
    return out;
  }
  std::vector<double> w(static_cast<std::size_t>(q));
  for (std::size_t s = 0; s < ns; ++s) {
    PottsConfig sigma = PottsConfig::from_index(s, n, q);
    for (Vertex v = 0; v < n; ++v) {
      const Color own = sigma[v];
      double best = -1.0;
      for (int c = 1; c <= q; ++c) {
        w[c - 1] = static_cast<double>(detail::agreeing_neighbors(g, sigma, v, c));
        best = std::max(best, w[c - 1]);
      }
      double total = 0.0;
      for (auto& x : w) total += (x = std::exp(m.beta() * (x - best)));
      const std::uint64_t base = s - static_cast<std::uint64_t>(own - 1) * qpow[v];
      for (int c = 1; c <= q; ++c)
        out.entries(s, base + static_cast<std::uint64_t>(c - 1) * qpow[v]) +=
            w[c - 1] / (total * static_cast<double>(n));
    }
  }
  return out;
}

/// Swendsen-Wang on spins, P = T T*.
inline ChainMatrix build_sw_matrix(const Graph& g, const ModelParams& m,
                                   const ExactOptions& opt = {}) {
  return {"P", multiply(build_T_matrix(g, m, opt), build_Tstar_matrix(g, m, opt)),
          exact_distribution(g, m, Space::potts, opt.cap)};
}

/// Swendsen-Wang on RC states, P~ = T* T.
inline ChainMatrix build_sw_rc_matrix(const Graph& g, const ModelParams& m,
                                      const ExactOptions& opt = {}) {
  m.require_open_p("build_sw_rc_matrix");
  return {"P_tilde", multiply(build_Tstar_matrix(g, m, opt), build_T_matrix(g, m, opt)),
          exact_distribution(g, m, Space::rc, opt.cap)};
}

/// Modified Swendsen-Wang M = T_G D T*_{G_D} T_{G_D} D* T*_G, evaluated as
/// (T_G D T*_{G_D}) (T_{G_D} D* T*_G) so the RC-by-RC factor is never formed.
inline ChainMatrix build_modified_sw_matrix(const DualMap& dmap, const ModelParams& m,
                                            const ExactOptions& opt = {}) {
  m.require_open_p("build_modified_sw_matrix");
  const ModelParams dm = m.dual();
  const Matrix t_primal = build_T_matrix(dmap.primal, m, opt);
  const Matrix ts_primal = build_Tstar_matrix(dmap.primal, m, opt);
  const Matrix t_dual = build_T_matrix(dmap.dual, dm, opt);
  const Matrix ts_dual = build_Tstar_matrix(dmap.dual, dm, opt);

  const std::size_t nr = t_primal.cols();
  std::vector<std::size_t> to_dual(nr);
  for (std::size_t a = 0; a < nr; ++a)
    to_dual[a] = dual_rc_state(RCState::from_index(a, dmap.primal.n_edges()), dmap).index();

  // (T_G D)(sigma, A_D) = T_G(sigma, A);  (D* T*_G)(A_D, tau) = T*_G(A, tau).
  Matrix td(t_primal.rows(), nr);
  Matrix dts(nr, ts_primal.cols());
  for (std::size_t a = 0; a < nr; ++a) {
    for (std::size_t s = 0; s < t_primal.rows(); ++s) td(s, to_dual[a]) = t_primal(s, a);
    std::copy(ts_primal.row(a).begin(), ts_primal.row(a).end(), dts.row(to_dual[a]).begin());
  }
  return {"M", multiply(multiply(td, ts_dual), multiply(t_dual, dts)),
          exact_distribution(dmap.primal, m, Space::potts, opt.cap)};
}

/// Q = P_HB P P_HB.
inline ChainMatrix build_Q_matrix(const Graph& g, const ModelParams& m,
                                  const ExactOptions& opt = {}) {
  const ChainMatrix hb = build_hb_matrix(g, m, opt);
  const ChainMatrix sw = build_sw_matrix(g, m, opt);
  return {"Q", multiply(multiply(hb.entries, sw.entries), hb.entries), hb.stationary};
}

namespace detail {

/// Off-diagonal part of the restricted heat bath; returns the stationary
/// pi(. | Lambda) on Lambda via out_pi.
inline Matrix restricted_offdiag(const Graph& g, const ModelParams& m,
                                 const RestrictedContext& ctx, const ExactOptions& opt,
                                 std::vector<std::uint64_t>& states, std::vector<double>& out_pi) {
  const int q = m.q();
  const std::size_t n = g.n_vertices();
  states = restricted_states(g, q, ctx, opt.cap);
  const std::size_t dim = states.size();

  std::vector<double> log_w(dim);
  for (std::size_t i = 0; i < dim; ++i)
    log_w[i] = potts_log_weight(g, m, PottsConfig::from_index(states[i], n, q));
  out_pi = normalize_log_weights(log_w);

  Matrix off(dim, dim);
  if (n <= 1) return off;
  // Lambda is indexed by the base-q number of the other N-1 colors.
  const auto qpow = powers_of(static_cast<std::uint64_t>(q), n);
  auto local_index = [&](std::uint64_t full) {
    const std::uint64_t low = full % qpow[ctx.vertex];
    const std::uint64_t high = full / qpow[ctx.vertex + 1];
    return static_cast<std::size_t>(low + high * qpow[ctx.vertex]);
  };
  const double inv = 1.0 / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < dim; ++i) {
    const PottsConfig sigma = PottsConfig::from_index(states[i], n, q);
    for (Vertex u = 0; u < n; ++u) {
      if (u == ctx.vertex) continue;
      for (int c = 1; c <= q; ++c) {
        if (c == sigma[u]) continue;
        const std::uint64_t full = states[i] + static_cast<std::uint64_t>(c - sigma[u]) * qpow[u];
        const std::size_t j = local_index(full);
        // (1 + pi(sigma)/pi(tau))^-1
        off(i, j) = inv / (1.0 + std::exp(log_w[i] - log_w[j]));
      }
    }
  }
  return off;
}

}  // namespace detail

/// Largest off-diagonal row mass of the restricted heat-bath kernel. Values
/// above 1 mean the kernel has no valid diagonal completion.
inline double restricted_hb_offdiag_mass(const Graph& g, const ModelParams& m,
                                         const RestrictedContext& ctx,
                                         const ExactOptions& opt = {}) {
  std::vector<std::uint64_t> states;
  std::vector<double> pi;
  const Matrix off = detail::restricted_offdiag(g, m, ctx, opt, states, pi);
  double worst = 0.0;
  for (std::size_t i = 0; i < off.rows(); ++i) worst = std::max(worst, kahan_sum(off.row(i)));
  return worst;
}

/// Restricted heat bath on Lambda with off-diagonal entries
/// (1/(N-1)) (1 + pi(sigma|Lambda)/pi(tau|Lambda))^-1 for single-site
/// neighbors and the row-stochastic remainder on the diagonal. Throws
/// ChainError (no renormalization) if some row's off-diagonal mass exceeds 1.
inline ChainMatrix build_restricted_hb_matrix(const Graph& g, const ModelParams& m,
                                              const RestrictedContext& ctx,
                                              const ExactOptions& opt = {}) {
  std::vector<std::uint64_t> states;
  std::vector<double> pi;
  Matrix off = detail::restricted_offdiag(g, m, ctx, opt, states, pi);
  for (std::size_t i = 0; i < off.rows(); ++i) {
    const double mass = kahan_sum(off.row(i));
    if (mass > 1.0 + kChainTolerance)
      throw ChainError("restricted heat bath: off-diagonal row mass " + std::to_string(mass) +
                       " exceeds 1 in row " + std::to_string(i));
    off(i, i) = std::max(0.0, 1.0 - mass);
  }
  return {"P_Lambda", std::move(off), std::move(pi)};
}

/// F1(sigma, tau) = 1(tau = sigma - sigma(v) + k): shift sigma globally into
/// Lambda. Rows index the full space, columns index Lambda.
inline Matrix build_F1_matrix(const Graph& g, const ModelParams& m, const RestrictedContext& ctx,
                              const ExactOptions& opt = {}) {
  const int q = m.q();
  const std::size_t ns = potts_space_size(g, q, opt.cap);
  const auto states = restricted_states(g, q, ctx, opt.cap);
  std::vector<std::size_t> pos(ns, states.size());
  for (std::size_t j = 0; j < states.size(); ++j) pos[states[j]] = j;
  Matrix f(ns, states.size());
  for (std::size_t s = 0; s < ns; ++s) {
    const PottsConfig sigma = PottsConfig::from_index(s, g.n_vertices(), q);
    f(s, pos[sigma.shifted(ctx.color - sigma[ctx.vertex], q).index(q)]) = 1.0;
  }
  return f;
}

/// F2(sigma, tau) = (1/q) sum_l 1(tau = sigma + l), sigma in Lambda.
inline Matrix build_F2_matrix(const Graph& g, const ModelParams& m, const RestrictedContext& ctx,
                              const ExactOptions& opt = {}) {
  const int q = m.q();
  const std::size_t ns = potts_space_size(g, q, opt.cap);
  const auto states = restricted_states(g, q, ctx, opt.cap);
  Matrix f(states.size(), ns);
  for (std::size_t i = 0; i < states.size(); ++i) {
    const PottsConfig sigma = PottsConfig::from_index(states[i], g.n_vertices(), q);
    for (int l = 0; l < q; ++l) f(i, sigma.shifted(l, q).index(q)) += 1.0 / q;
  }
  return f;
}

/// Q~ = F1 P_Lambda F2 P F1 P_Lambda F2 on the full spin space.
inline ChainMatrix build_Qtilde_matrix(const Graph& g, const ModelParams& m,
                                       const RestrictedContext& ctx,
                                       const ExactOptions& opt = {}) {
  const Matrix f1 = build_F1_matrix(g, m, ctx, opt);
  const Matrix f2 = build_F2_matrix(g, m, ctx, opt);
  const ChainMatrix pl = build_restricted_hb_matrix(g, m, ctx, opt);
  const ChainMatrix sw = build_sw_matrix(g, m, opt);
  const Matrix half = multiply(multiply(f1, pl.entries), f2);  // F1 P_Lambda F2
  return {"Q_tilde", multiply(multiply(half, sw.entries), half), sw.stationary};
}

inline ChainMatrix square(const ChainMatrix& m) {
  return {m.label + "^2", multiply(m.entries, m.entries), m.stationary};
}

// ---------------------------------------------------------------------------
// Spectra

/// S(i, j) = sqrt(pi_i / pi_j) P(i, j), symmetrized against rounding.
inline Matrix symmetrize(const ChainMatrix& m) {
  const std::size_t n = m.dim();
  std::vector<double> root(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(m.stationary[i] > 0.0))
      throw ChainError(m.label + ": stationary distribution is not strictly positive");
    root[i] = std::sqrt(m.stationary[i]);
  }
  Matrix s(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double a = root[i] / root[j] * m.entries(i, j);
      const double b = root[j] / root[i] * m.entries(j, i);
      s(i, j) = s(j, i) = 0.5 * (a + b);
    }
  return s;
}

/// lambda(P) = 1 - max(xi_1, |xi_min|) from the full spectrum.
inline SpectrumResult spectral_gap(const ChainMatrix& m, double tol = kChainTolerance) {
  const ChainInvariants inv = check_invariants(m);
  if (inv.max_balance_error > tol)
    throw ChainError(m.label + ": not reversible (detailed-balance error " +
                     std::to_string(inv.max_balance_error) + ")");
  SpectrumResult r;
  r.eigenvalues = symmetric_eigen(symmetrize(m)).values;
  if (r.eigenvalues.size() <= 1) {
    r.gap = 1.0;
    return r;
  }
  const double second = r.eigenvalues[1];
  const double last = std::abs(r.eigenvalues.back());
  r.gap = std::clamp(1.0 - std::max(second, last), 0.0, 1.0);
  return r;
}

/// E_P(f) = 1/2 sum_{i,j} (f_i - f_j)^2 pi_i P(i, j).
inline double dirichlet_form(const ChainMatrix& m, std::span<const double> f) {
  if (f.size() != m.dim()) throw std::invalid_argument("dirichlet_form: dimension mismatch");
  double s = 0.0, comp = 0.0;
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) {
      const double d = f[i] - f[j];
      const double y = 0.5 * d * d * m.stationary[i] * m.entries(i, j) - comp;
      const double t = s + y;
      comp = (t - s) - y;
      s = t;
    }
  return s;
}

inline double variance(std::span<const double> pi, std::span<const double> f) {
  double mean = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) mean += pi[i] * f[i];
  double v = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) v += pi[i] * (f[i] - mean) * (f[i] - mean);
  return v;
}

// ---------------------------------------------------------------------------
// Comparison constants

struct ComparisonConstants {
  double c1 = 1.0;
  double c2 = 1.0;
  double c3 = 1.0;
  double c_sw = 1.0;
  double c_sw_tilde = 1.0;
};

/// c1 = e^-beta, c2 = 1 + q(e^beta - 1), c3 = q e^2beta - (q-1) e^beta,
/// c_SW = (q e^2beta)^(-4 Delta) / (2 q^2), and c~_SW with Delta~.
inline ComparisonConstants comparison_constants(double beta, int q, std::size_t max_deg,
                                                std::size_t max_deg_excluding = 0) {
  ComparisonConstants c;
  const double qd = static_cast<double>(q);
  c.c1 = std::exp(-beta);
  c.c2 = 1.0 + qd * std::expm1(beta);
  c.c3 = qd * std::exp(2.0 * beta) - (qd - 1.0) * std::exp(beta);
  const double log_base = std::log(qd) + 2.0 * beta;
  c.c_sw = std::exp(-4.0 * static_cast<double>(max_deg) * log_base) / (2.0 * qd * qd);
  c.c_sw_tilde = std::exp(-4.0 * static_cast<double>(max_deg_excluding) * log_base) / (2.0 * qd * qd);
  return c;
}

}  // namespace pottsmc
