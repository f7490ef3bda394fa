#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "exact.hpp"

namespace pottsmc {

/// One certified inequality or identity on one instance. slack >= -tolerance
/// means the check holds; violations counts failing entries for entrywise
/// checks.
struct CheckResult {
  std::string instance;
  std::vector<std::pair<std::string, double>> params;
  std::string check;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double tolerance = 0.0;
  std::size_t violations = 0;
  bool pass = true;
};

inline constexpr double kGapTolerance = 1e-10;
inline constexpr double kEntryTolerance = 1e-12;

/// Collects CheckResults for one instance.
class Report {
 public:
  Report(std::string instance, std::vector<std::pair<std::string, double>> params)
      : instance_(std::move(instance)), params_(std::move(params)) {}

  /// lhs >= rhs
  CheckResult& ge(const std::string& check, double lhs, double rhs, double tol) {
    return add(check, lhs, rhs, lhs - rhs, tol);
  }
  /// lhs <= rhs
  CheckResult& le(const std::string& check, double lhs, double rhs, double tol) {
    return add(check, lhs, rhs, rhs - lhs, tol);
  }
  /// lhs == rhs
  CheckResult& eq(const std::string& check, double lhs, double rhs, double tol) {
    return add(check, lhs, rhs, -std::abs(lhs - rhs), tol);
  }

  /// Row sums and detailed balance of a built chain.
  void invariants(const ChainMatrix& m) {
    const ChainInvariants inv = check_invariants(m);
    le("stochastic[" + m.label + "]", std::max(inv.max_row_sum_error, -inv.min_entry), 0.0,
       kChainTolerance);
    le("reversible[" + m.label + "]", inv.max_balance_error, 0.0, kChainTolerance);
  }

  std::vector<CheckResult>& results() { return results_; }
  std::vector<CheckResult> take() { return std::move(results_); }

 private:
  CheckResult& add(const std::string& check, double lhs, double rhs, double slack, double tol) {
    CheckResult r{instance_, params_, check, lhs, rhs, slack, tol, 0, slack >= -tol};
    if (!r.pass) r.violations = 1;
    results_.push_back(std::move(r));
    return results_.back();
  }

  std::string instance_;
  std::vector<std::pair<std::string, double>> params_;
  std::vector<CheckResult> results_;
};

inline std::vector<std::pair<std::string, double>> model_params_list(const ModelParams& m) {
  return {{"q", m.q()}, {"beta", m.beta()}, {"p", m.p()}};
}

namespace detail {

/// Entrywise fa * a(i,j) >= fb * b(i,j); records the worst entry.
inline void entrywise_ge(Report& rep, const std::string& check, const Matrix& a, double fa,
                         const Matrix& b, double fb, double tol) {
  double worst = std::numeric_limits<double>::infinity();
  double wl = 0.0, wr = 0.0;
  std::size_t bad = 0;
  for (std::size_t k = 0; k < a.data().size(); ++k) {
    const double lhs = fa * a.data()[k];
    const double rhs = fb * b.data()[k];
    const double s = lhs - rhs;
    if (s < -tol) ++bad;
    if (s < worst) {
      worst = s;
      wl = lhs;
      wr = rhs;
    }
  }
  CheckResult& r = rep.ge(check, wl, wr, tol);
  r.violations = bad;
}

/// Hamming-distance <= 1 neighborhoods (each state is its own neighbor).
inline std::vector<std::vector<std::size_t>> adjacency_lists(std::size_t n_vertices, int q,
                                                             std::size_t n_states) {
  const auto qpow = powers_of(static_cast<std::uint64_t>(q), n_vertices);
  std::vector<std::vector<std::size_t>> adj(n_states);
  for (std::size_t s = 0; s < n_states; ++s) {
    adj[s].push_back(s);
    const PottsConfig sigma = PottsConfig::from_index(s, n_vertices, q);
    for (Vertex v = 0; v < n_vertices; ++v)
      for (int c = 1; c <= q; ++c)
        if (c != sigma[v])
          adj[s].push_back(static_cast<std::size_t>(
              static_cast<std::int64_t>(s) +
              static_cast<std::int64_t>(c - sigma[v]) * static_cast<std::int64_t>(qpow[v])));
  }
  return adj;
}

}  // namespace detail

/// c = max P(s1, t1) / P(s2, t2) over s1~s2, t1~t2, where ~ is Hamming
/// distance <= 1. Pairs with a zero denominator are skipped and counted.
struct AdjacentRatio {
  double c = 0.0;
  std::size_t zero_denominators = 0;
};

inline AdjacentRatio adjacent_ratio(const Matrix& p, std::size_t n_vertices, int q) {
  const std::size_t n = p.rows();
  const auto adj = detail::adjacency_lists(n_vertices, q, n);
  // inner(i, j) = min_{j' ~ j} P(i, j'); outer(i, j) = min_{i' ~ i} inner(i', j)
  Matrix inner(n, n), outer(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double mn = std::numeric_limits<double>::infinity();
      for (std::size_t jj : adj[j]) mn = std::min(mn, p(i, jj));
      inner(i, j) = mn;
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double mn = std::numeric_limits<double>::infinity();
      for (std::size_t ii : adj[i]) mn = std::min(mn, inner(ii, j));
      outer(i, j) = mn;
    }
  AdjacentRatio r;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (outer(i, j) > 0.0)
        r.c = std::max(r.c, p(i, j) / outer(i, j));
      else if (p(i, j) > 0.0)
        ++r.zero_denominators;
    }
  return r;
}

// ---------------------------------------------------------------------------

/// Spanning-subgraph sandwich c1^m P_{G0} <= P_G <= c2^m P_{G0}, m = |E \ E0|.
inline std::vector<CheckResult> verify_lemma_spanning(const std::string& instance, const Graph& g,
                                                      const RCState& e0, const ModelParams& m,
                                                      const ExactOptions& opt = {}) {
  auto params = model_params_list(m);
  params.emplace_back("E0_mask", static_cast<double>(e0.index()));
  Report rep(instance, std::move(params));
  const ChainMatrix pg = build_sw_matrix(g, m, opt);
  ChainMatrix p0 = build_sw_matrix(g.spanning_subgraph(e0), m, opt);
  p0.label = "P_G0";
  const auto removed = static_cast<double>(g.n_edges() - e0.count());
  const ComparisonConstants c = comparison_constants(m.beta(), m.q(), 0);
  detail::entrywise_ge(rep, "lemma3_lower", pg.entries, 1.0, p0.entries,
                       std::pow(c.c1, removed), kEntryTolerance);
  detail::entrywise_ge(rep, "lemma3_upper", p0.entries, std::pow(c.c2, removed), pg.entries, 1.0,
                       kEntryTolerance);
  rep.invariants(pg);
  rep.invariants(p0);
  return rep.take();
}

/// P(sigma^{v,k}, tau^{v,l}) <= c3^deg(v) P(sigma, tau) for all sigma, tau.
inline std::vector<CheckResult> verify_lemma_vertex(const std::string& instance, const Graph& g,
                                                    const ModelParams& m, const ChainMatrix& p,
                                                    Vertex v, Color k, Color l) {
  auto params = model_params_list(m);
  params.emplace_back("v", static_cast<double>(v));
  params.emplace_back("k", k);
  params.emplace_back("l", l);
  Report rep(instance, std::move(params));
  const int q = m.q();
  const std::size_t n = g.n_vertices();
  const auto qpow = detail::powers_of(static_cast<std::uint64_t>(q), n);
  const double bound = std::pow(comparison_constants(m.beta(), q, 0).c3,
                                static_cast<double>(g.degree(v)));
  auto recolor = [&](std::size_t s, Color c) {
    const auto digit = static_cast<std::uint64_t>((s / qpow[v]) % static_cast<std::uint64_t>(q));
    return static_cast<std::size_t>(s - digit * qpow[v] + static_cast<std::uint64_t>(c - 1) * qpow[v]);
  };
  double worst = std::numeric_limits<double>::infinity(), wl = 0, wr = 0;
  std::size_t bad = 0;
  for (std::size_t s = 0; s < p.dim(); ++s)
    for (std::size_t t = 0; t < p.dim(); ++t) {
      const double lhs = p.entries(recolor(s, k), recolor(t, l));
      const double rhs = bound * p.entries(s, t);
      if (rhs - lhs < -kEntryTolerance) ++bad;
      if (rhs - lhs < worst) {
        worst = rhs - lhs;
        wl = lhs;
        wr = rhs;
      }
    }
  rep.le("lemma4", wl, wr, kEntryTolerance).violations = bad;
  return rep.take();
}

inline std::vector<CheckResult> verify_lemma_vertex(const std::string& instance, const Graph& g,
                                                    const ModelParams& m, Vertex v, Color k,
                                                    Color l, const ExactOptions& opt = {}) {
  return verify_lemma_vertex(instance, g, m, build_sw_matrix(g, m, opt), v, k, l);
}

/// lambda(P) >= c_SW lambda(P_HB), with the intermediate steps of its proof:
/// lambda(Q) >= lambda(P_HB^2) >= lambda(P_HB), lambda(P) <= lambda(P^2) <=
/// 2 lambda(P), Q <= q c P entrywise, c <= c3^(2 Delta), and lambda(P) =
/// lambda(P~).
inline std::vector<CheckResult> verify_theorem_main(const std::string& instance, const Graph& g,
                                                    const ModelParams& m,
                                                    const ExactOptions& opt = {}) {
  Report rep(instance, model_params_list(m));
  const std::size_t delta = max_degree(g);
  const ComparisonConstants c = comparison_constants(m.beta(), m.q(), delta);

  const ChainMatrix hb = build_hb_matrix(g, m, opt);
  const ChainMatrix sw = build_sw_matrix(g, m, opt);
  const ChainMatrix q_chain{"Q", multiply(multiply(hb.entries, sw.entries), hb.entries),
                            hb.stationary};
  const ChainMatrix hb2 = square(hb);
  const ChainMatrix sw2 = square(sw);
  for (const auto* mat : {&hb, &sw, &q_chain, &hb2, &sw2}) rep.invariants(*mat);

  const double gap_p = spectral_gap(sw).gap;
  const double gap_hb = spectral_gap(hb).gap;
  const double gap_q = spectral_gap(q_chain).gap;
  const double gap_hb2 = spectral_gap(hb2).gap;
  const double gap_p2 = spectral_gap(sw2).gap;

  rep.ge("thm1", gap_p, c.c_sw * gap_hb, kGapTolerance);
  rep.ge("lemma2_Q_vs_HB2", gap_q, gap_hb2, kGapTolerance);
  rep.ge("lemma2_HB2_vs_HB", gap_hb2, gap_hb, kGapTolerance);
  rep.ge("gap_square_lower", gap_p2, gap_p, kGapTolerance);
  rep.le("gap_square_upper", gap_p2, 2.0 * gap_p, kGapTolerance);

  if (m.p() > 0.0) {
    const ChainMatrix swrc = build_sw_rc_matrix(g, m, opt);
    rep.invariants(swrc);
    rep.eq("gap_P_equals_P_tilde", gap_p, spectral_gap(swrc).gap, kGapTolerance);
  }

  const AdjacentRatio ratio = adjacent_ratio(sw.entries, g.n_vertices(), m.q());
  rep.le("adjacent_zero_denominators", static_cast<double>(ratio.zero_denominators), 0.0, 0.0);
  rep.le("adjacent_ratio_bound", ratio.c, std::pow(c.c3, 2.0 * static_cast<double>(delta)),
         kEntryTolerance * std::max(1.0, ratio.c));
  detail::entrywise_ge(rep, "Q_le_qcP", sw.entries, static_cast<double>(m.q()) * ratio.c,
                       q_chain.entries, 1.0, kEntryTolerance);
  rep.eq("c3_equals_c2_over_c1", c.c3, c.c2 / c.c1,
         8.0 * std::numeric_limits<double>::epsilon() * c.c3);
  return rep.take();
}

/// lambda(P) >= c~_SW lambda(P_Lambda^2) together with the restricted-chain
/// facts its proof relies on.
inline std::vector<CheckResult> verify_theorem_main_prime(const std::string& instance,
                                                          const Graph& g, const ModelParams& m,
                                                          const RestrictedContext& ctx,
                                                          const ExactOptions& opt = {}) {
  auto params = model_params_list(m);
  params.emplace_back("v", static_cast<double>(ctx.vertex));
  params.emplace_back("k", ctx.color);
  Report rep(instance, std::move(params));

  const double mass = restricted_hb_offdiag_mass(g, m, ctx, opt);
  rep.le("restricted_offdiag_mass", mass, 1.0, kChainTolerance);
  if (mass > 1.0 + kChainTolerance) return rep.take();

  const std::size_t delta_t = max_degree(g, ctx.vertex);
  const ComparisonConstants c = comparison_constants(m.beta(), m.q(), max_degree(g), delta_t);

  const ChainMatrix pl = build_restricted_hb_matrix(g, m, ctx, opt);
  const ChainMatrix pl2 = square(pl);
  const ChainMatrix sw = build_sw_matrix(g, m, opt);
  const ChainMatrix qt = build_Qtilde_matrix(g, m, ctx, opt);
  for (const auto* mat : {&pl, &pl2, &sw, &qt}) rep.invariants(*mat);

  const double gap_p = spectral_gap(sw).gap;
  const double gap_pl2 = spectral_gap(pl2).gap;
  const double gap_qt = spectral_gap(qt).gap;
  rep.ge("thm1p", gap_p, c.c_sw_tilde * gap_pl2, kGapTolerance);
  rep.ge("thm1p_Qtilde_vs_PLambda2", gap_qt, gap_pl2, kGapTolerance);
  rep.ge("thm1p_P_vs_Qtilde", gap_p, c.c_sw_tilde * gap_qt, kGapTolerance);

  // pi F1 = pi(.|Lambda), pi(.|Lambda) F2 = pi, pi(.|Lambda) P_Lambda = pi(.|Lambda).
  const std::vector<double>& pi = sw.stationary;
  const auto states = restricted_states(g, m.q(), ctx, opt.cap);
  std::vector<double> pi_cond(states.size());
  double mass_lambda = 0.0;
  for (std::uint64_t s : states) mass_lambda += pi[s];
  for (std::size_t i = 0; i < states.size(); ++i) pi_cond[i] = pi[states[i]] / mass_lambda;

  auto max_diff = [](const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
  };
  rep.le("pi_F1_is_conditional",
         max_diff(left_multiply(pi, build_F1_matrix(g, m, ctx, opt)), pi_cond), 0.0,
         kEntryTolerance);
  rep.le("conditional_F2_is_pi",
         max_diff(left_multiply(pi_cond, build_F2_matrix(g, m, ctx, opt)), pi), 0.0,
         kEntryTolerance);
  rep.le("restricted_stationary", max_diff(left_multiply(pi_cond, pl.entries), pi_cond), 0.0,
         kEntryTolerance);
  return rep.take();
}

/// lambda(M) >= max(lambda(P_G at beta), lambda(P_{G_D} at beta*)); for a
/// tree also lambda(M) = 1.
inline std::vector<CheckResult> verify_prop_modified(const std::string& instance,
                                                     const DualMap& dmap, const ModelParams& m,
                                                     const ExactOptions& opt = {}) {
  auto params = model_params_list(m);
  params.emplace_back("p_star", m.p_star());
  params.emplace_back("beta_star", m.beta_star());
  Report rep(instance, std::move(params));

  const ChainMatrix mm = build_modified_sw_matrix(dmap, m, opt);
  const ChainMatrix pg = build_sw_matrix(dmap.primal, m, opt);
  ChainMatrix pd = build_sw_matrix(dmap.dual, m.dual(), opt);
  pd.label = "P_dual";
  for (const ChainMatrix* mat : std::initializer_list<const ChainMatrix*>{&mm, &pg, &pd})
    rep.invariants(*mat);

  const double gap_m = spectral_gap(mm).gap;
  const double gap_g = spectral_gap(pg).gap;
  const double gap_d = spectral_gap(pd).gap;
  rep.ge("prop5", gap_m, std::max(gap_g, gap_d), kGapTolerance);
  if (is_tree(dmap.primal)) rep.eq("tree_gap_one", gap_m, 1.0, kGapTolerance);

  const Matrix d = build_D_matrix(dmap, opt);
  rep.le("D_Dstar_identity", max_abs_diff(multiply(d, d.transpose()), Matrix::identity(d.rows())),
         0.0, 0.0);
  return rep.take();
}

/// mu_p(A) = mu*_{p*}(A_D) for every A, plus the dual-parameter relation.
inline std::vector<CheckResult> verify_duality(const std::string& instance, const DualMap& dmap,
                                               const ModelParams& m,
                                               const ExactOptions& opt = {}) {
  auto params = model_params_list(m);
  params.emplace_back("p_star", m.p_star());
  Report rep(instance, std::move(params));
  const ModelParams dm = m.dual();
  const auto mu = exact_distribution(dmap.primal, m, Space::rc, opt.cap);
  const auto mu_star = exact_distribution(dmap.dual, dm, Space::rc, opt.cap);
  double worst = 0.0;
  std::size_t bad = 0;
  for (std::size_t a = 0; a < mu.size(); ++a) {
    const auto ad = dual_rc_state(RCState::from_index(a, dmap.primal.n_edges()), dmap).index();
    const double d = std::abs(mu[a] - mu_star[ad]);
    if (d > kEntryTolerance) ++bad;
    worst = std::max(worst, d);
  }
  rep.le("duality_max_abs_diff", worst, 0.0, kEntryTolerance).violations = bad;

  const double odds_star = dm.p() / (1.0 - dm.p());
  const double target = m.q() * (1.0 - m.p()) / m.p();
  rep.eq("dual_parameter_relation", odds_star / target, 1.0, kEntryTolerance);
  if (std::abs(m.p() - self_dual_p(m.q())) < 1e-15)
    rep.eq("self_dual_fixed_point", dm.p(), m.p(), 1e-14);
  return rep.take();
}

}  // namespace pottsmc
