#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "graph.hpp"
#include "model.hpp"
#include "rng.hpp"
#include "verify.hpp"

namespace pottsmc {

struct SuiteInfo {
  const char* name;
  const char* description;
};

inline const std::vector<SuiteInfo>& suite_catalog() {
  static const std::vector<SuiteInfo> catalog = {
      {"duality", "RC measure vs dual RC measure at p* on the 3x3 lattice"},
      {"lemma3", "spanning-subgraph sandwich c1^m P_G0 <= P_G <= c2^m P_G0"},
      {"lemma4", "single-vertex recoloring bound P(s^{v,k}, t^{v,l}) <= c3^deg(v) P(s, t)"},
      {"thm1", "Swendsen-Wang gap vs heat-bath gap, plus Q and P^2 gap relations"},
      {"thm1p", "Swendsen-Wang gap vs restricted heat-bath gap with one pinned vertex"},
      {"prop5", "modified Swendsen-Wang gap vs primal and dual Swendsen-Wang gaps"},
  };
  return catalog;
}

inline bool is_known_suite(const std::string& name) {
  if (name == "all") return true;
  for (const auto& s : suite_catalog())
    if (name == s.name) return true;
  return false;
}

/// A single user-chosen instance replacing a suite's standard matrix.
struct InstanceSpec {
  std::string name;
  Graph graph;
  std::optional<DualMap> dual;
  ModelParams params;
  std::optional<RestrictedContext> pin;
};

struct SuiteOptions {
  std::uint64_t seed = kDefaultSeed;
  std::size_t threads = 1;
  ExactOptions exact;
  std::optional<InstanceSpec> instance;
};

struct SuiteEntry {
  std::string suite;
  CheckResult result;
};

namespace detail {

using SuiteTask = std::function<std::vector<CheckResult>()>;

struct NamedGraph {
  std::string name;
  Graph graph;
};

inline std::vector<NamedGraph> small_graphs() {
  return {{"K2", build_path(2)},
          {"P3", build_path(3)},
          {"G2", build_square_lattice(2)},
          {"C4", build_cycle(4)}};
}

/// Spanning subgraphs of g: all of them when |E| <= 2, otherwise `count`
/// draws keeping each edge with probability 1/2.
inline std::vector<RCState> spanning_subsets(const Graph& g, std::size_t count, RngStream rng) {
  std::vector<RCState> out;
  if (g.n_edges() <= 2) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << g.n_edges()); ++mask)
      out.push_back(RCState::from_index(mask, g.n_edges()));
    return out;
  }
  for (std::size_t i = 0; i < count; ++i) {
    RCState a(g.n_edges());
    for (EdgeIndex e = 0; e < g.n_edges(); ++e)
      if (rng.bernoulli(0.5)) a.set(e);
    out.push_back(std::move(a));
  }
  return out;
}

inline void add_duality(std::vector<SuiteTask>& tasks, const SuiteOptions& opt) {
  const ExactOptions ex = opt.exact;
  if (opt.instance) {
    const InstanceSpec& in = *opt.instance;
    if (!in.dual) throw std::invalid_argument("duality suite needs a graph with a known dual");
    tasks.push_back([in, ex] { return verify_duality(in.name, *in.dual, in.params, ex); });
    return;
  }
  const auto dmap = std::make_shared<const DualMap>(build_dual_square_lattice(3));
  for (int q : {2, 3})
    for (double p : {0.3, self_dual_p(q), 0.7})
      tasks.push_back([dmap, q, p, ex] {
        return verify_duality("G3", *dmap, ModelParams::from_p(q, p), ex);
      });
}

inline void add_lemma3(std::vector<SuiteTask>& tasks, const SuiteOptions& opt) {
  const ExactOptions ex = opt.exact;
  const RngStream rng = RngStream(opt.seed).split(3);
  auto add = [&](const std::string& name, const Graph& g, const ModelParams& m) {
    for (const RCState& e0 : spanning_subsets(g, 10, rng))
      tasks.push_back([name, g, e0, m, ex] { return verify_lemma_spanning(name, g, e0, m, ex); });
  };
  if (opt.instance) {
    add(opt.instance->name, opt.instance->graph, opt.instance->params);
    return;
  }
  for (int q : {2, 3})
    for (double beta : {0.3, 1.0}) {
      const ModelParams m = ModelParams::from_beta(q, beta);
      add("K2", build_path(2), m);
      add("G2", build_square_lattice(2), m);
    }
}

inline void add_lemma4(std::vector<SuiteTask>& tasks, const SuiteOptions& opt) {
  const ExactOptions ex = opt.exact;
  auto add = [&](const std::string& name, const Graph& g, const ModelParams& m) {
    tasks.push_back([name, g, m, ex] {
      const ChainMatrix p = build_sw_matrix(g, m, ex);
      std::vector<CheckResult> out;
      for (Vertex v = 0; v < g.n_vertices(); ++v)
        for (Color k = 1; k <= m.q(); ++k)
          for (Color l = 1; l <= m.q(); ++l)
            for (auto& r : verify_lemma_vertex(name, g, m, p, v, k, l)) out.push_back(std::move(r));
      return out;
    });
  };
  if (opt.instance) {
    add(opt.instance->name, opt.instance->graph, opt.instance->params);
    return;
  }
  for (double beta : {0.5, 1.0}) add("G2", build_square_lattice(2), ModelParams::from_beta(2, beta));
}

inline void add_thm1(std::vector<SuiteTask>& tasks, const SuiteOptions& opt) {
  const ExactOptions ex = opt.exact;
  if (opt.instance) {
    const InstanceSpec& in = *opt.instance;
    tasks.push_back([in, ex] { return verify_theorem_main(in.name, in.graph, in.params, ex); });
    return;
  }
  for (const auto& ng : small_graphs())
    for (int q : {2, 3})
      for (double beta : {0.3, critical_beta(q), 1.5})
        tasks.push_back([ng, q, beta, ex] {
          return verify_theorem_main(ng.name, ng.graph, ModelParams::from_beta(q, beta), ex);
        });
}

inline void add_thm1p(std::vector<SuiteTask>& tasks, const SuiteOptions& opt) {
  const ExactOptions ex = opt.exact;
  auto add = [&](const std::string& name, const Graph& g, const ModelParams& m,
                 RestrictedContext ctx) {
    tasks.push_back([name, g, m, ctx, ex] {
      return verify_theorem_main_prime(name, g, m, ctx, ex);
    });
  };
  if (opt.instance) {
    const InstanceSpec& in = *opt.instance;
    add(in.name, in.graph, in.params, in.pin.value_or(RestrictedContext{0, 1}));
    return;
  }
  const DualMap d3 = build_dual_square_lattice(3);
  const Vertex outer = *d3.outer_vertex;
  for (double beta : {0.5, 1.0}) {
    const ModelParams m = ModelParams::from_beta(2, beta);
    add("K1,4", build_star(4), m, {0, 1});
    add("G2", build_square_lattice(2), m, {0, 1});
    add("dual(G3)", d3.dual, m, {outer, 1});
  }
}

inline void add_prop5(std::vector<SuiteTask>& tasks, const SuiteOptions& opt) {
  const ExactOptions ex = opt.exact;
  auto add = [&](const std::string& name, std::shared_ptr<const DualMap> dmap,
                 const ModelParams& m) {
    tasks.push_back([name, dmap, m, ex] { return verify_prop_modified(name, *dmap, m, ex); });
  };
  if (opt.instance) {
    const InstanceSpec& in = *opt.instance;
    if (!in.dual) throw std::invalid_argument("prop5 suite needs a graph with a known dual");
    add(in.name, std::make_shared<const DualMap>(*in.dual), in.params);
    return;
  }
  const auto g2 = std::make_shared<const DualMap>(build_dual_square_lattice(2));
  for (double p : {0.4, self_dual_p(2), 0.7}) add("G2", g2, ModelParams::from_p(2, p));
  const auto p4 = std::make_shared<const DualMap>(build_tree_dual(build_path(4)));
  const auto k13 = std::make_shared<const DualMap>(build_tree_dual(build_star(3)));
  for (int q : {2, 3})
    for (double beta : {0.5, 2.0}) {
      add("P4", p4, ModelParams::from_beta(q, beta));
      add("K1,3", k13, ModelParams::from_beta(q, beta));
    }
}

inline void add_suite(std::vector<SuiteTask>& tasks, const std::string& name,
                      const SuiteOptions& opt) {
  if (name == "duality") add_duality(tasks, opt);
  else if (name == "lemma3") add_lemma3(tasks, opt);
  else if (name == "lemma4") add_lemma4(tasks, opt);
  else if (name == "thm1") add_thm1(tasks, opt);
  else if (name == "thm1p") add_thm1p(tasks, opt);
  else if (name == "prop5") add_prop5(tasks, opt);
  else throw std::invalid_argument("unknown suite '" + name + "'");
}

/// Runs every task, on up to `threads` threads; output order is task order.
inline std::vector<std::vector<CheckResult>> run_tasks(const std::vector<SuiteTask>& tasks,
                                                       std::size_t threads) {
  std::vector<std::vector<CheckResult>> out(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();) {
      try {
        out[i] = tasks[i]();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  threads = std::max<std::size_t>(1, std::min(threads, tasks.size()));
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace detail

/// Runs one suite, or all of them in catalog order for "all".
inline std::vector<SuiteEntry> run_suite(const std::string& name, const SuiteOptions& opt = {}) {
  std::vector<std::string> names;
  if (name == "all") {
    for (const auto& s : suite_catalog()) names.emplace_back(s.name);
  } else {
    names.push_back(name);
  }
  std::vector<detail::SuiteTask> tasks;
  std::vector<std::string> owner;
  for (const auto& n : names) {
    detail::add_suite(tasks, n, opt);
    owner.resize(tasks.size(), n);
  }
  auto results = detail::run_tasks(tasks, opt.threads);
  std::vector<SuiteEntry> out;
  for (std::size_t i = 0; i < results.size(); ++i)
    for (auto& r : results[i]) out.push_back({owner[i], std::move(r)});
  return out;
}

inline bool all_pass(const std::vector<SuiteEntry>& entries) {
  for (const auto& e : entries)
    if (!e.result.pass) return false;
  return true;
}

}  // namespace pottsmc
