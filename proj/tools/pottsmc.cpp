#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pottsmc/json_out.hpp"
#include "pottsmc/pottsmc.hpp"

using namespace pottsmc;

namespace {

enum Exit { kOk = 0, kConfigError = 1, kCapExceeded = 2, kVerifyFailed = 3 };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GraphSource {
  std::optional<std::size_t> L;
  std::optional<std::string> file;
  std::optional<std::size_t> path, cycle, star;

  bool given() const { return L || file || path || cycle || star; }

  void attach(CLI::App* cmd) {
    auto* l = cmd->add_option("--L", L, "square lattice side length");
    auto* f = cmd->add_option("--graph", file, "edge-list file (dual sections optional)");
    auto* p = cmd->add_option("--path", path, "path on n vertices");
    auto* c = cmd->add_option("--cycle", cycle, "cycle on n vertices");
    auto* s = cmd->add_option("--star", star, "star with n leaves, center 0");
    std::vector<CLI::Option*> all{l, f, p, c, s};
    for (auto* a : all)
      for (auto* b : all)
        if (a != b) a->excludes(b);
  }
};

struct LoadedGraph {
  std::string name;
  Graph graph;
  std::optional<DualMap> dual;
};

LoadedGraph load_graph(const GraphSource& src) {
  if (src.L) {
    if (*src.L == 0) throw ConfigError("--L must be >= 1");
    Graph g = build_square_lattice(*src.L);
    std::optional<DualMap> d;
    if (*src.L >= 2) d = build_dual_square_lattice(*src.L);
    else d = build_tree_dual(g);
    return {"G" + std::to_string(*src.L), std::move(g), std::move(d)};
  }
  if (src.file) {
    GraphFile gf;
    try {
      gf = read_graph_file(*src.file);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
    if (!gf.dual && gf.graph.n_vertices() > 0 && is_tree(gf.graph)) gf.dual = build_tree_dual(gf.graph);
    return {*src.file, std::move(gf.graph), std::move(gf.dual)};
  }
  auto with_tree_dual = [](std::string name, Graph g) {
    std::optional<DualMap> d;
    if (is_tree(g)) d = build_tree_dual(g);
    return LoadedGraph{std::move(name), std::move(g), std::move(d)};
  };
  if (src.path) {
    if (*src.path == 0) throw ConfigError("--path needs at least one vertex");
    return with_tree_dual("P" + std::to_string(*src.path), build_path(*src.path));
  }
  if (src.cycle) {
    if (*src.cycle < 3) throw ConfigError("--cycle needs at least 3 vertices");
    return with_tree_dual("C" + std::to_string(*src.cycle), build_cycle(*src.cycle));
  }
  if (src.star) return with_tree_dual("K1," + std::to_string(*src.star), build_star(*src.star));
  throw ConfigError("no graph given; use one of --L, --graph, --path, --cycle, --star");
}

struct ParamSource {
  int q = 2;
  std::optional<double> beta, p;

  bool given() const { return beta || p; }

  void attach(CLI::App* cmd) {
    cmd->add_option("--q", q, "number of colors")->check(CLI::Range(2, 64));
    auto* b = cmd->add_option("--beta", beta, "inverse temperature");
    auto* pp = cmd->add_option("--p", p, "edge parameter p = 1 - exp(-beta)");
    b->excludes(pp);
    pp->excludes(b);
  }

  ModelParams build() const {
    if (beta) return ModelParams::from_beta(q, *beta);
    if (p) return ModelParams::from_p(q, *p);
    throw ConfigError("one of --beta or --p is required");
  }
};

RestrictedContext parse_pin(const std::optional<std::string>& s) {
  if (!s) return {0, 1};
  const auto comma = s->find(',');
  if (comma == std::string::npos) throw ConfigError("--pin expects v,k");
  try {
    const unsigned long v = std::stoul(s->substr(0, comma));
    const int k = std::stoi(s->substr(comma + 1));
    return {static_cast<Vertex>(v), k};
  } catch (const std::exception&) {
    throw ConfigError("--pin expects v,k with integers");
  }
}

/// Opens `path` for writing or returns stdout for "-" / empty.
class Output {
 public:
  explicit Output(const std::optional<std::string>& path) {
    if (path && *path != "-") {
      file_.open(*path);
      if (!file_) throw ConfigError("cannot write '" + *path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

// ---------------------------------------------------------------------------

struct LatticeCmd {
  std::size_t L = 0;
  bool dual = false;
  std::optional<std::string> out;

  int run() const {
    if (L == 0) throw ConfigError("--L must be >= 1");
    Output o(out);
    if (!dual) {
      write_edge_list(o.stream(), build_square_lattice(L));
    } else if (L == 1) {
      write_dual_map(o.stream(), build_tree_dual(build_square_lattice(1)));
    } else {
      write_dual_map(o.stream(), build_dual_square_lattice(L));
    }
    return kOk;
  }
};

struct DistCmd {
  GraphSource graph;
  ParamSource params;
  std::string space = "potts";
  std::size_t cap = kDefaultDistributionCap;
  std::optional<std::string> out;

  int run() const {
    const LoadedGraph lg = load_graph(graph);
    const ModelParams m = params.build();
    const Space sp = space == "rc" ? Space::rc : Space::potts;
    const auto logw = sp == Space::rc ? rc_log_weights(lg.graph, m, cap) : potts_log_weights(lg.graph, m, cap);
    const auto prob = detail::normalize_log_weights(logw);
    Output o(out);
    auto& os = o.stream();
    os << "state_index,weight,probability\n";
    char buf[96];
    for (std::size_t i = 0; i < prob.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i, std::exp(logw[i]), prob[i]);
      os << buf;
    }
    return kOk;
  }
};

struct SampleCmd {
  GraphSource graph;
  ParamSource params;
  std::string dynamics;
  std::size_t steps = 0, burnin = 0, thin = 1;
  std::uint64_t seed = kDefaultSeed;
  std::optional<std::string> pin, out;

  int run() const {
    const LoadedGraph lg = load_graph(graph);
    const ModelParams m = params.build();
    const Dynamics dyn = parse_dynamics(dynamics);
    if (steps <= burnin) throw ConfigError("--steps must exceed --burnin");
    ChainSetup setup{lg.graph, lg.dual, parse_pin(pin)};
    if (dyn == Dynamics::modified_sw && !setup.dual)
      throw ConfigError("msw needs a graph with a known dual (lattice, tree, or a dual file)");

    RecordOptions rec;
    rec.thin = thin;
    rec.state_indices = out.has_value();
    RngStream rng(seed);
    const TrajectorySummary sum = run_chain(setup, m, dyn, steps, burnin, rng, rec);

    if (out) {
      Output o(out);
      auto& os = o.stream();
      const bool with_index = !sum.state_indices.empty();
      os << (with_index ? "step,energy,state_index\n" : "step,energy\n");
      for (std::size_t i = 0; i < sum.n_steps; ++i) {
        os << burnin + i * thin + 1 << ',' << static_cast<long long>(sum.energy_series[i]);
        if (with_index) os << ',' << sum.state_indices[i];
        os << '\n';
      }
    }

    json j = {{"dynamics", dynamics_name(dyn)}, {"graph", lg.name}, {"q", m.q()},
              {"beta", m.beta()}, {"p", m.p()}, {"steps", steps}, {"burnin", burnin},
              {"thin", thin}, {"seed", seed}, {"recorded", sum.n_steps},
              {"mean_energy", sum.mean_energy}};
    if (sum.iat) {
      j["iat"] = sum.iat->tau;
      j["iat_stderr"] = sum.iat->stderr_;
      j["iat_window"] = sum.iat->window;
      j["iat_antithetic"] = sum.iat->antithetic;
    } else {
      j["iat"] = nullptr;
      j["iat_stderr"] = nullptr;
    }
    if (!sum.state_histogram.empty()) {
      std::vector<double> target = exact_distribution(lg.graph, m, Space::potts);
      if (dyn == Dynamics::restricted_hb) {
        double mass = 0.0;
        for (std::size_t s = 0; s < target.size(); ++s) {
          if (PottsConfig::from_index(s, lg.graph.n_vertices(), m.q())[setup.pin.vertex] != setup.pin.color)
            target[s] = 0.0;
          mass += target[s];
        }
        for (auto& t : target) t /= mass;
      }
      j["tv_vs_exact"] = tv_distance(sum.state_histogram, target);
    }
    write_json(std::cout, j);
    return kOk;
  }
};

struct GapCmd {
  GraphSource graph;
  ParamSource params;
  std::string chain;
  std::optional<std::string> pin, out;
  std::string format = "json";
  std::optional<std::size_t> count;
  std::size_t cap = ExactOptions{}.cap;

  int run() const {
    if (format != "json") throw ConfigError("gap supports --format json only");
    const LoadedGraph lg = load_graph(graph);
    const ModelParams m = params.build();
    const ExactOptions opt{cap};
    ChainMatrix c;
    if (chain == "hb") c = build_hb_matrix(lg.graph, m, opt);
    else if (chain == "sw") c = build_sw_matrix(lg.graph, m, opt);
    else if (chain == "swrc") c = build_sw_rc_matrix(lg.graph, m, opt);
    else if (chain == "q") c = build_Q_matrix(lg.graph, m, opt);
    else if (chain == "rhb") c = build_restricted_hb_matrix(lg.graph, m, parse_pin(pin), opt);
    else if (chain == "msw") {
      if (!lg.dual) throw ConfigError("msw needs a graph with a known dual");
      c = build_modified_sw_matrix(*lg.dual, m, opt);
    } else {
      throw ConfigError("unknown chain '" + chain + "'");
    }
    SpectrumResult s = spectral_gap(c);
    if (count && *count < s.eigenvalues.size()) s.eigenvalues.resize(*count);
    json j = to_json(s, c.dim());
    j["chain"] = c.label;
    Output o(out);
    write_json(o.stream(), j);
    return kOk;
  }
};

struct VerifyCmd {
  GraphSource graph;
  ParamSource params;
  std::string suite = "all";
  std::uint64_t seed = kDefaultSeed;
  std::size_t threads = 1;
  std::size_t cap = ExactOptions{}.cap;
  std::optional<std::string> pin, out;

  int run() const {
    if (!is_known_suite(suite)) throw ConfigError("unknown suite '" + suite + "'");
    SuiteOptions opt;
    opt.seed = seed;
    opt.threads = threads;
    opt.exact.cap = cap;
    if (graph.given() || params.given()) {
      if (suite == "all") throw ConfigError("a custom instance needs a single --suite");
      LoadedGraph lg = load_graph(graph);
      opt.instance = InstanceSpec{lg.name, std::move(lg.graph), std::move(lg.dual), params.build(),
                                  pin ? std::optional(parse_pin(pin)) : std::nullopt};
    }
    const auto entries = run_suite(suite, opt);
    Output o(out);
    write_json(o.stream(), to_json(entries));
    if (!all_pass(entries)) {
      std::size_t bad = 0;
      for (const auto& e : entries) bad += e.result.pass ? 0 : 1;
      std::cerr << "verify: " << bad << " of " << entries.size() << " checks failed\n";
      return kVerifyFailed;
    }
    return kOk;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Potts / random-cluster Monte Carlo and exact spectral-gap checks", "pottsmc"};
  app.require_subcommand(0, 1);
  app.set_version_flag("--version", std::string("pottsmc ") + kVersion);
  bool list_suites = false;
  app.add_flag("--list-suites", list_suites, "list verification suites and exit");

  LatticeCmd lattice;
  auto* c_lat = app.add_subcommand("lattice", "emit the square lattice (and its dual) as an edge list");
  c_lat->add_option("--L", lattice.L, "side length")->required();
  c_lat->add_flag("--dual", lattice.dual, "append the dual graph and the edge bijection");
  c_lat->add_option("--out", lattice.out, "output file (default stdout)");

  DistCmd dist;
  auto* c_dist = app.add_subcommand("dist", "exact Potts or random-cluster distribution as CSV");
  dist.graph.attach(c_dist);
  dist.params.attach(c_dist);
  c_dist->add_option("--space", dist.space, "potts or rc")->check(CLI::IsMember({"potts", "rc"}));
  c_dist->add_option("--cap", dist.cap, "largest state space to enumerate");
  c_dist->add_option("--out", dist.out, "output file (default stdout)");

  SampleCmd sample;
  auto* c_sample = app.add_subcommand("sample", "run a sampler and summarize the trajectory");
  sample.graph.attach(c_sample);
  sample.params.attach(c_sample);
  c_sample->add_option("--dynamics", sample.dynamics, "hb, sw, msw or rhb")
      ->required()
      ->check(CLI::IsMember({"hb", "sw", "msw", "rhb"}));
  c_sample->add_option("--steps", sample.steps, "total steps including burn-in")->required();
  c_sample->add_option("--burnin", sample.burnin, "steps discarded before recording");
  c_sample->add_option("--thin", sample.thin, "record every n-th step")->check(CLI::PositiveNumber);
  c_sample->add_option("--seed", sample.seed, "RNG seed (default 42)");
  c_sample->add_option("--pin", sample.pin, "pinned vertex and color v,k for rhb (default 0,1)");
  c_sample->add_option("--out", sample.out, "trajectory CSV");

  GapCmd gap;
  auto* c_gap = app.add_subcommand("gap", "exact spectral gap of a chain");
  gap.graph.attach(c_gap);
  gap.params.attach(c_gap);
  c_gap->add_option("--chain", gap.chain, "hb, sw, swrc, msw, q or rhb")
      ->required()
      ->check(CLI::IsMember({"hb", "sw", "swrc", "msw", "q", "rhb"}));
  c_gap->add_option("--pin", gap.pin, "pinned vertex and color v,k for rhb (default 0,1)");
  c_gap->add_option("--eigenvalues", gap.count, "number of leading eigenvalues to print");
  c_gap->add_option("--format", gap.format, "output format (json)");
  c_gap->add_option("--cap", gap.cap, "largest state space per factor");
  c_gap->add_option("--out", gap.out, "output file (default stdout)");

  VerifyCmd verify;
  auto* c_verify = app.add_subcommand("verify", "run verification suites, JSON report");
  verify.graph.attach(c_verify);
  verify.params.attach(c_verify);
  c_verify->add_option("--suite", verify.suite, "suite name or all");
  c_verify->add_option("--seed", verify.seed, "seed for randomly drawn instances (default 42)");
  c_verify->add_option("--threads", verify.threads, "worker threads (default 1)")
      ->check(CLI::PositiveNumber);
  c_verify->add_option("--pin", verify.pin, "pinned vertex and color v,k for thm1p");
  c_verify->add_option("--cap", verify.cap, "largest state space per factor");
  c_verify->add_option("--out", verify.out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (list_suites) {
      for (const auto& s : suite_catalog()) std::cout << s.name << "\t" << s.description << '\n';
      return kOk;
    }
    if (c_lat->parsed()) return lattice.run();
    if (c_dist->parsed()) return dist.run();
    if (c_sample->parsed()) return sample.run();
    if (c_gap->parsed()) return gap.run();
    if (c_verify->parsed()) return verify.run();
    std::cout << app.help();
    return kConfigError;
  } catch (const CapExceeded& e) {
    std::cerr << "pottsmc: " << e.what() << '\n';
    return kCapExceeded;
  } catch (const ChainError& e) {
    std::cerr << "pottsmc: " << e.what() << '\n';
    return kVerifyFailed;
  } catch (const std::exception& e) {
    std::cerr << "pottsmc: " << e.what() << '\n';
    return kConfigError;
  }
}
