#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <map>

#include "pottsmc/dynamics.hpp"
#include "pottsmc/graph.hpp"
#include "pottsmc/model.hpp"
#include "pottsmc/rng.hpp"

using namespace pottsmc;

namespace {

// Asserts count/n is within 4 binomial standard deviations of p.
void expect_binomial(std::size_t count, std::size_t n, double p, const std::string& what) {
  const double sd = std::sqrt(p * (1 - p) / static_cast<double>(n));
  EXPECT_NEAR(static_cast<double>(count) / static_cast<double>(n), p, 4 * sd + 1e-12) << what;
}

std::vector<std::size_t> histogram(std::size_t dim, std::size_t n,
                                   const std::function<std::size_t()>& draw) {
  std::vector<std::size_t> h(dim, 0);
  for (std::size_t i = 0; i < n; ++i) ++h[draw()];
  return h;
}

}  // namespace

TEST(HeatBath, IsolatedVertexIsUniform) {
  const Graph g(2, {});
  const ModelParams m = ModelParams::from_beta(3, 2.0);
  RngStream rng(1);
  const std::size_t n = 60000;
  std::vector<std::size_t> h(3, 0);
  for (std::size_t i = 0; i < n; ++i) {
    PottsConfig s{{1, 1}};
    heat_bath_update(g, m, s, 0, rng);
    ++h[s[0] - 1];
  }
  for (int c = 0; c < 3; ++c) expect_binomial(h[c], n, 1.0 / 3, "color " + std::to_string(c + 1));
}

TEST(HeatBath, KTwoFlipProbability) {
  const Graph g = build_path(2);
  const double beta = 0.9;
  const ModelParams m = ModelParams::from_beta(2, beta);
  RngStream rng(2);
  const std::size_t n = 100000;
  std::size_t flips = 0;
  for (std::size_t i = 0; i < n; ++i) {
    PottsConfig s{{1, 1}};
    heat_bath_update(g, m, s, 1, rng);
    flips += s[1] == 2;
  }
  expect_binomial(flips, n, 1.0 / (1.0 + std::exp(beta)), "flip");
}

TEST(HeatBath, BetaZeroResamplesUniformly) {
  const Graph g = build_square_lattice(2);
  const ModelParams m = ModelParams::from_beta(3, 0.0);
  RngStream rng(3);
  const std::size_t n = 90000;
  std::vector<std::size_t> h(3, 0);
  for (std::size_t i = 0; i < n; ++i) {
    PottsConfig s = PottsConfig::constant(4, 2);
    heat_bath_update(g, m, s, 2, rng);
    ++h[s[2] - 1];
  }
  for (int c = 0; c < 3; ++c) expect_binomial(h[c], n, 1.0 / 3, "color");
}

TEST(HeatBath, ChangesAtMostOneSite) {
  const Graph g = build_square_lattice(3);
  const ModelParams m = ModelParams::from_beta(3, 0.7);
  RngStream rng(4);
  PottsConfig s = PottsConfig::constant(9, 1);
  for (int t = 0; t < 2000; ++t) {
    const PottsConfig before = s;
    heat_bath_step(g, m, s, rng);
    int diff = 0;
    for (Vertex v = 0; v < 9; ++v) diff += before[v] != s[v];
    ASSERT_LE(diff, 1);
  }
}

TEST(SwBond, Examples) {
  const Graph g = build_square_lattice(2);
  RngStream rng(5);
  const ModelParams b0 = ModelParams::from_beta(2, 0.0);
  for (int i = 0; i < 100; ++i)
    EXPECT_EQ(sw_bond_step(g, b0, PottsConfig::constant(4, 1), rng).count(), 0u);
  const ModelParams m = ModelParams::from_beta(2, 5.0);
  for (int i = 0; i < 100; ++i)
    EXPECT_EQ(sw_bond_step(g, m, PottsConfig{{1, 2, 2, 1}}, rng).count(), 0u);
}

TEST(SwBond, KeepsMonochromaticEdgeWithProbabilityP) {
  const Graph g = build_path(2);
  const ModelParams m = ModelParams::from_p(2, 0.5);
  RngStream rng(6);
  const std::size_t n = 100000;
  std::size_t kept = 0;
  for (std::size_t i = 0; i < n; ++i) kept += sw_bond_step(g, m, PottsConfig{{1, 1}}, rng).count();
  const double sd = std::sqrt(0.25 / n);
  EXPECT_NEAR(kept / double(n), 0.5, 3 * sd);
}

TEST(SwColor, Examples) {
  const Graph g = build_square_lattice(2);
  const ModelParams m = ModelParams::from_beta(3, 1.0);
  RngStream rng(7);
  // All edges open: constant output, uniform color.
  std::vector<std::size_t> h(3, 0);
  const std::size_t n = 30000;
  for (std::size_t i = 0; i < n; ++i) {
    const PottsConfig s = sw_color_step(g, m, RCState::full(4), rng);
    for (Vertex v = 1; v < 4; ++v) ASSERT_EQ(s[v], s[0]);
    ++h[s[0] - 1];
  }
  for (int c = 0; c < 3; ++c) expect_binomial(h[c], n, 1.0 / 3, "constant color");

  // No edges open: uniform over all 81 configurations.
  const auto hist = histogram(81, 81000, [&] { return sw_color_step(g, m, RCState(4), rng).index(3); });
  for (std::size_t s = 0; s < 81; ++s) expect_binomial(hist[s], 81000, 1.0 / 81, "state");
}

TEST(SwColor, OutputRespectsOpenEdges) {
  const Graph g = build_square_lattice(3);
  const ModelParams m = ModelParams::from_beta(4, 1.0);
  RngStream rng(8);
  for (std::uint64_t i = 0; i < 4096; i += 37) {
    const RCState a = RCState::from_index(i, 12);
    const PottsConfig s = sw_color_step(g, m, a, rng);
    ASSERT_TRUE(a.subset_of(mono_edges(g, s)));
  }
}

TEST(SwStep, SingleVertexIsUniform) {
  const Graph g(1, {});
  const ModelParams m = ModelParams::from_beta(3, 0.5);
  RngStream rng(9);
  PottsConfig s{{1}};
  const auto h = histogram(3, 30000, [&] {
    sw_step(g, m, s, rng);
    return static_cast<std::size_t>(s[0] - 1);
  });
  for (auto c : h) expect_binomial(c, 30000, 1.0 / 3, "color");
}

TEST(SwStep, KTwoRowFromMonochromatic) {
  // p = 1/2: edge kept w.p. 1/2 -> constant uniform; dropped -> uniform over 4.
  // Row from (1,1) is 1/2 (1/2, 0, 0, 1/2) + 1/2 (1/4, ...) = (3/8, 1/8, 1/8, 3/8).
  const Graph g = build_path(2);
  const ModelParams m = ModelParams::from_p(2, 0.5);
  RngStream rng(10);
  const std::size_t n = 200000;
  const auto h = histogram(4, n, [&] {
    PottsConfig s{{1, 1}};
    sw_step(g, m, s, rng);
    return static_cast<std::size_t>(s.index(2));
  });
  const double want[4] = {3.0 / 8, 1.0 / 8, 1.0 / 8, 3.0 / 8};
  for (int i = 0; i < 4; ++i) expect_binomial(h[i], n, want[i], "state " + std::to_string(i));
}

TEST(SwRcStep, BetaZeroAlwaysEmpty) {
  const Graph g = build_square_lattice(2);
  const ModelParams m = ModelParams::from_beta(2, 0.0);
  RngStream rng(11);
  RCState a = RCState::full(4);
  for (int i = 0; i < 50; ++i) {
    sw_rc_step(g, m, a, rng);
    ASSERT_EQ(a.count(), 0u);
  }
}

TEST(SwRcStep, PreservesRcMeasureOnKTwo) {
  const Graph g = build_path(2);
  const ModelParams m = ModelParams::from_beta(2, 0.8);
  const auto mu = exact_distribution(g, m, Space::rc);
  RngStream rng(12);
  const std::size_t n = 100000;
  std::vector<std::size_t> h(2, 0);
  for (std::size_t i = 0; i < n; ++i) {
    RCState a(1);
    if (rng.uniform() < mu[1]) a.set(0);
    sw_rc_step(g, m, a, rng);
    ++h[a.index()];
  }
  // One degree of freedom; 10.83 is the 0.999 quantile.
  double chi2 = 0.0;
  for (int i = 0; i < 2; ++i) chi2 += std::pow(h[i] - n * mu[i], 2) / (n * mu[i]);
  EXPECT_LT(chi2, 10.83);
}

TEST(ModifiedSw, TreeStepIsAnExactSample) {
  const DualMap d = build_tree_dual(build_path(4));
  const ModelParams m = ModelParams::from_beta(2, 1.2);
  const auto pi = exact_distribution(d.primal, m, Space::potts);
  RngStream rng(13);
  const std::size_t n = 160000;
  const auto h = histogram(16, n, [&] {
    PottsConfig s{{1, 2, 1, 2}};
    modified_sw_step(d, m, s, rng);
    return static_cast<std::size_t>(s.index(2));
  });
  for (std::size_t s = 0; s < 16; ++s) expect_binomial(h[s], n, pi[s], "state " + std::to_string(s));
}

TEST(ModifiedSw, RejectsBetaZero) {
  const DualMap d = build_dual_square_lattice(2);
  RngStream rng(14);
  PottsConfig s = PottsConfig::constant(4, 1);
  EXPECT_THROW(modified_sw_step(d, ModelParams::from_beta(2, 0.0), s, rng), std::domain_error);
}

TEST(ModifiedSw, SelfDualParameter) {
  const ModelParams m = ModelParams::from_p(2, self_dual_p(2));
  EXPECT_NEAR(m.dual().p(), m.p(), 1e-14);
}

TEST(RestrictedHb, PinnedVertexNeverChanges) {
  const Graph g = build_square_lattice(3);
  const ModelParams m = ModelParams::from_beta(3, 0.8);
  const RestrictedContext ctx{4, 2};
  RngStream rng(15);
  PottsConfig s = PottsConfig::constant(9, 2);
  for (int t = 0; t < 100000; ++t) {
    restricted_hb_step(g, m, ctx, s, rng);
    ASSERT_EQ(s[4], 2);
  }
  PottsConfig bad = PottsConfig::constant(9, 1);
  EXPECT_THROW(restricted_hb_step(g, m, ctx, bad, rng), std::invalid_argument);
}

TEST(RestrictedHb, SingleFlipProbabilityForIsing) {
  // From sigma = (1,1,1) on P3 pinned at vertex 0: flipping u in {1, 2}
  // has probability (1/2) (1 + pi(sigma)/pi(tau))^-1.
  const Graph g = build_path(3);
  const double beta = 0.7;
  const ModelParams m = ModelParams::from_beta(2, beta);
  RngStream rng(16);
  const std::size_t n = 200000;
  std::size_t flip1 = 0, flip2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    PottsConfig s{{1, 1, 1}};
    restricted_hb_step(g, m, {0, 1}, s, rng);
    flip1 += s[1] == 2;
    flip2 += s[2] == 2;
  }
  // Vertex 1 loses two agreeing edges, vertex 2 loses one.
  expect_binomial(flip1, n, 0.5 / (1 + std::exp(2 * beta)), "middle");
  expect_binomial(flip2, n, 0.5 / (1 + std::exp(beta)), "end");
}

TEST(Dynamics, NamesRoundTrip) {
  for (Dynamics d : {Dynamics::heat_bath, Dynamics::swendsen_wang, Dynamics::modified_sw,
                     Dynamics::restricted_hb})
    EXPECT_EQ(parse_dynamics(dynamics_name(d)), d);
  EXPECT_THROW(parse_dynamics("metropolis"), std::invalid_argument);
}

TEST(Dynamics, SameSeedSameTrajectory) {
  const DualMap d = build_dual_square_lattice(3);
  const ModelParams m = ModelParams::from_beta(3, 0.9);
  auto run = [&](std::uint64_t seed) {
    RngStream rng(seed);
    PottsConfig s = PottsConfig::constant(9, 1);
    std::vector<std::uint64_t> out;
    for (int t = 0; t < 300; ++t) {
      heat_bath_step(d.primal, m, s, rng);
      sw_step(d.primal, m, s, rng);
      modified_sw_step(d, m, s, rng);
      out.push_back(s.index(3));
    }
    return out;
  };
  EXPECT_EQ(run(42), run(42));
  EXPECT_NE(run(42), run(43));
}
