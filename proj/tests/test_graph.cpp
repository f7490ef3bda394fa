#include <gtest/gtest.h>

#include <queue>
#include <set>
#include <sstream>

#include "pottsmc/graph.hpp"
#include "pottsmc/graph_io.hpp"
#include "pottsmc/rng.hpp"

using namespace pottsmc;

namespace {

// BFS component count, independent of the union-find code.
std::size_t bfs_components(const Graph& g, const RCState& a) {
  std::vector<std::vector<Vertex>> adj(g.n_vertices());
  for (EdgeIndex e = 0; e < g.n_edges(); ++e) {
    if (!a.test(e)) continue;
    adj[g.edge(e).u].push_back(g.edge(e).v);
    adj[g.edge(e).v].push_back(g.edge(e).u);
  }
  std::vector<bool> seen(g.n_vertices(), false);
  std::size_t count = 0;
  for (Vertex s = 0; s < g.n_vertices(); ++s) {
    if (seen[s]) continue;
    ++count;
    std::queue<Vertex> todo;
    todo.push(s);
    seen[s] = true;
    while (!todo.empty()) {
      const Vertex x = todo.front();
      todo.pop();
      for (Vertex y : adj[x])
        if (!seen[y]) {
          seen[y] = true;
          todo.push(y);
        }
    }
  }
  return count;
}

RCState state_of(std::initializer_list<EdgeIndex> edges, std::size_t width) {
  RCState a(width);
  for (EdgeIndex e : edges) a.set(e);
  return a;
}

}  // namespace

TEST(SquareLattice, Sizes) {
  EXPECT_THROW(build_square_lattice(0), std::invalid_argument);
  const Graph g1 = build_square_lattice(1);
  EXPECT_EQ(g1.n_vertices(), 1u);
  EXPECT_EQ(g1.n_edges(), 0u);
  const Graph g3 = build_square_lattice(3);
  EXPECT_EQ(g3.n_vertices(), 9u);
  EXPECT_EQ(g3.n_edges(), 12u);
  EXPECT_EQ(build_square_lattice(4).n_edges(), 24u);
}

TEST(SquareLattice, EdgesAreDistanceOnePairs) {
  for (std::size_t L = 1; L <= 5; ++L) {
    const Graph g = build_square_lattice(L);
    std::set<std::pair<Vertex, Vertex>> expected;
    for (std::size_t a = 0; a < L * L; ++a)
      for (std::size_t b = a + 1; b < L * L; ++b) {
        const long dr = static_cast<long>(a / L) - static_cast<long>(b / L);
        const long dc = static_cast<long>(a % L) - static_cast<long>(b % L);
        if (std::labs(dr) + std::labs(dc) == 1) expected.insert({a, b});
      }
    std::set<std::pair<Vertex, Vertex>> got;
    for (const auto& e : g.edges()) got.insert({std::min(e.u, e.v), std::max(e.u, e.v)});
    EXPECT_EQ(got, expected) << "L=" << L;
    EXPECT_EQ(g.n_edges(), expected.size());
  }
}

TEST(SquareLattice, IndexFormulas) {
  const std::size_t L = 4;
  const Graph g = build_square_lattice(L);
  for (std::size_t r = 0; r < L; ++r)
    for (std::size_t c = 0; c + 1 < L; ++c)
      EXPECT_EQ(g.edge(lattice_horizontal_edge(L, r, c)), (Edge{r * L + c, r * L + c + 1}));
  for (std::size_t r = 0; r + 1 < L; ++r)
    for (std::size_t c = 0; c < L; ++c)
      EXPECT_EQ(g.edge(lattice_vertical_edge(L, r, c)), (Edge{r * L + c, (r + 1) * L + c}));
}

TEST(Graph, DegreeCountsLoopTwice) {
  const Graph g(2, {{0, 0}, {0, 1}, {0, 1}});
  EXPECT_EQ(g.degree(0), 4u);
  EXPECT_EQ(g.degree(1), 2u);
  EXPECT_THROW(Graph(2, {{0, 2}}), std::invalid_argument);
}

TEST(MaxDegree, Examples) {
  EXPECT_EQ(max_degree(build_square_lattice(3)), 4u);
  EXPECT_EQ(max_degree(build_square_lattice(1)), 0u);
  const DualMap d = build_dual_square_lattice(3);
  EXPECT_EQ(max_degree(d.dual, *d.outer_vertex), 4u);
  EXPECT_EQ(max_degree(d.dual), 8u);
  EXPECT_EQ(max_degree(build_star(4), Vertex{0}), 1u);
}

TEST(DualLattice, Sizes) {
  EXPECT_THROW(build_dual_square_lattice(1), std::invalid_argument);
  const DualMap d3 = build_dual_square_lattice(3);
  EXPECT_EQ(d3.dual.n_vertices(), 5u);
  EXPECT_EQ(d3.dual.n_edges(), 12u);
  EXPECT_EQ(d3.dual.degree(*d3.outer_vertex), 8u);
  for (std::size_t L = 2; L <= 6; ++L) {
    const DualMap d = build_dual_square_lattice(L);
    EXPECT_EQ(d.dual.n_edges(), d.primal.n_edges());
    EXPECT_EQ(d.dual.degree(*d.outer_vertex), 4 * (L - 1));
    // Euler: faces = |E| - |V| + 2.
    EXPECT_EQ(d.dual.n_vertices(), d.primal.n_edges() - d.primal.n_vertices() + 2);
    EXPECT_NO_THROW(validate_dual_map(d));
  }
}

TEST(DualLattice, TwoByTwoIsFourParallelEdges) {
  const DualMap d = build_dual_square_lattice(2);
  EXPECT_EQ(d.dual.n_vertices(), 2u);
  ASSERT_EQ(d.dual.n_edges(), 4u);
  for (const auto& e : d.dual.edges()) EXPECT_EQ(std::set<Vertex>({e.u, e.v}), (std::set<Vertex>{0, 1}));
}

TEST(DualLattice, DualEdgeSeparatesTheFacesOnEitherSide) {
  // Each primal edge borders two faces (cells or the outside); its dual edge
  // must join exactly those.
  for (std::size_t L = 2; L <= 5; ++L) {
    const DualMap d = build_dual_square_lattice(L);
    const std::size_t M = L - 1;
    const Vertex out = *d.outer_vertex;
    auto cell = [&](long r, long c) -> Vertex {
      if (r < 0 || c < 0 || r >= static_cast<long>(M) || c >= static_cast<long>(M)) return out;
      return static_cast<Vertex>(r) * M + static_cast<Vertex>(c);
    };
    for (std::size_t r = 0; r < L; ++r)
      for (std::size_t c = 0; c + 1 < L; ++c) {
        const Edge de = d.dual.edge(d.primal_to_dual[lattice_horizontal_edge(L, r, c)]);
        const std::set<Vertex> want{cell(long(r) - 1, long(c)), cell(long(r), long(c))};
        EXPECT_EQ((std::set<Vertex>{de.u, de.v}), want);
      }
    for (std::size_t r = 0; r + 1 < L; ++r)
      for (std::size_t c = 0; c < L; ++c) {
        const Edge de = d.dual.edge(d.primal_to_dual[lattice_vertical_edge(L, r, c)]);
        const std::set<Vertex> want{cell(long(r), long(c) - 1), cell(long(r), long(c))};
        EXPECT_EQ((std::set<Vertex>{de.u, de.v}), want);
      }
  }
}

TEST(DualRcState, Extremes) {
  const DualMap d = build_dual_square_lattice(3);
  EXPECT_EQ(dual_rc_state(RCState(12), d).count(), 12u);
  EXPECT_EQ(dual_rc_state(RCState::full(12), d).count(), 0u);
}

TEST(DualRcState, FigureOneState) {
  // Solid edges of the right-hand picture, vertex (x, y) -> (r, c) = (y-1, x-1).
  const std::size_t L = 3;
  const DualMap d = build_dual_square_lattice(L);
  const RCState a = state_of({lattice_horizontal_edge(L, 2, 1), lattice_vertical_edge(L, 1, 1),
                              lattice_vertical_edge(L, 1, 0), lattice_horizontal_edge(L, 1, 0),
                              lattice_horizontal_edge(L, 0, 0)},
                             12);
  ASSERT_EQ(a.count(), 5u);
  const RCState ad = dual_rc_state(a, d);
  EXPECT_EQ(ad.count(), 7u);
  // The two dashed segments inside the lattice cross (2,2)-(3,2) and (2,1)-(2,2).
  std::size_t inner_open = 0;
  for (EdgeIndex e = 0; e < d.dual.n_edges(); ++e) {
    const Edge de = d.dual.edge(e);
    if (ad.test(e) && de.u != *d.outer_vertex && de.v != *d.outer_vertex) ++inner_open;
  }
  EXPECT_EQ(inner_open, 2u);
  EXPECT_TRUE(ad.test(d.primal_to_dual[lattice_horizontal_edge(L, 1, 1)]));
  EXPECT_TRUE(ad.test(d.primal_to_dual[lattice_vertical_edge(L, 0, 1)]));
  EXPECT_EQ(ad.count() - inner_open, 5u);
}

TEST(DualRcState, IsABijectionExhaustively) {
  for (const DualMap& d : {build_dual_square_lattice(2), build_dual_square_lattice(3),
                           build_tree_dual(build_star(5))}) {
    const std::size_t m = d.primal.n_edges();
    ASSERT_LE(m, 12u);
    std::vector<bool> hit(std::size_t{1} << m, false);
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << m); ++i) {
      const RCState a = RCState::from_index(i, m);
      const RCState ad = dual_rc_state(a, d);
      ASSERT_EQ(primal_rc_state(ad, d), a);
      ASSERT_FALSE(hit[ad.index()]);
      hit[ad.index()] = true;
    }
  }
}

TEST(TreeDual, Examples) {
  const DualMap p2 = build_tree_dual(build_path(2));
  EXPECT_EQ(p2.dual.n_vertices(), 1u);
  EXPECT_EQ(p2.dual.n_edges(), 1u);
  EXPECT_TRUE(p2.dual.edge(0).is_loop());
  const DualMap k13 = build_tree_dual(build_star(3));
  EXPECT_EQ(k13.dual.n_vertices(), 1u);
  EXPECT_EQ(k13.dual.n_edges(), 3u);
  EXPECT_THROW(build_tree_dual(build_cycle(4)), std::invalid_argument);
  EXPECT_THROW(build_tree_dual(Graph(3, {{0, 1}})), std::invalid_argument);
}

TEST(Components, Examples) {
  const Graph g = build_square_lattice(3);
  EXPECT_EQ(count_components(g, RCState(12)), 9u);
  EXPECT_EQ(count_components(g, RCState::full(12)), 1u);
  const DualMap t = build_tree_dual(build_path(5));
  for (std::uint64_t i = 0; i < 16; ++i)
    EXPECT_EQ(count_components(t.dual, RCState::from_index(i, 4)), 1u);
}

TEST(Components, LabelsOrderedBySmallestVertex) {
  const Graph g(5, {{3, 4}, {1, 2}});
  const ComponentLabeling c = connected_components(g, RCState::full(2));
  EXPECT_EQ(c.count, 3u);
  EXPECT_EQ(c.label, (std::vector<std::size_t>{0, 1, 1, 2, 2}));
}

TEST(Components, AgreeWithBfsOnRandomGraphs) {
  RngStream rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.uniform_int(9);
    const std::size_t m = rng.uniform_int(15);
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < m; ++i) edges.push_back({rng.uniform_int(n), rng.uniform_int(n)});
    const Graph g(n, edges);
    RCState a(m);
    for (std::size_t e = 0; e < m; ++e)
      if (rng.bernoulli(0.5)) a.set(e);
    const ComponentLabeling lab = connected_components(g, a);
    ASSERT_EQ(lab.count, bfs_components(g, a));
    ASSERT_EQ(count_components(g, a), lab.count);
    // Labels: surjective onto [0, count), constant along open edges.
    std::set<std::size_t> used(lab.label.begin(), lab.label.end());
    ASSERT_EQ(used.size(), lab.count);
    ASSERT_EQ(*used.rbegin() + 1, lab.count);
    for (EdgeIndex e = 0; e < m; ++e) {
      if (a.test(e)) {
        ASSERT_EQ(lab.label[g.edge(e).u], lab.label[g.edge(e).v]);
      }
    }
  }
}

TEST(IsTree, Basics) {
  EXPECT_TRUE(is_tree(build_path(1)));
  EXPECT_TRUE(is_tree(build_path(4)));
  EXPECT_TRUE(is_tree(build_star(3)));
  EXPECT_FALSE(is_tree(build_cycle(3)));
  EXPECT_FALSE(is_tree(Graph(2, {{0, 0}})));
  EXPECT_FALSE(is_tree(Graph(3, {{0, 1}, {0, 1}})));
}

TEST(GraphIo, EdgeListRoundTrip) {
  const Graph g = build_square_lattice(3);
  std::stringstream ss;
  write_edge_list(ss, g);
  EXPECT_EQ(ss.str().substr(0, 5), "9 12\n");
  const GraphFile f = read_graph_file(ss);
  EXPECT_EQ(f.graph, g);
  EXPECT_FALSE(f.dual.has_value());
}

TEST(GraphIo, DualMapRoundTrip) {
  const DualMap d = build_dual_square_lattice(4);
  std::stringstream ss;
  write_dual_map(ss, d);
  const GraphFile f = read_graph_file(ss);
  ASSERT_TRUE(f.dual.has_value());
  EXPECT_EQ(f.dual->primal, d.primal);
  EXPECT_EQ(f.dual->dual, d.dual);
  EXPECT_EQ(f.dual->primal_to_dual, d.primal_to_dual);
  EXPECT_EQ(f.dual->dual_to_primal, d.dual_to_primal);
}

TEST(GraphIo, RejectsMalformedInput) {
  std::stringstream bad1("3 2\n0 1\n");
  EXPECT_THROW(read_graph_file(bad1), std::runtime_error);
  std::stringstream bad2("2 1\n0 5\n");
  EXPECT_THROW(read_graph_file(bad2), std::invalid_argument);
  std::stringstream bad3("2 1\n0 1\n1 1\n0 0\n0 3\n");
  EXPECT_THROW(read_graph_file(bad3), std::runtime_error);
}
