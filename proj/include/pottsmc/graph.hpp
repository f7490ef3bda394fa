#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rc_state.hpp"

namespace pottsmc {

using Vertex = std::size_t;
using EdgeIndex = std::size_t;

struct Edge {
  Vertex u;
  Vertex v;
  bool is_loop() const noexcept { return u == v; }
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Finite multigraph. Parallel edges and loops are allowed and edges are
/// identified by their position in the edge list, never by endpoints.
class Graph {
 public:
  Graph() = default;
  Graph(std::size_t n_vertices, std::vector<Edge> edges)
      : n_(n_vertices), edges_(std::move(edges)), incident_(n_vertices) {
    for (EdgeIndex e = 0; e < edges_.size(); ++e) {
      const auto [u, v] = edges_[e];
      if (u >= n_ || v >= n_)
        throw std::invalid_argument("Graph: edge " + std::to_string(e) +
                                    " has an endpoint outside [0, n_vertices)");
      incident_[u].push_back(e);
      if (v != u) incident_[v].push_back(e);
    }
  }

  std::size_t n_vertices() const noexcept { return n_; }
  std::size_t n_edges() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(EdgeIndex e) const { return edges_[e]; }

  /// Indices of edges touching v; a loop at v is listed once.
  const std::vector<EdgeIndex>& incident(Vertex v) const { return incident_[v]; }

  /// Number of incident edge endpoints; a loop contributes 2.
  std::size_t degree(Vertex v) const {
    std::size_t d = 0;
    for (EdgeIndex e : incident_[v]) d += edges_[e].is_loop() ? 2 : 1;
    return d;
  }

  /// The spanning subgraph (same vertex set) keeping the open edges of keep,
  /// in their original relative order.
  Graph spanning_subgraph(const RCState& keep) const {
    std::vector<Edge> kept;
    for (EdgeIndex e = 0; e < edges_.size(); ++e)
      if (keep.test(e)) kept.push_back(edges_[e]);
    return Graph(n_, std::move(kept));
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeIndex>> incident_;
};

/// Disjoint-set forest with path compression and union by size.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1), sets_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    std::size_t root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) {
      const std::size_t next = parent_[x];
      parent_[x] = root;
      x = next;
    }
    return root;
  }

  /// Returns false if x and y were already in the same set.
  bool unite(std::size_t x, std::size_t y) {
    x = find(x);
    y = find(y);
    if (x == y) return false;
    if (size_[x] < size_[y]) std::swap(x, y);
    parent_[y] = x;
    size_[x] += size_[y];
    --sets_;
    return true;
  }

  std::size_t set_count() const noexcept { return sets_; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
  std::size_t sets_;
};

struct ComponentLabeling {
  std::size_t count = 0;
  /// Component ids are assigned in order of each component's smallest vertex.
  std::vector<std::size_t> label;
};

/// Components of the spanning subgraph (V, A); isolated vertices count.
inline ComponentLabeling connected_components(const Graph& g, const RCState& open) {
  UnionFind uf(g.n_vertices());
  for (EdgeIndex e = 0; e < g.n_edges(); ++e)
    if (open.test(e)) uf.unite(g.edge(e).u, g.edge(e).v);

  ComponentLabeling out;
  out.label.assign(g.n_vertices(), 0);
  std::vector<std::size_t> root_label(g.n_vertices(), g.n_vertices());
  for (Vertex v = 0; v < g.n_vertices(); ++v) {
    const std::size_t r = uf.find(v);
    if (root_label[r] == g.n_vertices()) root_label[r] = out.count++;
    out.label[v] = root_label[r];
  }
  return out;
}

/// C(A) without building the labeling.
inline std::size_t count_components(const Graph& g, const RCState& open) {
  UnionFind uf(g.n_vertices());
  for (EdgeIndex e = 0; e < g.n_edges(); ++e)
    if (open.test(e)) uf.unite(g.edge(e).u, g.edge(e).v);
  return uf.set_count();
}

inline std::size_t max_degree(const Graph& g, std::optional<Vertex> exclude = std::nullopt) {
  std::size_t best = 0;
  for (Vertex v = 0; v < g.n_vertices(); ++v)
    if (v != exclude) best = std::max(best, g.degree(v));
  return best;
}

inline bool is_tree(const Graph& g) {
  if (g.n_vertices() == 0 || g.n_edges() + 1 != g.n_vertices()) return false;
  UnionFind uf(g.n_vertices());
  for (const auto& e : g.edges())
    if (!uf.unite(e.u, e.v)) return false;
  return uf.set_count() == 1;
}

// ---------------------------------------------------------------------------
// Builders

/// Square lattice G_L on {0..L-1}^2.
///
/// Vertex (r, c) has id r*L + c. Horizontal edges (r,c)-(r,c+1) come first,
/// row-major, with index r*(L-1) + c; then vertical edges (r,c)-(r+1,c),
/// row-major, with index L*(L-1) + r*L + c.
inline Graph build_square_lattice(std::size_t L) {
  if (L == 0) throw std::invalid_argument("build_square_lattice: L must be >= 1");
  std::vector<Edge> edges;
  edges.reserve(2 * L * (L - 1));
  for (std::size_t r = 0; r < L; ++r)
    for (std::size_t c = 0; c + 1 < L; ++c) edges.push_back({r * L + c, r * L + c + 1});
  for (std::size_t r = 0; r + 1 < L; ++r)
    for (std::size_t c = 0; c < L; ++c) edges.push_back({r * L + c, (r + 1) * L + c});
  return Graph(L * L, std::move(edges));
}

inline std::size_t lattice_horizontal_edge(std::size_t L, std::size_t r, std::size_t c) {
  return r * (L - 1) + c;
}
inline std::size_t lattice_vertical_edge(std::size_t L, std::size_t r, std::size_t c) {
  return L * (L - 1) + r * L + c;
}

inline Graph build_path(std::size_t n) {
  if (n == 0) throw std::invalid_argument("build_path: need at least one vertex");
  std::vector<Edge> edges;
  for (Vertex v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1});
  return Graph(n, std::move(edges));
}

inline Graph build_cycle(std::size_t n) {
  if (n < 3) throw std::invalid_argument("build_cycle: need at least three vertices");
  std::vector<Edge> edges;
  for (Vertex v = 0; v < n; ++v) edges.push_back({v, (v + 1) % n});
  return Graph(n, std::move(edges));
}

/// Star K_{1,k}; vertex 0 is the center.
inline Graph build_star(std::size_t leaves) {
  std::vector<Edge> edges;
  for (Vertex v = 1; v <= leaves; ++v) edges.push_back({0, v});
  return Graph(leaves + 1, std::move(edges));
}

// ---------------------------------------------------------------------------
// Planar duals

/// A plane graph together with its dual. primal_to_dual[e] is the dual edge
/// crossing primal edge e; dual_to_primal is its inverse.
struct DualMap {
  Graph primal;
  Graph dual;
  std::vector<EdgeIndex> primal_to_dual;
  std::vector<EdgeIndex> dual_to_primal;
  /// The outer-face vertex of the dual, when the builder singles one out.
  std::optional<Vertex> outer_vertex;
};

inline void validate_dual_map(const DualMap& m) {
  const std::size_t n = m.primal.n_edges();
  if (m.dual.n_edges() != n || m.primal_to_dual.size() != n || m.dual_to_primal.size() != n)
    throw std::invalid_argument("DualMap: primal and dual edge counts differ");
  std::vector<bool> hit(n, false);
  for (EdgeIndex e = 0; e < n; ++e) {
    const EdgeIndex d = m.primal_to_dual[e];
    if (d >= n || hit[d]) throw std::invalid_argument("DualMap: edge map is not a bijection");
    hit[d] = true;
    if (m.dual_to_primal[d] != e)
      throw std::invalid_argument("DualMap: dual_to_primal is not the inverse map");
  }
}

/// Dual of G_L in its standard embedding: G_{L-1} plus an outer vertex v*.
///
/// Inner face (i, j), the unit cell with top-left corner (i, j), is dual
/// vertex i*(L-1) + j; v* = (L-1)^2. Dual edges are the edges of G_{L-1} in
/// its own standard order, followed by one v* edge per primal boundary edge
/// in increasing primal index. With M = L-1:
///   horizontal (r,c), 0<r<L-1  ->  vertical edge of G_M between cells
///                                   (r-1,c),(r,c): M*(M-1) + (r-1)*M + c
///   vertical (r,c), 0<c<L-1    ->  horizontal edge of G_M between cells
///                                   (r,c-1),(r,c): r*(M-1) + (c-1)
///   boundary edges (r or c on the rim) -> the next v* edge.
inline DualMap build_dual_square_lattice(std::size_t L) {
  if (L < 2) throw std::invalid_argument("build_dual_square_lattice: L must be >= 2");
  const std::size_t M = L - 1;
  Graph primal = build_square_lattice(L);
  const Graph inner = build_square_lattice(M);
  const Vertex outer = M * M;

  std::vector<Edge> dual_edges = inner.edges();
  std::vector<EdgeIndex> p2d(primal.n_edges());

  for (std::size_t r = 0; r < L; ++r)
    for (std::size_t c = 0; c < M; ++c) {
      const EdgeIndex e = lattice_horizontal_edge(L, r, c);
      if (r > 0 && r < M) {
        p2d[e] = lattice_vertical_edge(M, r - 1, c);
      } else {
        const Vertex cell = (r == 0 ? 0 : M - 1) * M + c;
        p2d[e] = dual_edges.size();
        dual_edges.push_back({cell, outer});
      }
    }
  for (std::size_t r = 0; r < M; ++r)
    for (std::size_t c = 0; c < L; ++c) {
      const EdgeIndex e = lattice_vertical_edge(L, r, c);
      if (c > 0 && c < M) {
        p2d[e] = lattice_horizontal_edge(M, r, c - 1);
      } else {
        const Vertex cell = r * M + (c == 0 ? 0 : M - 1);
        p2d[e] = dual_edges.size();
        dual_edges.push_back({cell, outer});
      }
    }

  // Both loops visit primal edges in increasing index, so v* edges are too.
  std::vector<EdgeIndex> d2p(p2d.size());
  for (EdgeIndex e = 0; e < p2d.size(); ++e) d2p[p2d[e]] = e;

  DualMap out{std::move(primal), Graph(M * M + 1, std::move(dual_edges)), std::move(p2d),
              std::move(d2p), outer};
  validate_dual_map(out);
  return out;
}

/// Dual of a tree: its single (outer) face gives one vertex carrying |E| loops.
inline DualMap build_tree_dual(const Graph& tree) {
  if (!is_tree(tree)) throw std::invalid_argument("build_tree_dual: input graph is not a tree");
  const std::size_t m = tree.n_edges();
  std::vector<Edge> loops(m, Edge{0, 0});
  std::vector<EdgeIndex> ident(m);
  std::iota(ident.begin(), ident.end(), EdgeIndex{0});
  return DualMap{tree, Graph(1, std::move(loops)), ident, ident, Vertex{0}};
}

/// A_D: dual edge e_D is open iff primal edge e is closed.
inline RCState dual_rc_state(const RCState& primal_state, const DualMap& map) {
  RCState out(map.dual.n_edges());
  for (EdgeIndex e = 0; e < map.primal.n_edges(); ++e)
    if (!primal_state.test(e)) out.set(map.primal_to_dual[e]);
  return out;
}

/// Inverse of dual_rc_state.
inline RCState primal_rc_state(const RCState& dual_state, const DualMap& map) {
  RCState out(map.primal.n_edges());
  for (EdgeIndex d = 0; d < map.dual.n_edges(); ++d)
    if (!dual_state.test(d)) out.set(map.dual_to_primal[d]);
  return out;
}

}  // namespace pottsmc
