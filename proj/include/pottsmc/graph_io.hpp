#pragma once

#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "graph.hpp"

namespace pottsmc {

// Edge-list text format:
//   n_vertices m_edges
//   u v            (m lines, 0-based vertex ids)
// A dual file appends the dual graph in the same format, then m lines
// "e e_D" giving the primal -> dual edge bijection.

inline void write_edge_list(std::ostream& os, const Graph& g) {
  os << g.n_vertices() << ' ' << g.n_edges() << '\n';
  for (const auto& e : g.edges()) os << e.u << ' ' << e.v << '\n';
}

inline void write_dual_map(std::ostream& os, const DualMap& m) {
  write_edge_list(os, m.primal);
  write_edge_list(os, m.dual);
  for (EdgeIndex e = 0; e < m.primal.n_edges(); ++e)
    os << e << ' ' << m.primal_to_dual[e] << '\n';
}

namespace detail {

inline std::size_t read_count(std::istream& is, const char* what) {
  long long v = 0;
  if (!(is >> v)) throw std::runtime_error(std::string("edge list: expected ") + what);
  if (v < 0) throw std::runtime_error(std::string("edge list: negative ") + what);
  return static_cast<std::size_t>(v);
}

inline Graph read_graph_block(std::istream& is) {
  const std::size_t n = read_count(is, "vertex count");
  const std::size_t m = read_count(is, "edge count");
  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Vertex u = read_count(is, "edge endpoint");
    const Vertex v = read_count(is, "edge endpoint");
    edges.push_back({u, v});
  }
  return Graph(n, std::move(edges));
}

inline bool at_end(std::istream& is) {
  is >> std::ws;
  return is.eof();
}

}  // namespace detail

inline Graph read_edge_list(std::istream& is) { return detail::read_graph_block(is); }

/// Reads a primal graph and, if the dual sections are present, the DualMap.
struct GraphFile {
  Graph graph;
  std::optional<DualMap> dual;
};

inline GraphFile read_graph_file(std::istream& is) {
  GraphFile out{detail::read_graph_block(is), std::nullopt};
  if (detail::at_end(is)) return out;

  Graph dual = detail::read_graph_block(is);
  const std::size_t m = out.graph.n_edges();
  std::vector<EdgeIndex> p2d(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    const EdgeIndex e = detail::read_count(is, "bijection primal edge");
    const EdgeIndex d = detail::read_count(is, "bijection dual edge");
    if (e >= m) throw std::runtime_error("edge list: bijection primal index out of range");
    p2d[e] = d;
  }
  std::vector<EdgeIndex> d2p(m, m);
  for (EdgeIndex e = 0; e < m; ++e) {
    if (p2d[e] >= m) throw std::runtime_error("edge list: bijection is incomplete");
    d2p[p2d[e]] = e;
  }
  DualMap map{out.graph, std::move(dual), std::move(p2d), std::move(d2p), std::nullopt};
  try {
    validate_dual_map(map);
  } catch (const std::invalid_argument& ex) {
    throw std::runtime_error(std::string("edge list: ") + ex.what());
  }
  out.dual = std::move(map);
  return out;
}

inline GraphFile read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file '" + path + "'");
  return read_graph_file(in);
}

}  // namespace pottsmc
