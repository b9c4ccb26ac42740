#pragma once

// Brute-force reference implementations used only by the tests.

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "sbmlab/graph.hpp"
#include "sbmlab/rng.hpp"

namespace oracle {

using sbmlab::Graph;
using sbmlab::Vertex;

inline Graph random_graph(std::size_t n, double p, std::uint64_t seed) {
  sbmlab::CounterRng r(seed);
  std::vector<std::pair<Vertex, Vertex>> e;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (r.uniform() < p) e.emplace_back(u, v);
  return Graph::from_edges(n, e);
}

/// Random graph with exactly m distinct edges (m must be feasible).
inline Graph random_graph_edges(std::size_t n, std::size_t m, std::uint64_t seed) {
  sbmlab::CounterRng r(seed);
  std::set<std::pair<Vertex, Vertex>> e;
  while (e.size() < m) {
    auto u = static_cast<Vertex>(r.below(n)), v = static_cast<Vertex>(r.below(n));
    if (u == v) continue;
    e.emplace(std::min(u, v), std::max(u, v));
  }
  return Graph::from_edges(n, std::vector<std::pair<Vertex, Vertex>>(e.begin(), e.end()));
}

inline bool adjacent(const Graph& g, Vertex a, Vertex b) {
  for (Vertex w : g.neighbors(a))
    if (w == b) return true;
  return false;
}

/// All simple cycles of length L as canonical vertex sequences
/// (rotated to start at the minimum, smaller second vertex first).
inline std::set<std::vector<Vertex>> simple_cycles(const Graph& g, int L) {
  std::set<std::vector<Vertex>> out;
  const auto n = g.num_vertices();
  std::vector<Vertex> seq;
  auto rec = [&](auto& self) -> void {
    if (static_cast<int>(seq.size()) == L) {
      if (!adjacent(g, seq.back(), seq.front())) return;
      auto it = std::min_element(seq.begin(), seq.end());
      std::vector<Vertex> c(it, seq.end());
      c.insert(c.end(), seq.begin(), it);
      if (c[1] > c.back()) std::reverse(c.begin() + 1, c.end());
      out.insert(c);
      return;
    }
    for (Vertex w = 0; w < n; ++w) {
      if (std::find(seq.begin(), seq.end(), w) != seq.end()) continue;
      if (!seq.empty() && !adjacent(g, seq.back(), w)) continue;
      seq.push_back(w);
      self(self);
      seq.pop_back();
    }
  };
  rec(rec);
  return out;
}

/// Closed walks of length m, nonbacktracking including the wrap-around.
inline std::uint64_t closed_nb_walks(const Graph& g, int m) {
  std::uint64_t total = 0;
  std::vector<Vertex> w;
  auto rec = [&](auto& self) -> void {
    if (static_cast<int>(w.size()) == m + 1) {
      if (w.back() == w.front() && w[m - 1] != w[1]) ++total;
      return;
    }
    for (Vertex x : g.neighbors(w.back())) {
      if (w.size() >= 2 && x == w[w.size() - 2]) continue;
      w.push_back(x);
      self(self);
      w.pop_back();
    }
  };
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    w.assign(1, v);
    rec(rec);
  }
  return total;
}

/// Dense Hashimoto matrix indexed by the graph's directed edge ids:
/// B[(u->v), (v->w)] = 1 for w != u.
inline std::vector<std::vector<int>> hashimoto(const Graph& g) {
  const auto E = g.num_directed_edges();
  std::vector<std::vector<int>> B(E, std::vector<int>(E, 0));
  for (sbmlab::EdgeId e = 0; e < E; ++e)
    for (sbmlab::EdgeId f = 0; f < E; ++f)
      if (g.head(e) == g.tail(f) && g.head(f) != g.tail(e)) B[e][f] = 1;
  return B;
}

}  // namespace oracle
