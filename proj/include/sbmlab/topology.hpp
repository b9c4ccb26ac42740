#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "sbmlab/error.hpp"
#include "sbmlab/graph.hpp"
#include "sbmlab/typicality.hpp"

namespace sbmlab {

struct TreeStats {
  std::size_t n = 0;
  std::size_t T = 0;           // isolated trees
  std::size_t M = 0;           // edges inside isolated trees
  std::size_t giant_size = 0;  // vertices of the largest component
  std::size_t F = 0;           // edges stripped from the giant as hanging trees
  std::vector<std::size_t> T_j;  // T_j[j] for 1 <= j <= j_max; index 0 unused
  std::vector<std::string> warnings;
};

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }

  std::size_t size(std::size_t x) { return size_[find(x)]; }

 private:
  std::vector<std::size_t> parent_, size_;
};

inline TreeStats component_stats(const Graph& g, std::size_t j_max = 10) {
  const auto n = g.num_vertices();
  TreeStats st;
  st.n = n;
  st.T_j.assign(j_max + 1, 0);
  if (n == 0) return st;
  UnionFind uf(n);
  for (const auto& [u, v] : g.edge_list()) uf.unite(u, v);

  std::vector<std::size_t> edges(n, 0);
  for (Vertex v = 0; v < n; ++v) edges[uf.find(v)] += g.degree(v);
  std::size_t giant_root = n;
  for (Vertex v = 0; v < n; ++v) {
    if (uf.find(v) != v) continue;
    const auto sz = uf.size(v), m = edges[v] / 2;
    if (m + 1 == sz) {
      ++st.T;
      st.M += m;
      if (sz <= j_max) ++st.T_j[sz];
    }
    if (giant_root == n || sz > uf.size(giant_root)) giant_root = v;
  }
  st.giant_size = uf.size(giant_root);
  if (static_cast<double>(st.giant_size) < 0.01 * static_cast<double>(n))
    st.warnings.push_back("largest component is below 0.01 n");

  // strip degree-1 vertices of the giant
  std::vector<std::size_t> deg(n);
  std::vector<char> removed(n, 0);
  std::vector<Vertex> queue;
  for (Vertex v = 0; v < n; ++v) {
    deg[v] = g.degree(v);
    if (uf.find(v) == giant_root && deg[v] == 1) queue.push_back(v);
  }
  for (std::size_t h = 0; h < queue.size(); ++h) {
    const Vertex v = queue[h];
    if (deg[v] != 1) continue;
    removed[v] = 1;
    for (Vertex w : g.neighbors(v)) {
      if (removed[w]) continue;
      --deg[v];
      ++st.F;
      if (--deg[w] == 1) queue.push_back(w);
      break;
    }
  }
  return st;
}

struct PredictedFractions {
  double tree_vertex_frac;  // isolated trees per vertex
  double tree_edge_frac;    // isolated-tree edges per vertex
  double giant_frac;
  double planted_edge_frac;
};

inline PredictedFractions predicted_fractions(double a, double b, std::uint32_t k) {
  const double d = (a + (k - 1.0) * b) / k;
  if (!(d > 1.0)) throw Error(Errc::domain_error, "predicted fractions require d > 1");
  const double t = tau(d);
  return {(t / d) * (1.0 - t / 2.0), t * t / (2.0 * d), 1.0 - t / d, (d - t) * std::exp(-(d - t))};
}

/// j^{j-2} (d e^{-d})^j / j!, the isolated j-tree density times d.
inline double tau_j(double d, int j) {
  if (j < 1) throw Error(Errc::invalid_argument, "j must be >= 1");
  return std::exp((j - 2) * std::log(static_cast<double>(j)) + j * (std::log(d) - d) - std::lgamma(j + 1.0));
}

}  // namespace sbmlab
