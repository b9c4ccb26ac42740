#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "sbmlab/error.hpp"

namespace sbmlab {

using Vertex = std::uint32_t;
using EdgeId = std::uint32_t;

/// Immutable simple undirected graph in CSR form.
///
/// Each undirected edge {u, v} appears as two directed edges, u->v and v->u.
/// A directed edge is identified by its CSR slot: the edges leaving v occupy
/// [offset(v), offset(v+1)) and point at sorted neighbours, so directed edge
/// ids enumerate (tail, head) pairs in lexicographic order.
class Graph {
 public:
  Graph() = default;

  /// Builds from an arbitrary undirected edge list. Self-loops are rejected,
  /// duplicate pairs (in either orientation) are collapsed.
  static Graph from_edges(std::size_t n, std::span<const std::pair<Vertex, Vertex>> edges) {
    std::vector<std::pair<Vertex, Vertex>> arcs;
    arcs.reserve(2 * edges.size());
    for (auto [u, v] : edges) {
      if (u >= n || v >= n) throw Error(Errc::invalid_argument, "edge endpoint out of range");
      if (u == v) throw Error(Errc::invalid_argument, "self-loop at vertex " + std::to_string(u));
      arcs.emplace_back(u, v);
      arcs.emplace_back(v, u);
    }
    std::sort(arcs.begin(), arcs.end());
    arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
    return Graph(n, arcs);
  }

  static Graph from_edges(std::size_t n, const std::vector<std::pair<Vertex, Vertex>>& edges) {
    return from_edges(n, std::span<const std::pair<Vertex, Vertex>>(edges));
  }

  std::size_t num_vertices() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t num_edges() const noexcept { return heads_.size() / 2; }
  std::size_t num_directed_edges() const noexcept { return heads_.size(); }

  std::size_t degree(Vertex v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

  std::span<const Vertex> neighbors(Vertex v) const noexcept {
    return {heads_.data() + offsets_[v], degree(v)};
  }

  EdgeId first_edge(Vertex v) const noexcept { return offsets_[v]; }
  EdgeId end_edge(Vertex v) const noexcept { return offsets_[v + 1]; }

  Vertex tail(EdgeId e) const noexcept { return tails_[e]; }
  Vertex head(EdgeId e) const noexcept { return heads_[e]; }
  EdgeId reverse(EdgeId e) const noexcept { return reverse_[e]; }

  /// Directed edge id of u->v, or npos when u and v are not adjacent.
  static constexpr EdgeId npos = ~EdgeId{0};
  EdgeId find_edge(Vertex u, Vertex v) const noexcept {
    auto nb = neighbors(u);
    auto it = std::lower_bound(nb.begin(), nb.end(), v);
    if (it == nb.end() || *it != v) return npos;
    return offsets_[u] + static_cast<EdgeId>(it - nb.begin());
  }

  bool adjacent(Vertex u, Vertex v) const noexcept { return find_edge(u, v) != npos; }

  /// Undirected edges as (u, v) with u < v, lexicographically sorted.
  std::vector<std::pair<Vertex, Vertex>> edge_list() const {
    std::vector<std::pair<Vertex, Vertex>> out;
    out.reserve(num_edges());
    for (EdgeId e = 0; e < heads_.size(); ++e)
      if (tails_[e] < heads_[e]) out.emplace_back(tails_[e], heads_[e]);
    return out;
  }

  /// Subgraph on the same vertex set keeping directed-edge pairs for which
  /// keep(undirected edge with tail < head) is true.
  template <class Pred>
  Graph filter_edges(Pred keep) const {
    std::vector<std::pair<Vertex, Vertex>> arcs;
    for (EdgeId e = 0; e < heads_.size(); ++e) {
      const EdgeId canon = tails_[e] < heads_[e] ? e : reverse_[e];
      if (keep(canon)) arcs.emplace_back(tails_[e], heads_[e]);
    }
    return Graph(num_vertices(), arcs);
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.offsets_ == b.offsets_ && a.heads_ == b.heads_;
  }

 private:
  // arcs: sorted, unique, symmetric
  Graph(std::size_t n, const std::vector<std::pair<Vertex, Vertex>>& arcs)
      : offsets_(n + 1, 0), heads_(arcs.size()), tails_(arcs.size()), reverse_(arcs.size()) {
    for (auto [u, v] : arcs) ++offsets_[u + 1];
    for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] += offsets_[v];
    for (std::size_t i = 0; i < arcs.size(); ++i) {
      tails_[i] = arcs[i].first;
      heads_[i] = arcs[i].second;
    }
    for (EdgeId e = 0; e < arcs.size(); ++e) reverse_[e] = find_edge(heads_[e], tails_[e]);
  }

  std::vector<EdgeId> offsets_;
  std::vector<Vertex> heads_;
  std::vector<Vertex> tails_;
  std::vector<EdgeId> reverse_;
};

}  // namespace sbmlab
