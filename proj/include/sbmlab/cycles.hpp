#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "sbmlab/error.hpp"
#include "sbmlab/graph.hpp"

namespace sbmlab {

/// One way of closing directed edge v->v' into a short cycle: `count` simple
/// cycles of `length` edges contain closer, v, v' as consecutive vertices.
struct CycleRecord {
  std::uint32_t length = 0;
  Vertex closer = 0;
  std::uint32_t count = 0;
};

/// Short cycles (length <= r) through each directed edge.
class ShortCycleIndex {
 public:
  ShortCycleIndex() = default;

  int r() const noexcept { return r_; }
  bool empty() const noexcept { return records_.empty(); }
  std::size_t num_records() const noexcept { return records_.size(); }

  std::span<const CycleRecord> records(EdgeId e) const noexcept {
    if (offsets_.empty()) return {};
    return {records_.data() + offsets_[e], offsets_[e + 1] - offsets_[e]};
  }

  /// Directed edge lies on more than one short cycle.
  bool multi_cycle(EdgeId e) const noexcept {
    std::uint64_t c = 0;
    for (const auto& rec : records(e)) c += rec.count;
    return c > 1;
  }

  bool any_multi_cycle() const noexcept { return any_multi_; }

  /// Directed edges with at least one record, ascending.
  const std::vector<EdgeId>& edges() const noexcept { return edges_; }

  friend ShortCycleIndex find_short_cycles(const Graph& g, int r);

 private:
  int r_ = 2;
  std::vector<std::uint32_t> offsets_;
  std::vector<CycleRecord> records_;
  std::vector<EdgeId> edges_;
  bool any_multi_ = false;
};

/// Finds every simple cycle of length 3..r through each directed edge
/// v->v' by walking simple paths v' -> ... -> v''' that avoid v, with v'''
/// adjacent to v. For r <= 2 the index is empty.
inline ShortCycleIndex find_short_cycles(const Graph& g, int r) {
  if (r < 2) throw Error(Errc::invalid_argument, "r must be >= 2");
  ShortCycleIndex idx;
  idx.r_ = r;
  if (r < 3) return idx;

  const auto n = g.num_vertices();
  idx.offsets_.assign(g.num_directed_edges() + 1, 0);
  std::vector<char> on_path(n, 0);
  std::vector<CycleRecord> local;
  std::vector<Vertex> path;

  for (EdgeId e = 0; e < g.num_directed_edges(); ++e) {
    const Vertex v = g.tail(e), vp = g.head(e);
    local.clear();
    on_path[v] = on_path[vp] = 1;
    path.assign(1, vp);
    // iterative DFS over simple paths from vp; path edge count = path.size()-1
    std::vector<std::size_t> cursor(1, 0);
    while (!path.empty()) {
      const Vertex x = path.back();
      const std::size_t len = path.size() - 1;
      auto nb = g.neighbors(x);
      std::size_t& i = cursor.back();
      if (i == 0 && len >= 1 && g.adjacent(x, v)) {
        const auto cyc_len = static_cast<std::uint32_t>(len + 2);
        auto it = std::find_if(local.begin(), local.end(), [&](const CycleRecord& c) {
          return c.length == cyc_len && c.closer == x;
        });
        if (it == local.end())
          local.push_back({cyc_len, x, 1});
        else
          ++it->count;
      }
      if (static_cast<int>(len) + 2 < r && i < nb.size()) {
        const Vertex y = nb[i++];
        if (!on_path[y]) {
          on_path[y] = 1;
          path.push_back(y);
          cursor.push_back(0);
        }
        continue;
      }
      if (path.size() > 1) on_path[x] = 0;
      path.pop_back();
      cursor.pop_back();
    }
    on_path[v] = on_path[vp] = 0;

    std::sort(local.begin(), local.end(), [](const CycleRecord& a, const CycleRecord& b) {
      return a.length != b.length ? a.length < b.length : a.closer < b.closer;
    });
    idx.offsets_[e + 1] = idx.offsets_[e] + static_cast<std::uint32_t>(local.size());
    if (!local.empty()) {
      idx.edges_.push_back(e);
      idx.records_.insert(idx.records_.end(), local.begin(), local.end());
      if (idx.multi_cycle(e)) idx.any_multi_ = true;
    }
  }
  return idx;
}

namespace detail {

// Depth-limited BFS from s over vertices accepted by `allow`; fills dist for
// touched vertices (others keep `unreached`). Returns touched list.
template <class Allow>
void bounded_bfs(const Graph& g, Vertex s, std::uint32_t radius, Allow allow, std::vector<std::uint32_t>& dist,
                 std::vector<Vertex>& touched) {
  touched.clear();
  dist[s] = 0;
  touched.push_back(s);
  for (std::size_t head = 0; head < touched.size(); ++head) {
    const Vertex x = touched[head];
    if (dist[x] == radius) continue;
    for (Vertex y : g.neighbors(x)) {
      if (dist[y] != std::numeric_limits<std::uint32_t>::max() || !allow(y)) continue;
      dist[y] = dist[x] + 1;
      touched.push_back(y);
    }
  }
}

}  // namespace detail

/// Exact simple-cycle counts for every length 3..max_len; entry [m] holds
/// the number of (unoriented, unrooted) cycles of length m.
///
/// Each cycle is found from its smallest vertex s, walking only vertices
/// above s and pruning any vertex farther from s than the remaining budget.
inline std::vector<std::uint64_t> count_cycles_upto(const Graph& g, int max_len) {
  if (max_len < 3) throw Error(Errc::invalid_argument, "cycle length must be >= 3");
  if (max_len > 16) throw Error(Errc::size_limit, "exact cycle counting is limited to length <= 16");
  const auto n = g.num_vertices();
  const auto M = static_cast<std::uint32_t>(max_len);
  constexpr auto unreached = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint64_t> directed(M + 1, 0);
  std::vector<std::uint32_t> dist(n, unreached);
  std::vector<Vertex> touched, path;
  std::vector<std::size_t> cursor;
  std::vector<char> on_path(n, 0);

  for (Vertex s = 0; s < n; ++s) {
    if (g.degree(s) < 2) continue;
    detail::bounded_bfs(g, s, M / 2, [s](Vertex y) { return y > s; }, dist, touched);
    path.assign(1, s);
    cursor.assign(1, 0);
    on_path[s] = 1;
    while (!path.empty()) {
      const Vertex x = path.back();
      const auto len = static_cast<std::uint32_t>(path.size() - 1);
      auto nb = g.neighbors(x);
      std::size_t& i = cursor.back();
      if (i < nb.size()) {
        const Vertex y = nb[i++];
        if (y == s) {
          if (len >= 2) ++directed[len + 1];
          continue;
        }
        if (y < s || on_path[y] || dist[y] == unreached || dist[y] + len + 1 > M) continue;
        on_path[y] = 1;
        path.push_back(y);
        cursor.push_back(0);
        continue;
      }
      on_path[x] = 0;
      path.pop_back();
      cursor.pop_back();
    }
    for (Vertex t : touched) dist[t] = unreached;
  }
  for (auto& c : directed) c /= 2;
  return directed;
}

inline std::uint64_t count_cycles(const Graph& g, int m) { return count_cycles_upto(g, m)[m]; }

/// tr(B^m) for m = 0..max_len, B the nonbacktracking (Hashimoto) matrix:
/// closed walks v_0..v_m = v_0 with v_{i+1} != v_{i-1} and v_{m-1} != v_1.
/// A cycle of length m contributes 2m; a cycle of length l | m wound m/l
/// times contributes 2l. Walks are enumerated per start vertex, pruned by
/// distance to the start.
inline std::vector<std::uint64_t> nb_closed_walks_upto(const Graph& g, int max_len) {
  if (max_len < 0) throw Error(Errc::invalid_argument, "walk length must be >= 0");
  if (max_len > 24) throw Error(Errc::size_limit, "closed-walk enumeration is limited to length <= 24");
  const auto n = g.num_vertices();
  const auto M = static_cast<std::uint32_t>(max_len);
  constexpr auto unreached = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint64_t> total(M + 1, 0);
  std::vector<std::uint32_t> dist(n, unreached);
  std::vector<Vertex> touched;
  struct Frame {
    Vertex x, prev;
    std::uint32_t next;
  };
  std::vector<Frame> stack;

  for (Vertex s = 0; s < n; ++s) {
    if (g.degree(s) < 2) continue;
    detail::bounded_bfs(g, s, M / 2, [](Vertex) { return true; }, dist, touched);
    for (Vertex first : g.neighbors(s)) {
      if (dist[first] + 1 > M) continue;
      stack.assign(1, Frame{first, s, 0});
      while (!stack.empty()) {
        Frame& f = stack.back();
        const auto len = static_cast<std::uint32_t>(stack.size());
        auto nb = g.neighbors(f.x);
        if (f.next < nb.size()) {
          const Vertex y = nb[f.next++];
          if (y == f.prev) continue;
          if (y == s && f.x != first) ++total[len + 1];
          if (dist[y] == unreached || dist[y] + len + 1 > M) continue;
          stack.push_back(Frame{y, f.x, 0});
          continue;
        }
        stack.pop_back();
      }
    }
    for (Vertex t : touched) dist[t] = unreached;
  }
  return total;
}

inline std::uint64_t nb_closed_walks_total(const Graph& g, int m) {
  if (m < 3) throw Error(Errc::invalid_argument, "closed nonbacktracking walks need m >= 3");
  return nb_closed_walks_upto(g, m)[m];
}

}  // namespace sbmlab
