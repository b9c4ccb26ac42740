#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "sbmlab/error.hpp"
#include "sbmlab/graph.hpp"
#include "sbmlab/metrics.hpp"
#include "sbmlab/numeric.hpp"
#include "sbmlab/rng.hpp"

namespace sbmlab {

using NbVector = std::vector<double>;

/// All directed paths (v_1..v_r) of r distinct vertices, in lexicographic order.
class PathBasis {
 public:
  static constexpr std::size_t npos = ~std::size_t{0};

  PathBasis() = default;

  PathBasis(const Graph& g, int r) : r_(r), n_(g.num_vertices()), m_(g.num_directed_edges()) {
    if (r < 2) throw Error(Errc::invalid_argument, "path basis needs r >= 2");
    if (r > 16) throw Error(Errc::size_limit, "path basis limited to r <= 16");
    enumerate(g);
    build_predecessors(g);
  }

  int r() const noexcept { return r_; }
  std::size_t size() const noexcept { return r_ ? flat_.size() / static_cast<std::size_t>(r_) : 0; }
  bool empty() const noexcept { return flat_.empty(); }

  std::span<const Vertex> path(std::size_t i) const noexcept {
    return {flat_.data() + i * static_cast<std::size_t>(r_), static_cast<std::size_t>(r_)};
  }

  std::size_t index_of(std::span<const Vertex> q) const {
    if (q.size() != static_cast<std::size_t>(r_)) return npos;
    std::size_t lo = 0, hi = size();
    while (lo < hi) {
      const auto mid = (lo + hi) / 2;
      auto p = path(mid);
      if (std::lexicographical_compare(p.begin(), p.end(), q.begin(), q.end()))
        lo = mid + 1;
      else
        hi = mid;
    }
    if (lo < size() && std::ranges::equal(path(lo), q)) return lo;
    return npos;
  }

  /// Basis elements q' = (x, q_1, .., q_{r-1}) with x != q_r.
  std::span<const std::uint32_t> predecessors(std::size_t i) const noexcept {
    return {pred_.data() + pred_off_[i], pred_off_[i + 1] - pred_off_[i]};
  }

  bool matches(const Graph& g) const noexcept {
    return g.num_vertices() == n_ && g.num_directed_edges() == m_;
  }

 private:
  void enumerate(const Graph& g) {
    std::vector<Vertex> cur;
    std::vector<char> used(n_, 0);
    std::function<void()> rec = [&] {
      if (cur.size() == static_cast<std::size_t>(r_)) {
        flat_.insert(flat_.end(), cur.begin(), cur.end());
        if (flat_.size() / r_ > (std::size_t{1} << 31))
          throw Error(Errc::size_limit, "path basis exceeds 2^31 elements");
        return;
      }
      for (Vertex y : g.neighbors(cur.back())) {
        if (used[y]) continue;
        used[y] = 1;
        cur.push_back(y);
        rec();
        cur.pop_back();
        used[y] = 0;
      }
    };
    for (Vertex v = 0; v < n_; ++v) {
      used[v] = 1;
      cur.assign(1, v);
      rec();
      used[v] = 0;
    }
  }

  void build_predecessors(const Graph& g) {
    const auto N = size();
    pred_off_.assign(N + 1, 0);
    std::vector<Vertex> key(r_);
    for (std::size_t i = 0; i < N; ++i) {
      auto q = path(i);
      std::copy(q.begin(), q.end() - 1, key.begin() + 1);
      for (Vertex x : g.neighbors(q[0])) {
        if (x == q[r_ - 1]) continue;
        key[0] = x;
        const auto j = index_of(key);
        if (j != npos) pred_.push_back(static_cast<std::uint32_t>(j));
      }
      pred_off_[i + 1] = pred_.size();
    }
  }

  int r_ = 0;
  std::size_t n_ = 0, m_ = 0;
  std::vector<Vertex> flat_;
  std::vector<std::size_t> pred_off_{0};
  std::vector<std::uint32_t> pred_;
};

inline NbVector w_r_apply(const Graph& g, const PathBasis& basis, std::span<const double> x) {
  if (!basis.matches(g)) throw Error(Errc::invalid_argument, "path basis was built for a different graph");
  if (x.size() != basis.size()) throw Error(Errc::length_mismatch, "vector length does not match path basis");
  NbVector out(basis.size(), 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    double s = 0.0;
    for (auto j : basis.predecessors(i)) s += x[j];
    out[i] = s;
  }
  return out;
}

/// Per-vertex sums over basis paths ending at the vertex.
inline std::vector<double> sum_by_last_vertex(const PathBasis& basis, std::size_t n, std::span<const double> x) {
  std::vector<double> s(n, 0.0);
  for (std::size_t i = 0; i < basis.size(); ++i) s[basis.path(i).back()] += x[i];
  return s;
}

/// Applies W^(m-m'-1) then (W - lambda1)^m' to x0, rescaling every step.
/// The starting vector counts as the first iterate.
inline NbVector power_iterate(const Graph& g, const PathBasis& basis, NbVector x, int m, int m_prime, double lambda1) {
  if (m_prime < 0 || m <= m_prime) throw Error(Errc::parameter_out_of_range, "need m > m' >= 0");
  normalize_rms(x);
  for (int t = 1; t < m; ++t) {
    NbVector y = w_r_apply(g, basis, x);
    if (t >= m - m_prime)
      for (std::size_t i = 0; i < y.size(); ++i) y[i] -= lambda1 * x[i];
    normalize_rms(y);
    require_finite(y, "power iteration produced a non-finite value");
    x = std::move(y);
  }
  return x;
}

inline Partition power_iteration_detect(const Graph& g, int r, int m, int m_prime, double lambda1, std::uint64_t seed) {
  if (m_prime < 0 || m <= m_prime) throw Error(Errc::parameter_out_of_range, "need m > m' >= 0");
  const auto n = g.num_vertices();
  Partition part;
  part.side.assign(n, 0);
  part.scores.assign(n, 0.0);
  PathBasis basis(g, r);
  if (basis.empty()) return part;
  CounterRng rng(derive_seed(seed, 1));
  NbVector x(basis.size());
  for (double& v : x) v = rng.gaussian();
  x = power_iterate(g, basis, std::move(x), m, m_prime, lambda1);
  part.scores = sum_by_last_vertex(basis, n, x);
  for (std::size_t v = 0; v < n; ++v) part.side[v] = part.scores[v] > 0.0;
  return part;
}

/// Walks v_0..v_m from v to w with v_i != v_j whenever |i - j| <= r.
inline std::uint64_t nb_walk_count(const Graph& g, int r, int m, Vertex v, Vertex w) {
  if (m < 0) throw Error(Errc::invalid_argument, "walk length must be >= 0");
  if (v >= g.num_vertices() || w >= g.num_vertices()) throw Error(Errc::invalid_argument, "vertex out of range");
  std::vector<Vertex> walk{v};
  std::function<std::uint64_t()> rec = [&]() -> std::uint64_t {
    if (walk.size() == static_cast<std::size_t>(m) + 1) return walk.back() == w ? 1 : 0;
    std::uint64_t c = 0;
    for (Vertex y : g.neighbors(walk.back())) {
      bool ok = true;
      const auto len = walk.size();
      for (std::size_t back = 1; back <= static_cast<std::size_t>(std::max(r, 0)) && back <= len; ++back)
        if (walk[len - back] == y) {
          ok = false;
          break;
        }
      if (!ok) continue;
      walk.push_back(y);
      c += rec();
      walk.pop_back();
    }
    return c;
  };
  return rec();
}

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Sigma^(0) = I, Sigma^(1) = A, Sigma^(2) = A^2 - Deg and
/// Sigma^(t) = A Sigma^(t-1) - (Deg - I) Sigma^(t-2) for t > 2.
inline IntMatrix sigma_t(const Graph& g, int t) {
  if (t < 0) throw Error(Errc::invalid_argument, "t must be >= 0");
  const auto n = static_cast<Eigen::Index>(g.num_vertices());
  if (n > 2000) throw Error(Errc::size_limit, "sigma_t is dense and limited to n <= 2000");
  auto adj_times = [&](const IntMatrix& M) {
    IntMatrix out = IntMatrix::Zero(n, n);
    for (Eigen::Index v = 0; v < n; ++v)
      for (Vertex u : g.neighbors(static_cast<Vertex>(v))) out.row(v) += M.row(u);
    return out;
  };
  IntMatrix prev = IntMatrix::Identity(n, n);
  if (t == 0) return prev;
  IntMatrix cur = adj_times(prev);
  for (int s = 2; s <= t; ++s) {
    IntMatrix next = adj_times(cur);
    for (Eigen::Index v = 0; v < n; ++v) {
      const auto deg = static_cast<std::int64_t>(g.degree(static_cast<Vertex>(v)));
      next.row(v) -= (s == 2 ? deg : deg - 1) * prev.row(v);
    }
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

}  // namespace sbmlab
