#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sbmlab/cycles.hpp"
#include "sbmlab/error.hpp"
#include "sbmlab/graph.hpp"
#include "sbmlab/metrics.hpp"
#include "sbmlab/numeric.hpp"
#include "sbmlab/rng.hpp"

namespace sbmlab {

inline constexpr int kMaxHorizon = 1000;

/// ceil(2 ln n / ln snr) + 4 when snr > 1, else ceil(4 ln n) + 4; capped.
inline int default_horizon(std::size_t n, std::optional<double> snr) {
  const double ln_n = std::log(std::max<double>(static_cast<double>(n), 2.0));
  double m = (snr && *snr > 1.0) ? std::ceil(2.0 * ln_n / std::log(*snr)) + 4.0 : std::ceil(4.0 * ln_n) + 4.0;
  if (!std::isfinite(m) || m > kMaxHorizon) m = kMaxHorizon;
  return std::max(2, static_cast<int>(m));
}

/// max(1, floor(sqrt(ln ln n))).
inline int default_depth(std::size_t n) {
  const double nn = static_cast<double>(n);
  if (nn <= std::exp(1.0)) return 1;
  return std::max(1, static_cast<int>(std::floor(std::sqrt(std::log(std::log(nn))))));
}

struct AbpConfig {
  std::optional<int> m;         // defaults to default_horizon(n, snr)
  std::optional<double> snr;    // only used to pick the default horizon
  int r = 2;
  double c = 1.0;
  std::optional<double> gamma;  // full ABP: defaults to (1 - l1/l2^2)/2
  std::optional<int> depth;     // full ABP: defaults to default_depth(n)
  std::uint64_t seed = 0;
  bool mean_subtract = true;    // ABP* only
  bool normalize = true;

  int horizon(std::size_t n) const { return m ? *m : default_horizon(n, snr); }

  void validate() const {
    if (m && *m < 2) throw Error(Errc::parameter_out_of_range, "m must be >= 2");
    if (r < 2) throw Error(Errc::parameter_out_of_range, "r must be >= 2");
    if (!(c > 0.0)) throw Error(Errc::parameter_out_of_range, "c must be > 0");
    if (gamma && !(*gamma >= 0.0 && *gamma < 1.0)) throw Error(Errc::parameter_out_of_range, "gamma must lie in [0, 1)");
    if (depth && *depth < 0) throw Error(Errc::parameter_out_of_range, "depth must be >= 0");
  }
};

struct PropagationOptions {
  int m = 2;
  bool mean_subtract = true;
  bool normalize = true;
};

/// Messages y^(t) over directed edges; stored values times exp(log_scale) are
/// the true values. Directed edge e = (v, v') carries y_{v,v'}.
struct MessageStream {
  std::vector<double> y;
  double log_scale = 0.0;
};

/// Runs t = 2..m of the message recursion starting from y1. The observer is
/// called as obs(t, y^(t), log_scale) for t = 1..m, before centering.
template <class Observer>
MessageStream propagate(const Graph& g, const ShortCycleIndex& cycles, std::vector<double> y1,
                        const PropagationOptions& opt, Observer&& obs) {
  const auto E = g.num_directed_edges();
  if (y1.size() != E) throw Error(Errc::length_mismatch, "initial messages must cover every directed edge");
  if (opt.m < 1) throw Error(Errc::parameter_out_of_range, "m must be >= 1");
  const int depth = std::max(cycles.r(), 2);
  const auto n = g.num_vertices();

  // ring[t % depth] holds z^(t); scales[t] its log scale
  std::vector<std::vector<double>> ring(depth);
  std::vector<double> scales(opt.m + 1, 0.0);
  std::vector<double> z1;
  std::vector<double> y = std::move(y1);
  std::vector<double> S(n);
  require_finite(y, "non-finite message at iteration 1");
  if (opt.normalize) scales[1] = normalize_rms(y);
  obs(1, std::span<const double>(y), scales[1]);

  for (int t = 2; t <= opt.m; ++t) {
    auto& z = ring[(t - 1) % depth];
    z = std::move(y);
    if (opt.mean_subtract) {
      const double mu = mean(z);
      for (double& v : z) v -= mu;
    }
    if (t == 2) z1 = z;
    for (Vertex u = 0; u < n; ++u) {
      const auto first = g.first_edge(u);
      S[u] = pairwise_sum(std::span<const double>(z.data() + first, g.end_edge(u) - first));
    }
    y.assign(E, 0.0);
    for (EdgeId e = 0; e < E; ++e) y[e] = S[g.head(e)] - z[g.reverse(e)];

    for (EdgeId e : cycles.edges()) {
      const Vertex v = g.tail(e), vp = g.head(e);
      double corr = 0.0;
      for (const auto& rec : cycles.records(e)) {
        const int rp = static_cast<int>(rec.length);
        if (t < rp) continue;
        if (t == rp) {
          const double ratio = std::exp(scales[1] - scales[t - 1]);
          corr += rec.count * z1[g.find_edge(rec.closer, v)] * ratio;
          continue;
        }
        const int src = t - rp;
        const auto& zs = ring[src % depth];
        double s = 0.0;
        for (EdgeId f = g.first_edge(v); f < g.end_edge(v); ++f) {
          const Vertex h = g.head(f);
          if (h != vp && h != rec.closer) s += zs[f];
        }
        corr += rec.count * s * std::exp(scales[src] - scales[t - 1]);
      }
      y[e] -= corr;
    }
    scales[t] = scales[t - 1];
    require_finite(y, ("non-finite message at iteration " + std::to_string(t)).c_str());
    if (opt.normalize) scales[t] += normalize_rms(y);
    obs(t, std::span<const double>(y), scales[t]);
  }
  return {std::move(y), scales[opt.m]};
}

inline MessageStream propagate(const Graph& g, const ShortCycleIndex& cycles, std::vector<double> y1,
                               const PropagationOptions& opt) {
  return propagate(g, cycles, std::move(y1), opt, [](int, std::span<const double>, double) {});
}

/// Sum of y_{v,v'} over the out-edges of each vertex.
inline std::vector<double> vertex_sums(const Graph& g, std::span<const double> y) {
  std::vector<double> out(g.num_vertices(), 0.0);
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    const auto first = g.first_edge(v);
    out[v] = pairwise_sum(y.subspan(first, g.end_edge(v) - first));
  }
  return out;
}

inline std::vector<double> gaussian_edge_init(const Graph& g, std::uint64_t seed) {
  CounterRng rng(derive_seed(seed, 1));
  std::vector<double> y(g.num_directed_edges());
  for (double& v : y) v = rng.gaussian();
  return y;
}

/// ABP* with explicit initial messages.
inline Partition abp_star(const Graph& g, const AbpConfig& cfg, std::vector<double> y1) {
  cfg.validate();
  const auto n = g.num_vertices();
  Partition part;
  part.side.assign(n, 0);
  part.scores.assign(n, 0.0);
  if (g.num_edges() == 0) return part;
  const auto cycles = find_short_cycles(g, cfg.r);
  PropagationOptions opt{cfg.horizon(n), cfg.mean_subtract, cfg.normalize};
  auto out = propagate(g, cycles, std::move(y1), opt);
  part.scores = vertex_sums(g, out.y);
  for (Vertex v = 0; v < n; ++v) part.side[v] = part.scores[v] > 0.0;
  return part;
}

inline Partition abp_star(const Graph& g, const AbpConfig& cfg) {
  return abp_star(g, cfg, gaussian_edge_init(g, cfg.seed));
}

namespace detail {

inline Eigen::VectorXd compensation_coefficients(Eigen::Index m, std::span<const double> lambdas,
                                                 std::span<const int> exponents) {
  if (lambdas.size() != exponents.size()) throw Error(Errc::length_mismatch, "one exponent per eigenvalue");
  long total = 0;
  for (int e : exponents) {
    if (e < 0) throw Error(Errc::parameter_out_of_range, "exponents must be >= 0");
    total += e;
  }
  if (total >= m) throw Error(Errc::size_limit, "compensation exponents exceed the available columns");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(m);
  c(m - 1) = 1.0;
  for (std::size_t j = 0; j < lambdas.size(); ++j)
    for (int q = 0; q < exponents[j]; ++q)
      for (Eigen::Index i = 0; i + 1 < m; ++i) c(i) -= lambdas[j] * c(i + 1);
  return c;
}

}  // namespace detail

/// Y (prod_j M_j^{e_j}) e_m with M_j bidiagonal: 1 on the diagonal, -lambda_j above it.
inline Eigen::VectorXd compensate(const Eigen::MatrixXd& Y, std::span<const double> lambdas,
                                  std::span<const int> exponents) {
  if (Y.cols() == 0) throw Error(Errc::invalid_argument, "Y has no columns");
  return Y * detail::compensation_coefficients(Y.cols(), lambdas, exponents);
}

/// Same as compensate for a Y whose column t is stored scaled by exp(-log_scales[t]).
/// The result is returned scaled by exp(-max log scale).
inline Eigen::VectorXd compensate_scaled(const Eigen::MatrixXd& Y, std::span<const double> log_scales,
                                         std::span<const double> lambdas, std::span<const int> exponents) {
  if (log_scales.size() != static_cast<std::size_t>(Y.cols()))
    throw Error(Errc::length_mismatch, "one log scale per column");
  Eigen::VectorXd c = detail::compensation_coefficients(Y.cols(), lambdas, exponents);
  const double top = *std::max_element(log_scales.begin(), log_scales.end());
  for (Eigen::Index t = 0; t < c.size(); ++t) c(t) *= std::exp(log_scales[t] - top);
  return Y * c;
}

/// y''_v = sum of y'_w over w at shortest-path distance exactly `depth` from v.
inline std::vector<double> aggregate_depth(const Graph& g, std::span<const double> y_prime, int depth) {
  const auto n = g.num_vertices();
  if (y_prime.size() != n) throw Error(Errc::length_mismatch, "one value per vertex");
  if (depth < 0) throw Error(Errc::parameter_out_of_range, "depth must be >= 0");
  if (depth == 0) return {y_prime.begin(), y_prime.end()};
  std::vector<double> out(n, 0.0);
  std::vector<int> dist(n, -1);
  std::vector<Vertex> queue;
  for (Vertex v = 0; v < n; ++v) {
    queue.assign(1, v);
    dist[v] = 0;
    double s = 0.0;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      const Vertex x = queue[h];
      if (dist[x] == depth) {
        s += y_prime[x];
        continue;
      }
      for (Vertex w : g.neighbors(x))
        if (dist[w] < 0) {
          dist[w] = dist[x] + 1;
          queue.push_back(w);
        }
    }
    out[v] = s;
    for (Vertex x : queue) dist[x] = -1;
  }
  return out;
}

/// Probability of the second set for statistic y and threshold c' > 0.
inline double assignment_probability(double y, double c_prime) {
  if (!(c_prime > 0.0)) return y > 0.0 ? 1.0 : (y < 0.0 ? 0.0 : 0.5);
  return std::clamp(0.5 + y / (2.0 * c_prime), 0.0, 1.0);
}

struct AbpFullResult {
  Partition partition;
  int m = 0;
  int s = 2;
  double gamma = 0.0;
  double l = 0.0;
  int depth = 1;
  std::vector<int> exponents;
  std::size_t gamma_edges = 0;
  std::vector<double> compensated;  // y^(m) per vertex, up to a positive factor
  std::vector<std::string> warnings;
};

/// Full ABP. distinct_eigs are the distinct eigenvalues of PQ ordered by
/// nonincreasing magnitude.
inline AbpFullResult abp_full(const Graph& g, const AbpConfig& cfg, std::span<const double> distinct_eigs) {
  cfg.validate();
  const auto n = g.num_vertices();
  const auto h = distinct_eigs.size();
  if (h < 2) throw Error(Errc::invalid_argument, "full ABP needs at least two distinct eigenvalues");
  AbpFullResult res;
  const double l1 = distinct_eigs[0], l2 = distinct_eigs[1];
  if (!(l1 > 0.0)) throw Error(Errc::invalid_argument, "leading eigenvalue must be positive");

  // step 1
  res.s = (h > 2 && std::abs(std::abs(distinct_eigs[1]) - std::abs(distinct_eigs[2])) <= 1e-12 * std::abs(l1)) ? 3 : 2;
  if (l2 * l2 <= l1) res.warnings.push_back("lambda_2^2 <= lambda_1: below the Kesten-Stigum threshold");
  if (cfg.gamma) {
    res.gamma = *cfg.gamma;
  } else {
    res.gamma = (1.0 - l1 / (l2 * l2)) / 2.0;
    if (!(res.gamma >= 0.0)) {
      res.warnings.push_back("computed gamma is negative; using gamma = 0");
      res.gamma = 0.0;
    }
  }
  const int r = cfg.r, s = res.s;
  const double ls = std::abs(distinct_eigs[s - 1]) * (1.0 - res.gamma);
  const double floor_l = 2.0 * (2 * r + 1) * (s - 1);
  if (ls > 1.0) {
    res.l = std::max((s - 1) / std::log(ls) + s - 1, floor_l);
  } else {
    res.warnings.push_back("(1-gamma)|lambda_s| <= 1: l falls back to 2(2r+1)(s-1)");
    res.l = floor_l;
  }
  res.m = cfg.horizon(n);
  res.depth = cfg.depth ? *cfg.depth : default_depth(n);

  CounterRng split_rng(derive_seed(cfg.seed, 2));
  std::vector<char> in_gamma(g.num_directed_edges(), 0);
  for (EdgeId e = 0; e < g.num_directed_edges(); ++e) {
    if (g.tail(e) > g.head(e)) continue;
    const double u = static_cast<double>(split_rng.at(e) >> 11) * 0x1.0p-53;
    if (u < res.gamma) {
      in_gamma[e] = in_gamma[g.reverse(e)] = 1;
      ++res.gamma_edges;
    }
  }
  const Graph rest = g.filter_edges([&](EdgeId e) { return !in_gamma[e]; });

  // step 2
  CounterRng x_rng(derive_seed(cfg.seed, 3));
  std::vector<double> x(n);
  for (double& v : x) v = x_rng.gaussian();
  std::vector<double> y1(rest.num_directed_edges());
  for (EdgeId e = 0; e < y1.size(); ++e) y1[e] = x[rest.head(e)];

  const auto cycles = find_short_cycles(rest, r);
  Eigen::MatrixXd Y(static_cast<Eigen::Index>(n), res.m);
  std::vector<double> col_scales(res.m, 0.0);
  PropagationOptions opt{res.m, false, cfg.normalize};
  propagate(rest, cycles, std::move(y1), opt, [&](int t, std::span<const double> y, double scale) {
    const auto sums = vertex_sums(rest, y);
    Y.col(t - 1) = Eigen::Map<const Eigen::VectorXd>(sums.data(), static_cast<Eigen::Index>(n));
    col_scales[t - 1] = scale;
  });

  std::vector<double> lambdas;
  for (int sp = 1; sp < s; ++sp) {
    const double e = std::ceil((res.m - r - (2 * r + 1) * sp) / res.l);
    res.exponents.push_back(std::max(0, static_cast<int>(e)));
    lambdas.push_back((1.0 - res.gamma) * distinct_eigs[sp - 1]);
  }
  const Eigen::VectorXd ym = compensate_scaled(Y, col_scales, lambdas, res.exponents);
  res.compensated.assign(ym.data(), ym.data() + ym.size());

  std::vector<double> yp(n, 0.0);
  for (EdgeId e = 0; e < g.num_directed_edges(); ++e)
    if (in_gamma[e]) yp[g.tail(e)] += ym(g.head(e));
  const auto ypp = aggregate_depth(rest, yp, res.depth);
  require_finite(ypp, "non-finite aggregated statistic");

  // step 3
  const double c_prime = cfg.c * rms(ypp);
  CounterRng assign_rng(derive_seed(cfg.seed, 4));
  auto& part = res.partition;
  part.side.assign(n, 0);
  part.scores = ypp;
  for (Vertex v = 0; v < n; ++v) {
    const double p = assignment_probability(ypp[v], c_prime);
    const double u = static_cast<double>(assign_rng.at(v) >> 11) * 0x1.0p-53;
    part.side[v] = u < p;
  }
  return res;
}

}  // namespace sbmlab
