#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "sbmlab/cycles.hpp"
#include "sbmlab/error.hpp"
#include "sbmlab/graph.hpp"

namespace sbmlab {

struct CycleProfile {
  int m_max = 0;
  std::vector<std::uint64_t> counts;     // simple cycles, index = length
  std::vector<std::uint64_t> nb_closed;  // tr(B^m), index = length
};

inline CycleProfile cycle_profile(const Graph& g, int m_max, bool exact_cycles = true) {
  if (m_max < 3) throw Error(Errc::invalid_argument, "m_max must be >= 3");
  CycleProfile p;
  p.m_max = m_max;
  if (exact_cycles) {
    if (m_max > 12) throw Error(Errc::size_limit, "exact cycle counts limited to m_max <= 12");
    p.counts = count_cycles_upto(g, m_max);
  }
  p.nb_closed = nb_closed_walks_upto(g, m_max);
  return p;
}

/// Expected simple m-cycles, (1/2m) sum_i lambda_i^m.
inline double expected_cycles(const std::vector<double>& eigs, int m) {
  double s = 0.0;
  for (double l : eigs) s += std::pow(l, m);
  return s / (2.0 * m);
}

/// Expected tr(B^m) for eigenvalues d (once) and mu (k-1 times): each cycle
/// length l | m, l >= 3, contributes d^l + (k-1) mu^l.
inline double expected_nb_closed(double d, double mu, std::uint32_t k, int m) {
  double s = 0.0;
  for (int l = 3; l <= m; ++l)
    if (m % l == 0) s += std::pow(d, l) + (k - 1.0) * std::pow(mu, l);
  return s;
}

struct LearnOptions {
  int m_max = 8;
  std::uint32_t k_max = 5;
  double k_tolerance = 3.84;     // chi-square 95% point, one degree of freedom
  double no_signal_chi2 = 3.84;
};

struct LearnResult {
  double d_hat = 0, mu_hat = 0, a_hat = 0, b_hat = 0;
  std::uint32_t k_hat = 2;
  bool no_signal = false;
  double residual_null = 0;            // fit with mu = 0
  std::vector<double> residuals;       // best residual per k, index = k
  std::vector<double> mu_by_k;         // index = k
  std::vector<std::uint64_t> nb_closed;
  std::vector<std::string> warnings;
};

namespace detail {

inline double learn_residual(const std::vector<std::uint64_t>& N, int m_max, double d, double mu, std::uint32_t k) {
  double r = 0.0;
  for (int m = 3; m <= m_max; ++m) {
    const double e = static_cast<double>(N[m]) - expected_nb_closed(d, mu, k, m);
    r += e * e / (2.0 * m * std::pow(d, m));
  }
  return r;
}

}  // namespace detail

/// Weighted least-squares fit of closed nonbacktracking walk counts against
/// d^m + (k-1) mu^m for each k, then a = d + (k-1) mu, b = d - mu.
inline LearnResult estimate_params(const Graph& g, const LearnOptions& opt = {}) {
  if (opt.m_max < 5) throw Error(Errc::parameter_out_of_range, "m_max must be >= 5");
  if (opt.k_max < 2) throw Error(Errc::parameter_out_of_range, "k_max must be >= 2");
  const auto n = g.num_vertices();
  LearnResult res;
  if (n == 0 || g.num_edges() == 0) throw Error(Errc::degenerate, "graph has no edges");
  const double d = 2.0 * static_cast<double>(g.num_edges()) / static_cast<double>(n);
  res.d_hat = d;
  if (d <= 1.0) res.warnings.push_back("average degree <= 1: cycle counts carry little information");
  if (d > 1.0) {
    const double cap = std::floor(std::pow(std::log(static_cast<double>(n)) / std::log(d), 0.25));
    if (opt.m_max > cap) res.warnings.push_back("m_max exceeds floor(log_d(n)^(1/4)) = " + std::to_string(static_cast<int>(cap)));
  }
  res.nb_closed = nb_closed_walks_upto(g, opt.m_max);
  const auto& N = res.nb_closed;

  res.residual_null = detail::learn_residual(N, opt.m_max, d, 0.0, 2);
  res.residuals.assign(opt.k_max + 1, std::numeric_limits<double>::quiet_NaN());
  res.mu_by_k.assign(opt.k_max + 1, 0.0);
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t k = 2; k <= opt.k_max; ++k) {
    const double lo = -d / (k - 1.0), hi = d;
    auto R = [&](double mu) { return detail::learn_residual(N, opt.m_max, d, mu, k); };
    constexpr int grid = 4000;
    double mu_best = 0.0, r_best = R(0.0);
    for (int i = 0; i <= grid; ++i) {
      const double mu = lo + (hi - lo) * i / grid;
      const double r = R(mu);
      if (r < r_best) {
        r_best = r;
        mu_best = mu;
      }
    }
    // golden-section refinement within one grid cell
    const double step = (hi - lo) / grid;
    double x0 = std::max(lo, mu_best - step), x1 = std::min(hi, mu_best + step);
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = x1 - phi * (x1 - x0), e = x0 + phi * (x1 - x0);
    for (int it = 0; it < 80; ++it) {
      if (R(c) < R(e))
        x1 = e;
      else
        x0 = c;
      c = x1 - phi * (x1 - x0);
      e = x0 + phi * (x1 - x0);
    }
    const double mid = 0.5 * (x0 + x1);
    if (R(mid) < r_best) {
      r_best = R(mid);
      mu_best = mid;
    }
    res.residuals[k] = r_best;
    res.mu_by_k[k] = mu_best;
    best = std::min(best, r_best);
  }
  for (std::uint32_t k = 2; k <= opt.k_max; ++k)
    if (res.residuals[k] <= best + opt.k_tolerance) {
      res.k_hat = k;
      break;
    }
  res.mu_hat = res.mu_by_k[res.k_hat];
  res.a_hat = d + (res.k_hat - 1.0) * res.mu_hat;
  res.b_hat = d - res.mu_hat;
  res.no_signal = res.residual_null - best < opt.no_signal_chi2;
  return res;
}

}  // namespace sbmlab
