#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "sbmlab/error.hpp"
#include "sbmlab/graph.hpp"
#include "sbmlab/rng.hpp"
#include "sbmlab/sbm.hpp"

namespace sbmlab {

/// x ln x with 0 ln 0 = 0.
inline double xlnx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

/// Unique root in (0,1) of tau e^{-tau} = d e^{-d}, by bisection.
inline double tau(double d, double tol = 1e-12) {
  if (!(d > 1.0) || !std::isfinite(d)) throw Error(Errc::domain_error, "tau requires d > 1");
  const double target = d * std::exp(-d);
  double lo = 0.0, hi = 1.0;
  double mid = 0.5;
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    const double f = mid * std::exp(-mid) - target;
    if (std::abs(f) < tol) break;
    (f < 0.0 ? lo : hi) = mid;
    if (hi - lo < 1e-17) break;
  }
  return mid;
}

/// sum_{j>=1} j^{j-1}/j! (d e^{-d})^j, truncated.
inline double tau_series(double d, int terms = 200) {
  if (!(d > 0.0)) throw Error(Errc::domain_error, "tau series requires d > 0");
  const double lx = std::log(d) - d;
  double s = 0.0;
  for (int j = 1; j <= terms; ++j) s += std::exp((j - 1) * std::log(j) - std::lgamma(j + 1.0) + j * lx);
  return s;
}

enum class BalanceTolerance { delta, log_sqrt_n };

struct TypicalityParams {
  double delta = 0.1;
  double a = 0.0, b = 0.0;
  std::uint32_t k = 2;
  BalanceTolerance balance = BalanceTolerance::delta;
  bool quotient = false;  // enumerate one labeling per global permutation class

  void validate() const {
    if (!(delta > 0.0)) throw Error(Errc::parameter_out_of_range, "delta must be > 0");
    if (k < 2) throw Error(Errc::parameter_out_of_range, "k must be >= 2");
    if (!(a >= 0.0) || !(b >= 0.0)) throw Error(Errc::parameter_out_of_range, "a and b must be >= 0");
  }

  double balance_slack(std::size_t n) const {
    if (balance == BalanceTolerance::delta) return delta;
    const double nn = std::max<double>(static_cast<double>(n), 2.0);
    return std::log(nn) / std::sqrt(nn);
  }
};

namespace detail {

struct TypicalityBounds {
  double intra, inter, lo_frac, hi_frac;
  bool assortative;
};

inline TypicalityBounds typicality_bounds(const TypicalityParams& p, std::size_t n) {
  const double nn = static_cast<double>(n), k = p.k;
  const double intra = p.a * nn / (2.0 * k), inter = p.b * nn * (k - 1.0) / (2.0 * k);
  const double eps = p.balance_slack(n);
  if (p.a >= p.b)
    return {intra * (1.0 - p.delta), inter * (1.0 + p.delta), 1.0 / k - eps, 1.0 / k + eps, true};
  return {intra * (1.0 + p.delta), inter * (1.0 - p.delta), 1.0 / k - eps, 1.0 / k + eps, false};
}

inline bool typical_with(std::span<const Community> x, const Graph& g, const TypicalityBounds& bd, std::uint32_t k,
                         std::vector<std::size_t>& sizes) {
  const auto n = x.size();
  sizes.assign(k, 0);
  for (auto c : x) ++sizes[c];
  for (auto s : sizes) {
    const double f = static_cast<double>(s) / static_cast<double>(n);
    if (f < bd.lo_frac || f > bd.hi_frac) return false;
  }
  std::size_t intra = 0, inter = 0;
  for (EdgeId e = 0; e < g.num_directed_edges(); ++e) {
    const Vertex u = g.tail(e), v = g.head(e);
    if (u > v) continue;
    (x[u] == x[v] ? intra : inter) += 1;
  }
  if (bd.assortative) return intra >= bd.intra && inter <= bd.inter;
  return intra <= bd.intra && inter >= bd.inter;
}

}  // namespace detail

inline bool is_typical(const Labeling& x, const Graph& g, const TypicalityParams& p) {
  p.validate();
  if (x.size() != g.num_vertices()) throw Error(Errc::length_mismatch, "labeling and graph sizes differ");
  if (x.k != p.k) throw Error(Errc::invalid_argument, "labeling k differs from parameters");
  if (x.size() == 0) return false;
  std::vector<std::size_t> sizes;
  return detail::typical_with(x.sigma, g, detail::typicality_bounds(p, x.size()), p.k, sizes);
}

inline constexpr double kMaxEnumeration = 16777216.0;  // 2^24 labelings

/// Calls visit(labels, weight) for every typical labeling in lexicographic
/// order (x_0 most significant). With p.quotient only the first labeling of
/// each permutation class is visited; weight is the class size.
inline void for_each_typical(const Graph& g, const TypicalityParams& p,
                             const std::function<void(std::span<const Community>, std::uint64_t)>& visit) {
  p.validate();
  const auto n = g.num_vertices();
  if (n == 0) return;
  if (std::pow(static_cast<double>(p.k), static_cast<double>(n)) > kMaxEnumeration)
    throw Error(Errc::size_limit, "enumeration limited to k^n <= 2^24");
  const auto bd = detail::typicality_bounds(p, n);
  std::vector<Community> x(n, 0);
  std::vector<std::size_t> sizes;
  while (true) {
    std::uint64_t weight = 1;
    bool canonical = true;
    if (p.quotient) {
      Community next = 0;
      for (auto c : x) {
        if (c > next) {
          canonical = false;
          break;
        }
        if (c == next) ++next;
      }
      for (Community i = 0; i < next; ++i) weight *= p.k - i;
    }
    if (canonical && detail::typical_with(x, g, bd, p.k, sizes)) visit(x, weight);
    std::size_t i = n;
    while (i > 0 && x[i - 1] + 1 == p.k) x[--i] = 0;
    if (i == 0) break;
    ++x[i - 1];
  }
}

inline std::uint64_t count_typical(const Graph& g, const TypicalityParams& p) {
  std::uint64_t c = 0;
  for_each_typical(g, p, [&](std::span<const Community>, std::uint64_t w) { c += w; });
  return c;
}

/// All typical labelings (raw, not quotiented).
inline std::vector<Labeling> enumerate_typical(const Graph& g, TypicalityParams p) {
  p.quotient = false;
  std::vector<Labeling> out;
  for_each_typical(g, p, [&](std::span<const Community> x, std::uint64_t) {
    out.emplace_back(std::vector<Community>(x.begin(), x.end()), p.k);
  });
  return out;
}

/// Uniform draw from the typical set.
inline Labeling sample_typical(const Graph& g, TypicalityParams p, std::uint64_t seed) {
  p.quotient = false;
  const auto total = count_typical(g, p);
  if (total == 0) throw Error(Errc::empty_typical_set, "typical set is empty");
  CounterRng rng(derive_seed(seed, 5));
  std::uint64_t target = rng.below(total);
  std::optional<Labeling> pick;
  for_each_typical(g, p, [&](std::span<const Community> x, std::uint64_t) {
    if (!pick && target-- == 0) pick.emplace(std::vector<Community>(x.begin(), x.end()), p.k);
  });
  return *pick;
}

/// A(0,0) = (S/2) ln(k/S) + (a/2) ln a + (b(k-1)/2) ln b with S = a + (k-1)b.
inline double bad_atypicality_exponent(double a, double b, std::uint32_t k) {
  const double S = a + (k - 1.0) * b;
  return 0.5 * S * std::log(static_cast<double>(k)) - 0.5 * xlnx(S) + 0.5 * xlnx(a) + 0.5 * (k - 1.0) * xlnx(b);
}

/// (a ln a + (k-1) b ln b)/k - d ln d.
inline double it_lhs(double a, double b, std::uint32_t k) {
  const double d = (a + (k - 1.0) * b) / k;
  return (xlnx(a) + (k - 1.0) * xlnx(b)) / k - xlnx(d);
}

inline bool union_bound_holds(double a, double b, std::uint32_t k) {
  if (k < 2) throw Error(Errc::parameter_out_of_range, "k must be >= 2");
  return it_lhs(a, b, k) / (2.0 * std::log(static_cast<double>(k))) > 1.0;
}

inline double giant_bound_exponent(double a, double b, std::uint32_t k) {
  return std::exp(-a / k) * (1.0 - std::pow(1.0 - std::exp(-b / k), k - 1.0));
}

/// f(tau, d) = (1 - tau)/(1 - tau/d).
inline double f_tau_d(double t, double d) { return (1.0 - t) / (1.0 - t / d); }

inline double psi(double a, double b, std::uint32_t k) {
  const double S = a + (k - 1.0) * b, d = S / k;
  const double t = tau(d);
  auto term = [S](double w, double x) { return x > 0.0 ? (w / S) * std::log(S / x) : 0.0; };
  const double H = term(a, a) + term((k - 1.0) * b, b);
  return (t / d) * (1.0 - t / 2.0) +
         H / std::log(static_cast<double>(k)) * (t * t / (2.0 * d) + (d - t) * std::exp(-(d - t)));
}

inline double binomial_exponent(double s, double t) {
  if (!(s > 0.0) || t < 0.0) throw Error(Errc::parameter_out_of_range, "need s > 0 and t >= 0");
  return s - t + (t > 0.0 ? t * std::log(t / s) : 0.0);
}

struct ThresholdReport {
  std::uint32_t k = 2;
  double a = 0, b = 0, d = 0;
  double tau = std::numeric_limits<double>::quiet_NaN();
  double snr = std::numeric_limits<double>::quiet_NaN();
  bool ks_holds = false;
  bool union_bound_holds = false;
  bool it_bound_holds = false;
  double it_lhs = 0;
  double it_rhs = std::numeric_limits<double>::quiet_NaN();
  double f_tau_d = std::numeric_limits<double>::quiet_NaN();
  double psi = std::numeric_limits<double>::quiet_NaN();
  double giant_exponent = 0;
  double A0 = 0;
};

/// Evaluates the typicality-sampler detection condition; requires d > 1.
inline bool it_bound_holds(double a, double b, std::uint32_t k, ThresholdReport* report = nullptr) {
  if (k < 2) throw Error(Errc::parameter_out_of_range, "k must be >= 2");
  const double d = (a + (k - 1.0) * b) / k;
  if (!(d > 1.0)) throw Error(Errc::domain_error, "it_bound_holds requires d > 1");
  const double t = tau(d), lk = std::log(static_cast<double>(k));
  const double f = f_tau_d(t, d), g = giant_bound_exponent(a, b, k);
  const double rhs = std::min(f * 2.0 * lk, 2.0 * lk - 2.0 * std::log(2.0) * g);
  const double lhs = it_lhs(a, b, k);
  if (report) {
    report->tau = t;
    report->f_tau_d = f;
    report->it_lhs = lhs;
    report->it_rhs = rhs;
  }
  return lhs > rhs;
}

inline ThresholdReport threshold_report(double a, double b, std::uint32_t k) {
  if (k < 2) throw Error(Errc::parameter_out_of_range, "k must be >= 2");
  if (!(a >= 0.0) || !(b >= 0.0)) throw Error(Errc::parameter_out_of_range, "a and b must be >= 0");
  ThresholdReport r;
  r.k = k;
  r.a = a;
  r.b = b;
  r.d = (a + (k - 1.0) * b) / k;
  if (r.d > 0.0) {
    r.snr = snr_symmetric(k, a, b);
    r.ks_holds = r.snr > 1.0;
  }
  r.union_bound_holds = union_bound_holds(a, b, k);
  r.it_lhs = it_lhs(a, b, k);
  r.giant_exponent = giant_bound_exponent(a, b, k);
  r.A0 = bad_atypicality_exponent(a, b, k);
  if (r.d > 1.0) {
    r.it_bound_holds = it_bound_holds(a, b, k, &r);
    r.psi = psi(a, b, k);
  }
  return r;
}

}  // namespace sbmlab
