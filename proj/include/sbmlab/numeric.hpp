#pragma once

#include <cmath>
#include <span>

#include "sbmlab/error.hpp"

namespace sbmlab {

/// Deterministic pairwise summation; result depends only on the input order.
inline double pairwise_sum(std::span<const double> x) {
  if (x.size() <= 32) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  }
  const auto h = x.size() / 2;
  return pairwise_sum(x.first(h)) + pairwise_sum(x.subspan(h));
}

inline double mean(std::span<const double> x) { return x.empty() ? 0.0 : pairwise_sum(x) / static_cast<double>(x.size()); }

inline double sum_squares(std::span<const double> x) {
  if (x.size() <= 32) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
  }
  const auto h = x.size() / 2;
  return sum_squares(x.first(h)) + sum_squares(x.subspan(h));
}

inline double rms(std::span<const double> x) {
  return x.empty() ? 0.0 : std::sqrt(sum_squares(x) / static_cast<double>(x.size()));
}

/// Divides x by its rms (when nonzero) and returns log of the factor removed.
inline double normalize_rms(std::span<double> x) {
  const double s = rms(x);
  if (!(s > 0.0) || !std::isfinite(s)) return 0.0;
  for (double& v : x) v /= s;
  return std::log(s);
}

inline void require_finite(std::span<const double> x, const char* what) {
  for (double v : x)
    if (!std::isfinite(v)) throw Error(Errc::non_finite, what);
}

}  // namespace sbmlab
