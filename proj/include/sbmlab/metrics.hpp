#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "sbmlab/error.hpp"
#include "sbmlab/sbm.hpp"

namespace sbmlab {

/// Two-set output of a detector: side[v] = 1 puts v in the first returned set
/// (S, or S_2 for the randomized assignment), 0 in its complement.
struct Partition {
  std::vector<std::uint8_t> side;
  std::vector<double> scores;  // optional per-vertex statistic behind the split

  std::size_t size() const noexcept { return side.size(); }

  Labeling as_labeling(std::uint32_t k = 2) const {
    return Labeling(std::vector<Community>(side.begin(), side.end()), k);
  }
};

/// max over ordered pairs (i, j) of |Omega_i ∩ S|/|Omega_i| - |Omega_j ∩ S|/|Omega_j|.
inline double detection_margin(const Labeling& labels, const Partition& part) {
  if (labels.size() != part.size()) throw Error(Errc::length_mismatch, "labels and partition differ in length");
  std::vector<double> in_s(labels.k, 0.0), total(labels.k, 0.0);
  for (std::size_t v = 0; v < labels.size(); ++v) {
    total[labels[v]] += 1.0;
    if (part.side[v]) in_s[labels[v]] += 1.0;
  }
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::uint32_t i = 0; i < labels.k; ++i) {
    if (total[i] == 0.0)
      throw Error(Errc::empty_community, "community " + std::to_string(i) + " is empty");
    const double f = in_s[i] / total[i];
    lo = std::min(lo, f);
    hi = std::max(hi, f);
  }
  return hi - lo;
}

enum class AgreementMethod { exhaustive, assignment };

struct AgreementResult {
  double value = 0.0;
  AgreementMethod method = AgreementMethod::exhaustive;
};

namespace detail {

inline std::vector<std::vector<std::int64_t>> confusion(const Labeling& x, const Labeling& y) {
  if (x.size() != y.size()) throw Error(Errc::length_mismatch, "labelings differ in length");
  if (x.k != y.k) throw Error(Errc::length_mismatch, "labelings differ in k");
  std::vector<std::vector<std::int64_t>> c(x.k, std::vector<std::int64_t>(x.k, 0));
  for (std::size_t i = 0; i < x.size(); ++i) ++c[x[i]][y[i]];
  return c;
}

// max over permutations pi of sum_b C[pi(b)][b], by enumeration of S_k.
inline std::int64_t best_matching_exhaustive(const std::vector<std::vector<std::int64_t>>& c) {
  const auto k = c.size();
  std::vector<std::size_t> pi(k);
  std::iota(pi.begin(), pi.end(), 0);
  std::int64_t best = std::numeric_limits<std::int64_t>::min();
  do {
    std::int64_t s = 0;
    for (std::size_t b = 0; b < k; ++b) s += c[pi[b]][b];
    best = std::max(best, s);
  } while (std::next_permutation(pi.begin(), pi.end()));
  return best;
}

// Same quantity by the Hungarian method (Kuhn-Munkres with potentials),
// O(k^3), run as a minimization of -C.
inline std::int64_t best_matching_assignment(const std::vector<std::vector<std::int64_t>>& c) {
  const std::size_t k = c.size();
  constexpr std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> u(k + 1, 0), v(k + 1, 0);
  std::vector<std::size_t> match(k + 1, 0), way(k + 1, 0);
  for (std::size_t row = 1; row <= k; ++row) {
    match[0] = row;
    std::size_t col0 = 0;
    std::vector<std::int64_t> minv(k + 1, inf);
    std::vector<bool> used(k + 1, false);
    do {
      used[col0] = true;
      const std::size_t r0 = match[col0];
      std::int64_t delta = inf;
      std::size_t col1 = 0;
      for (std::size_t col = 1; col <= k; ++col) {
        if (used[col]) continue;
        const std::int64_t cur = -c[r0 - 1][col - 1] - u[r0] - v[col];
        if (cur < minv[col]) {
          minv[col] = cur;
          way[col] = col0;
        }
        if (minv[col] < delta) {
          delta = minv[col];
          col1 = col;
        }
      }
      for (std::size_t col = 0; col <= k; ++col) {
        if (used[col]) {
          u[match[col]] += delta;
          v[col] -= delta;
        } else {
          minv[col] -= delta;
        }
      }
      col0 = col1;
    } while (match[col0] != 0);
    do {
      const std::size_t col1 = way[col0];
      match[col0] = match[col1];
      col0 = col1;
    } while (col0);
  }
  std::int64_t total = 0;
  for (std::size_t col = 1; col <= k; ++col) total += c[match[col] - 1][col - 1];
  return total;
}

}  // namespace detail

/// Largest k for which agreement() enumerates S_k.
inline constexpr std::uint32_t kExhaustiveAgreementMaxK = 10;

/// A(x, y) = max over pi in S_k of (1/n) sum 1(x_i = pi(y_i)). Exhaustive
/// for k <= 10; above that an optimal assignment on the confusion matrix,
/// reported through `method`.
inline AgreementResult agreement_detailed(const Labeling& x, const Labeling& y) {
  const auto c = detail::confusion(x, y);
  if (x.size() == 0) return {1.0, AgreementMethod::exhaustive};
  const double n = static_cast<double>(x.size());
  if (x.k <= kExhaustiveAgreementMaxK)
    return {static_cast<double>(detail::best_matching_exhaustive(c)) / n, AgreementMethod::exhaustive};
  return {static_cast<double>(detail::best_matching_assignment(c)) / n, AgreementMethod::assignment};
}

inline double agreement(const Labeling& x, const Labeling& y) { return agreement_detailed(x, y).value; }

/// Agreement computed through the assignment route regardless of k.
inline double agreement_by_assignment(const Labeling& x, const Labeling& y) {
  const auto c = detail::confusion(x, y);
  if (x.size() == 0) return 1.0;
  return static_cast<double>(detail::best_matching_assignment(c)) / static_cast<double>(x.size());
}

/// d_*(x, y) = min over pi of Hamming(x, pi(y)).
inline std::size_t permuted_hamming(const Labeling& x, const Labeling& y) {
  const auto c = detail::confusion(x, y);
  const auto best = x.k <= kExhaustiveAgreementMaxK ? detail::best_matching_exhaustive(c)
                                                    : detail::best_matching_assignment(c);
  return x.size() - static_cast<std::size_t>(best);
}

/// True iff y is in B_eps(x): d_*(x, y)/n > 1 - 1/k - eps.
inline bool bad_set_membership(const Labeling& x, const Labeling& y, double eps) {
  const std::size_t d = permuted_hamming(x, y);
  if (x.size() == 0) return false;
  return static_cast<double>(d) / static_cast<double>(x.size()) > 1.0 - 1.0 / x.k - eps;
}

}  // namespace sbmlab
