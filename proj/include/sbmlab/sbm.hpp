#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sbmlab/error.hpp"
#include "sbmlab/graph.hpp"
#include "sbmlab/rng.hpp"

namespace sbmlab {

using Community = std::uint32_t;

/// Community assignment sigma in [k]^n.
struct Labeling {
  std::vector<Community> sigma;
  std::uint32_t k = 2;

  Labeling() = default;
  Labeling(std::vector<Community> s, std::uint32_t k_) : sigma(std::move(s)), k(k_) { validate(); }

  std::size_t size() const noexcept { return sigma.size(); }
  Community operator[](std::size_t i) const noexcept { return sigma[i]; }

  void validate() const {
    if (k < 1) throw Error(Errc::invalid_argument, "labeling needs k >= 1");
    for (std::size_t i = 0; i < sigma.size(); ++i)
      if (sigma[i] >= k)
        throw Error(Errc::invalid_argument,
                    "label " + std::to_string(sigma[i]) + " at vertex " + std::to_string(i) +
                        " is not below k=" + std::to_string(k));
  }

  std::vector<std::size_t> community_sizes() const {
    std::vector<std::size_t> out(k, 0);
    for (auto c : sigma) ++out[c];
    return out;
  }
};

/// SBM(n, p, Q/n): priors p and rate matrix Q.
class SbmParams {
 public:
  SbmParams(std::vector<double> p, Eigen::MatrixXd Q) : p_(std::move(p)), Q_(std::move(Q)) {
    const auto k = p_.size();
    if (k < 2) throw Error(Errc::invalid_argument, "need at least two communities");
    if (static_cast<std::size_t>(Q_.rows()) != k || static_cast<std::size_t>(Q_.cols()) != k)
      throw Error(Errc::invalid_argument, "Q must be k x k");
    double sum = 0.0;
    for (double pi : p_) {
      if (!(pi > 0.0)) throw Error(Errc::invalid_argument, "priors must be strictly positive");
      sum += pi;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw Error(Errc::invalid_argument, "priors must sum to 1");
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        if (!(Q_(i, j) >= 0.0)) throw Error(Errc::invalid_argument, "Q entries must be >= 0");
        if (std::abs(Q_(i, j) - Q_(j, i)) > 1e-12)
          throw Error(Errc::invalid_argument, "Q must be symmetric");
      }
  }

  std::size_t k() const noexcept { return p_.size(); }
  const std::vector<double>& p() const noexcept { return p_; }
  const Eigen::MatrixXd& Q() const noexcept { return Q_; }

  /// Expected degree of a vertex in community i, (Q p)_i.
  double expected_degree(std::size_t i) const {
    double s = 0.0;
    for (std::size_t j = 0; j < k(); ++j) s += Q_(i, j) * p_[j];
    return s;
  }

 private:
  std::vector<double> p_;
  Eigen::MatrixXd Q_;
};

/// SBM(n, k, a, b): uniform priors, rate a inside and b across communities.
struct SymmetricSbm {
  std::size_t n = 0;
  std::uint32_t k = 2;
  double a = 0.0;
  double b = 0.0;

  double d() const noexcept { return (a + (k - 1) * b) / k; }
  double lambda2() const noexcept { return (a - b) / k; }

  SbmParams params() const {
    if (k < 2) throw Error(Errc::invalid_argument, "need k >= 2");
    if (a < 0.0 || b < 0.0) throw Error(Errc::invalid_argument, "a and b must be >= 0");
    Eigen::MatrixXd Q = Eigen::MatrixXd::Constant(k, k, b);
    Q.diagonal().setConstant(a);
    return SbmParams(std::vector<double>(k, 1.0 / k), Q);
  }
};

struct SbmSample {
  Labeling labels;
  Graph graph;
};

namespace detail {

// Geometric skip length for success probability p in (0,1).
inline std::uint64_t geometric_skip(CounterRng& rng, double log1mp) {
  const double u = rng.uniform_pos();
  const double s = std::floor(std::log(u) / log1mp);
  return s >= 1.8e19 ? ~std::uint64_t{0} >> 1 : static_cast<std::uint64_t>(s);
}

}  // namespace detail

/// Draws (sigma, G) ~ SBM(n, p, Q/n). Labels come from stream (seed, 0);
/// block (i, j) edges from stream (seed, 1, i, j). Pairs inside a block are
/// visited by geometric skipping, so the cost is O(n + |E| + k^2).
inline SbmSample sample(const SbmParams& params, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw Error(Errc::invalid_argument, "n must be >= 1");
  const auto k = params.k();
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (params.Q()(i, j) / static_cast<double>(n) > 1.0)
        throw Error(Errc::parameter_out_of_range,
                    "Q(" + std::to_string(i) + "," + std::to_string(j) + ")/n exceeds 1");

  std::vector<double> cdf(k);
  double acc = 0.0;
  for (std::size_t i = 0; i < k; ++i) cdf[i] = (acc += params.p()[i]);
  cdf.back() = 1.0;

  CounterRng label_rng(derive_seed(seed, 0));
  std::vector<Community> sigma(n);
  std::vector<std::vector<Vertex>> members(k);
  for (std::size_t v = 0; v < n; ++v) {
    const double u = label_rng.uniform();
    const auto c = static_cast<Community>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    sigma[v] = std::min<Community>(c, static_cast<Community>(k - 1));
    members[sigma[v]].push_back(static_cast<Vertex>(v));
  }

  std::vector<std::pair<Vertex, Vertex>> edges;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      const double p = params.Q()(i, j) / static_cast<double>(n);
      if (p <= 0.0) continue;
      const auto& A = members[i];
      const auto& B = members[j];
      const std::uint64_t total = i == j ? static_cast<std::uint64_t>(A.size()) * (A.size() - (A.empty() ? 0 : 1)) / 2
                                         : static_cast<std::uint64_t>(A.size()) * B.size();
      if (total == 0) continue;
      CounterRng rng(derive_seed(seed, 1, i, j));
      const bool all = p >= 1.0;
      const double log1mp = all ? 0.0 : std::log1p(-p);
      // Linear pair index; for i == j the index runs over the strict lower
      // triangle row by row: (1,0), (2,0), (2,1), (3,0), ...
      std::uint64_t idx = all ? 0 : detail::geometric_skip(rng, log1mp);
      std::uint64_t row = 1, row_start = 0;
      while (idx < total) {
        if (i == j) {
          while (idx >= row_start + row) {
            row_start += row;
            ++row;
          }
          const Vertex u = A[row], v = A[idx - row_start];
          edges.emplace_back(std::min(u, v), std::max(u, v));
        } else {
          const Vertex u = A[idx / B.size()], v = B[idx % B.size()];
          edges.emplace_back(std::min(u, v), std::max(u, v));
        }
        const std::uint64_t step = all ? 1 : 1 + detail::geometric_skip(rng, log1mp);
        if (step > total - idx) break;
        idx += step;
      }
    }
  }
  return {Labeling(std::move(sigma), static_cast<std::uint32_t>(k)), Graph::from_edges(n, edges)};
}

inline SbmSample sample(const SymmetricSbm& m, std::uint64_t seed) { return sample(m.params(), m.n, seed); }

/// Eigen-structure of PQ.
struct Spectrum {
  std::vector<double> all_eigs;  // with multiplicity, nonincreasing magnitude
  std::vector<double> distinct;  // lambda_1..lambda_h, nonincreasing magnitude
  int s = 2;
  double snr = 0.0;
};

/// Eigenvalues of PQ via the symmetric similar matrix P^{1/2} Q P^{1/2}.
///
/// Values whose difference is within magnitude_tol * |lambda_1| are merged
/// into one distinct eigenvalue. Grouping is by value, so +x and -x stay
/// apart; s = 3 when h > 2 and |lambda_2|, |lambda_3| agree within the same
/// tolerance. The SNR uses the second eigenvalue counted with multiplicity,
/// which reproduces (a-b)^2 / (k(a+(k-1)b)) for every symmetric model.
inline Spectrum spectrum(const SbmParams& params, double magnitude_tol = 1e-9) {
  if (!(magnitude_tol > 0.0)) throw Error(Errc::invalid_argument, "magnitude_tol must be > 0");
  const auto k = static_cast<Eigen::Index>(params.k());
  Eigen::VectorXd sq(k);
  for (Eigen::Index i = 0; i < k; ++i) sq(i) = std::sqrt(params.p()[i]);
  const Eigen::MatrixXd S = sq.asDiagonal() * params.Q() * sq.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(S, Eigen::EigenvaluesOnly);
  std::vector<double> eigs(solver.eigenvalues().data(), solver.eigenvalues().data() + k);
  std::stable_sort(eigs.begin(), eigs.end(), [](double x, double y) {
    if (std::abs(x) != std::abs(y)) return std::abs(x) > std::abs(y);
    return x > y;
  });

  Spectrum out;
  out.all_eigs = eigs;
  const double lead = std::abs(eigs.front());
  if (lead == 0.0) throw Error(Errc::degenerate, "lambda_1 = 0");
  const double tol = magnitude_tol * lead;
  for (double e : eigs) {
    bool merged = false;
    for (double d : out.distinct)
      if (std::abs(d - e) <= tol) merged = true;
    if (!merged) out.distinct.push_back(e);
  }
  const auto& dl = out.distinct;
  out.s = (dl.size() > 2 && std::abs(std::abs(dl[1]) - std::abs(dl[2])) <= tol) ? 3 : 2;
  out.snr = eigs[1] * eigs[1] / eigs[0];
  return out;
}

/// (a-b)^2 / (k(a+(k-1)b)).
inline double snr_symmetric(std::uint32_t k, double a, double b) {
  const double denom = k * (a + (k - 1) * b);
  if (denom == 0.0) throw Error(Errc::division_by_zero, "a + (k-1)b = 0");
  return (a - b) * (a - b) / denom;
}

}  // namespace sbmlab
