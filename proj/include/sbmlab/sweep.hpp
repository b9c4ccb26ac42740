#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "sbmlab/abp.hpp"
#include "sbmlab/error.hpp"
#include "sbmlab/metrics.hpp"
#include "sbmlab/nonbacktracking.hpp"
#include "sbmlab/sbm.hpp"

namespace sbmlab {

enum class Algo { abp_star, abp_full, nb_power };

inline const char* to_string(Algo a) {
  switch (a) {
    case Algo::abp_star: return "abp-star";
    case Algo::abp_full: return "abp-full";
    case Algo::nb_power: return "nb-power";
  }
  return "?";
}

inline Algo parse_algo(const std::string& s) {
  if (s == "abp-star") return Algo::abp_star;
  if (s == "abp-full") return Algo::abp_full;
  if (s == "nb-power") return Algo::nb_power;
  throw Error(Errc::invalid_argument, "unknown algorithm '" + s + "'");
}

/// m' = ceil(m ln(l1^2/l2^2)/ln n) + 1, kept below m.
inline int default_m_prime(int m, std::size_t n, double l1, double l2) {
  const double ln_n = std::log(std::max<double>(static_cast<double>(n), 2.0));
  double mp = (l2 != 0.0) ? std::ceil(m * std::log(l1 * l1 / (l2 * l2)) / ln_n) + 1.0 : m - 1.0;
  if (!std::isfinite(mp)) mp = m - 1.0;
  return std::clamp(static_cast<int>(mp), 0, m - 1);
}

struct RunOutcome {
  int m = 0;
  Partition partition;
};

/// Runs one detector on a symmetric SBM sample using the true parameters
/// for horizon and eigenvalues.
inline RunOutcome run_detector(Algo algo, const SymmetricSbm& model, const Graph& g, std::optional<int> m, int r,
                               double c, std::uint64_t seed) {
  const auto n = g.num_vertices();
  const auto spec = spectrum(model.params());
  AbpConfig cfg;
  cfg.m = m;
  cfg.snr = spec.snr;
  cfg.r = r;
  cfg.c = c;
  cfg.seed = seed;
  RunOutcome out;
  out.m = cfg.horizon(n);
  switch (algo) {
    case Algo::abp_star: out.partition = abp_star(g, cfg); break;
    case Algo::abp_full: {
      auto res = abp_full(g, cfg, spec.distinct);
      out.partition = std::move(res.partition);
      break;
    }
    case Algo::nb_power: {
      const double l1 = model.d(), l2 = model.lambda2();
      out.partition = power_iteration_detect(g, r, out.m, default_m_prime(out.m, n, l1, l2), l1, seed);
      break;
    }
  }
  return out;
}

struct SweepSpec {
  std::uint32_t k = 2;
  std::optional<double> fixed_d;  // b = (k d - a)/(k - 1)
  std::optional<double> fixed_b;
  double a_from = 3.0, a_to = 6.0, a_step = 0.5;
  std::size_t n = 10000;
  int seeds = 1;
  Algo algo = Algo::abp_star;
  std::optional<int> m;
  int r = 2;
  double c = 1.0;
  std::uint64_t base_seed = 0;
  int jobs = 1;
  bool timing = true;  // false writes runtime_ms = 0 for byte-identical output
  std::string output;

  std::vector<std::pair<double, double>> points() const {
    if (fixed_d.has_value() == fixed_b.has_value())
      throw Error(Errc::invalid_argument, "exactly one of fixed d or fixed b is required");
    if (!(a_step > 0.0)) throw Error(Errc::parameter_out_of_range, "step must be > 0");
    if (seeds < 1) throw Error(Errc::parameter_out_of_range, "seeds must be >= 1");
    if (k < 2) throw Error(Errc::parameter_out_of_range, "k must be >= 2");
    std::vector<std::pair<double, double>> pts;
    const auto count = static_cast<long>(std::floor((a_to - a_from) / a_step + 1e-9)) + 1;
    for (long i = 0; i < count; ++i) {
      const double a = a_from + a_step * i;
      const double b = fixed_d ? (k * *fixed_d - a) / (k - 1.0) : *fixed_b;
      if (a < 0.0 || b < 0.0) throw Error(Errc::parameter_out_of_range, "sweep point has negative a or b");
      pts.emplace_back(a, b);
    }
    if (pts.empty()) throw Error(Errc::invalid_argument, "empty parameter range");
    return pts;
  }
};

struct SweepRow {
  double a = 0, b = 0, snr = 0;
  int m = 0;
  std::uint64_t seed = 0;
  double agreement = 0, margin = 0, runtime_ms = 0;
};

inline int jobs_from_env(int fallback = 1) {
  if (const char* s = std::getenv("SBMLAB_JOBS")) {
    const int j = std::atoi(s);
    if (j > 0) return j;
  }
  return fallback;
}

inline std::string csv_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

inline constexpr const char* kSweepSchema = "# sbmlab-sweep v1: n,k,a,b,snr,algo,m,r,seed,agreement,detection_margin,runtime_ms";

/// Runs every (point, replicate), then writes rows in canonical order with a
/// summary row (seed = "mean") after each point.
inline std::string run_sweep_csv(const SweepSpec& spec) {
  const auto pts = spec.points();
  const std::size_t reps = static_cast<std::size_t>(spec.seeds);
  const std::size_t total = pts.size() * reps;
  std::vector<SweepRow> rows(total);
  std::vector<std::string> errors(total);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < total;) {
      const auto pi = i / reps, rep = i % reps;
      auto& row = rows[i];
      row.a = pts[pi].first;
      row.b = pts[pi].second;
      row.seed = derive_seed(spec.base_seed, pi, rep);
      try {
        const SymmetricSbm model{spec.n, spec.k, row.a, row.b};
        row.snr = snr_symmetric(spec.k, row.a, row.b);
        const auto t0 = std::chrono::steady_clock::now();
        const auto sample_ = sample(model, row.seed);
        const auto out = run_detector(spec.algo, model, sample_.graph, spec.m, spec.r, spec.c, row.seed);
        const auto t1 = std::chrono::steady_clock::now();
        row.m = out.m;
        row.agreement = agreement(sample_.labels, out.partition.as_labeling(spec.k));
        row.margin = detection_margin(sample_.labels, out.partition);
        row.runtime_ms = spec.timing ? std::chrono::duration<double, std::milli>(t1 - t0).count() : 0.0;
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const int jobs = std::max(1, spec.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  for (const auto& e : errors)
    if (!e.empty()) throw Error(Errc::invalid_argument, "sweep replicate failed: " + e);

  std::string out = std::string(kSweepSchema) + "\n";
  const auto prefix = [&](const SweepRow& r) {
    return std::to_string(spec.n) + "," + std::to_string(spec.k) + "," + csv_number(r.a) + "," + csv_number(r.b) +
           "," + csv_number(r.snr) + "," + to_string(spec.algo) + "," + std::to_string(r.m) + "," +
           std::to_string(spec.r) + ",";
  };
  for (std::size_t pi = 0; pi < pts.size(); ++pi) {
    double ag = 0, mg = 0, rt = 0;
    for (std::size_t rep = 0; rep < reps; ++rep) {
      const auto& r = rows[pi * reps + rep];
      out += prefix(r) + std::to_string(r.seed) + "," + csv_number(r.agreement) + "," + csv_number(r.margin) + "," +
             csv_number(r.runtime_ms) + "\n";
      ag += r.agreement;
      mg += r.margin;
      rt += r.runtime_ms;
    }
    const auto& r0 = rows[pi * reps];
    out += prefix(r0) + "mean," + csv_number(ag / reps) + "," + csv_number(mg / reps) + "," + csv_number(rt / reps) +
           "\n";
  }
  return out;
}

inline void run_sweep(const SweepSpec& spec) {
  const auto csv = run_sweep_csv(spec);
  std::ofstream f(spec.output, std::ios::binary);
  if (!f) throw Error(Errc::io_error, spec.output + ": cannot open for writing");
  f << csv;
  if (!f) throw Error(Errc::io_error, spec.output + ": write failed");
}

}  // namespace sbmlab
