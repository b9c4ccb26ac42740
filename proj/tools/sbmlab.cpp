#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sbmlab/sbmlab.hpp"

using namespace sbmlab;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw UsageError("--eigs: cannot parse '" + tok + "'");
    }
  }
  return out;
}

void print_metrics(std::ostream& os, const Labeling& truth, const Partition& part) {
  os << "agreement=" << num(agreement(truth, part.as_labeling(truth.k))) << '\n';
  os << "detection_margin=" << num(detection_margin(truth, part)) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Community detection in sparse stochastic block models"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Sample a symmetric SBM graph");
  std::size_t g_n = 0;
  std::uint32_t g_k = 2;
  double g_a = 0, g_b = 0;
  std::uint64_t g_seed = 0;
  std::string g_out, g_labels;
  gen->add_option("--n", g_n, "vertices")->required();
  gen->add_option("--k", g_k, "communities")->default_val(2);
  gen->add_option("--a", g_a, "within-community degree parameter")->required();
  gen->add_option("--b", g_b, "between-community degree parameter")->required();
  gen->add_option("--seed", g_seed)->default_val(0);
  gen->add_option("--out", g_out, "edge list output")->required();
  gen->add_option("--labels", g_labels, "label output");

  // detect
  auto* det = app.add_subcommand("detect", "Run a detector on a graph");
  std::string d_graph, d_algo = "abp-star", d_labels, d_eigs, d_out;
  std::optional<int> d_m, d_mprime;
  int d_r = 2;
  double d_c = 1.0;
  std::uint64_t d_seed = 0;
  det->add_option("--graph", d_graph, "edge list")->required();
  det->add_option("--algo", d_algo)->check(CLI::IsMember({"abp-star", "abp-full", "nb-power"}))->default_val("abp-star");
  det->add_option("--m", d_m, "iterations");
  det->add_option("--mprime", d_mprime, "nb-power: steps with the leading eigenvalue removed");
  det->add_option("--r", d_r)->default_val(2);
  det->add_option("--c", d_c)->default_val(1.0);
  det->add_option("--seed", d_seed)->default_val(0);
  det->add_option("--eigs", d_eigs, "distinct eigenvalues of PQ, comma separated, by nonincreasing magnitude");
  det->add_option("--labels", d_labels, "true labels for scoring");
  det->add_option("--out", d_out, "partition output (default stdout)");

  // nb-count
  auto* nbc = app.add_subcommand("nb-count", "Count r-nonbacktracking walks between two vertices");
  std::string c_graph;
  int c_r = 2, c_m = 0;
  Vertex c_from = 0, c_to = 0;
  nbc->add_option("--graph", c_graph)->required();
  nbc->add_option("--r", c_r)->default_val(2);
  nbc->add_option("--m", c_m)->required();
  nbc->add_option("--from", c_from)->required();
  nbc->add_option("--to", c_to)->required();

  // learn
  auto* lrn = app.add_subcommand("learn", "Estimate a, b, k from cycle statistics");
  std::string l_graph;
  LearnOptions l_opt;
  lrn->add_option("--graph", l_graph)->required();
  lrn->add_option("--mmax", l_opt.m_max)->default_val(8);
  lrn->add_option("--kmax", l_opt.k_max)->default_val(5);

  // stats
  auto* sts = app.add_subcommand("stats", "Tree and giant-component statistics");
  std::string s_graph;
  std::size_t s_jmax = 5;
  std::optional<double> s_a, s_b;
  std::uint32_t s_k = 2;
  sts->add_option("--graph", s_graph)->required();
  sts->add_option("--jmax", s_jmax)->default_val(5);
  sts->add_option("--a", s_a);
  sts->add_option("--b", s_b);
  sts->add_option("--k", s_k)->default_val(2);

  // thresholds
  auto* thr = app.add_subcommand("thresholds", "Closed-form detection thresholds");
  std::uint32_t t_k = 2;
  double t_a = 0, t_b = 0;
  thr->add_option("--k", t_k)->required();
  thr->add_option("--a", t_a)->required();
  thr->add_option("--b", t_b)->required();

  // sample-typical
  auto* smp = app.add_subcommand("sample-typical", "Uniform sample from the typical set (tiny graphs)");
  std::string y_graph, y_labels, y_balance = "delta";
  TypicalityParams y_p;
  std::uint64_t y_seed = 0;
  std::optional<std::uint32_t> y_k;
  smp->add_option("--graph", y_graph)->required();
  smp->add_option("--labels", y_labels, "true labels for scoring");
  smp->add_option("--delta", y_p.delta)->default_val(0.1);
  smp->add_option("--a", y_p.a)->required();
  smp->add_option("--b", y_p.b)->required();
  smp->add_option("--k", y_k);
  smp->add_option("--balance", y_balance)->check(CLI::IsMember({"delta", "log-sqrt-n"}))->default_val("delta");
  smp->add_flag("--quotient", y_p.quotient, "count one labeling per permutation class");
  smp->add_option("--seed", y_seed)->default_val(0);

  // sweep
  auto* swp = app.add_subcommand("sweep", "Phase-transition sweep over a, writing CSV");
  SweepSpec w;
  std::string w_algo = "abp-star";
  std::optional<double> w_d, w_b;
  std::optional<int> w_m;
  swp->add_option("--k", w.k)->default_val(2);
  swp->add_option("--d", w_d, "hold the average degree fixed");
  swp->add_option("--b", w_b, "hold b fixed");
  swp->add_option("--a-from", w.a_from)->required();
  swp->add_option("--a-to", w.a_to)->required();
  swp->add_option("--a-step", w.a_step)->default_val(0.5);
  swp->add_option("--n", w.n)->default_val(10000);
  swp->add_option("--seeds", w.seeds)->default_val(1);
  swp->add_option("--algo", w_algo)->check(CLI::IsMember({"abp-star", "abp-full", "nb-power"}))->default_val("abp-star");
  swp->add_option("--m", w_m);
  swp->add_option("--r", w.r)->default_val(2);
  swp->add_option("--c", w.c)->default_val(1.0);
  swp->add_option("--seed", w.base_seed)->default_val(0);
  swp->add_option("--jobs", w.jobs)->default_val(jobs_from_env(1));
  swp->add_flag("--timing,!--no-timing", w.timing, "--no-timing writes runtime_ms as 0");
  swp->add_option("--out", w.output)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (*gen) {
      const auto s = sample(SymmetricSbm{g_n, g_k, g_a, g_b}, g_seed);
      io::write_edges_file(g_out, s.graph);
      if (!g_labels.empty()) io::write_labels_file(g_labels, s.labels.sigma);
      std::cout << "n=" << g_n << " edges=" << s.graph.num_edges() << '\n';
    } else if (*det) {
      std::optional<Labeling> truth;
      if (!d_labels.empty()) truth = io::read_labels_file(d_labels);
      const Graph g = io::read_edges_file(d_graph, truth ? truth->size() : 0);
      if (truth && truth->size() != g.num_vertices()) throw Error(Errc::length_mismatch, "labels and graph sizes differ");
      const auto eigs = d_eigs.empty() ? std::vector<double>{} : parse_list(d_eigs);
      AbpConfig cfg;
      cfg.m = d_m;
      cfg.r = d_r;
      cfg.c = d_c;
      cfg.seed = d_seed;
      if (eigs.size() >= 2 && eigs[0] > 0.0) cfg.snr = eigs[1] * eigs[1] / eigs[0];
      Partition part;
      if (d_algo == "abp-star") {
        part = abp_star(g, cfg);
      } else if (d_algo == "abp-full") {
        if (eigs.size() < 2) throw UsageError("--algo abp-full needs --eigs with at least two values");
        auto res = abp_full(g, cfg, eigs);
        for (const auto& wmsg : res.warnings) std::cerr << "warning: " << wmsg << '\n';
        part = std::move(res.partition);
      } else {
        const auto n = g.num_vertices();
        const int m = cfg.horizon(n);
        const double l1 = eigs.empty() ? (n ? 2.0 * g.num_edges() / static_cast<double>(n) : 0.0) : eigs[0];
        const int mp = d_mprime ? *d_mprime : (eigs.size() >= 2 ? default_m_prime(m, n, eigs[0], eigs[1]) : m / 2);
        part = power_iteration_detect(g, d_r, m, mp, l1, d_seed);
      }
      if (d_out.empty()) {
        io::write_labels(std::cout, std::vector<Community>(part.side.begin(), part.side.end()));
        if (truth) print_metrics(std::cerr, *truth, part);
      } else {
        io::write_labels_file(d_out, std::vector<Community>(part.side.begin(), part.side.end()));
        if (truth) print_metrics(std::cout, *truth, part);
      }
    } else if (*nbc) {
      const Graph g = io::read_edges_file(c_graph);
      std::cout << nb_walk_count(g, c_r, c_m, c_from, c_to) << '\n';
    } else if (*lrn) {
      const Graph g = io::read_edges_file(l_graph);
      const auto res = estimate_params(g, l_opt);
      for (const auto& wmsg : res.warnings) std::cerr << "warning: " << wmsg << '\n';
      std::cout << "a_hat,b_hat,k_hat,d_hat,mu_hat,no_signal,residual_null";
      for (std::uint32_t k = 2; k <= l_opt.k_max; ++k) std::cout << ",residual_k" << k;
      std::cout << '\n'
                << num(res.a_hat) << ',' << num(res.b_hat) << ',' << res.k_hat << ',' << num(res.d_hat) << ','
                << num(res.mu_hat) << ',' << (res.no_signal ? 1 : 0) << ',' << num(res.residual_null);
      for (std::uint32_t k = 2; k <= l_opt.k_max; ++k) std::cout << ',' << num(res.residuals[k]);
      std::cout << '\n';
    } else if (*sts) {
      const Graph g = io::read_edges_file(s_graph);
      const auto st = component_stats(g, s_jmax);
      for (const auto& wmsg : st.warnings) std::cerr << "warning: " << wmsg << '\n';
      const double n = static_cast<double>(std::max<std::size_t>(st.n, 1));
      std::cout << "quantity,observed,predicted\n";
      std::optional<PredictedFractions> pf;
      double d = 0;
      if (s_a && s_b) {
        pf = predicted_fractions(*s_a, *s_b, s_k);
        d = (*s_a + (s_k - 1.0) * *s_b) / s_k;
      }
      auto row = [&](const std::string& name, double obs, std::optional<double> pred) {
        std::cout << name << ',' << num(obs) << ',' << (pred ? num(*pred) : "") << '\n';
      };
      row("tree_count_frac", st.T / n, pf ? std::optional(pf->tree_vertex_frac) : std::nullopt);
      row("tree_edge_frac", st.M / n, pf ? std::optional(pf->tree_edge_frac) : std::nullopt);
      row("giant_frac", st.giant_size / n, pf ? std::optional(pf->giant_frac) : std::nullopt);
      row("planted_edge_frac", st.F / n, pf ? std::optional(pf->planted_edge_frac) : std::nullopt);
      for (std::size_t j = 1; j <= s_jmax; ++j)
        row("T_" + std::to_string(j) + "_frac", st.T_j[j] / n,
            pf ? std::optional(tau_j(d, static_cast<int>(j)) / d) : std::nullopt);
    } else if (*thr) {
      const auto r = threshold_report(t_a, t_b, t_k);
      std::cout << "k,a,b,d,tau,snr,ks_holds,union_bound_holds,it_bound_holds,it_lhs,it_rhs,f_tau_d,psi,"
                   "giant_exponent,A0\n";
      std::cout << r.k << ',' << num(r.a) << ',' << num(r.b) << ',' << num(r.d) << ',' << num(r.tau) << ','
                << num(r.snr) << ',' << r.ks_holds << ',' << r.union_bound_holds << ',' << r.it_bound_holds << ','
                << num(r.it_lhs) << ',' << num(r.it_rhs) << ',' << num(r.f_tau_d) << ',' << num(r.psi) << ','
                << num(r.giant_exponent) << ',' << num(r.A0) << '\n';
    } else if (*smp) {
      std::optional<Labeling> truth;
      if (!y_labels.empty()) truth = io::read_labels_file(y_labels, y_k.value_or(0));
      const Graph g = io::read_edges_file(y_graph, truth ? truth->size() : 0);
      y_p.k = y_k ? *y_k : (truth ? truth->k : 2);
      y_p.balance = y_balance == "delta" ? BalanceTolerance::delta : BalanceTolerance::log_sqrt_n;
      std::cerr << "typical_set_size=" << count_typical(g, y_p) << '\n';
      const auto x = sample_typical(g, y_p, y_seed);
      io::write_labels(std::cout, x.sigma);
      if (truth) std::cerr << "agreement=" << num(agreement(*truth, x)) << '\n';
    } else if (*swp) {
      if (w_d.has_value() == w_b.has_value()) throw UsageError("sweep needs exactly one of --d or --b");
      w.fixed_d = w_d;
      w.fixed_b = w_b;
      w.m = w_m;
      w.algo = parse_algo(w_algo);
      run_sweep(w);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
