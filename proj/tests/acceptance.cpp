// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "weyl/cli.hpp"
#include "weyl/extremal.hpp"
#include "weyl/haar.hpp"
#include "weyl/lemmas.hpp"
#include "weyl/operators.hpp"
#include "weyl/parallel.hpp"
#include "weyl/report.hpp"
#include "weyl/rng.hpp"
#include "weyl/systems.hpp"

using namespace weyl;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<double> values_of(const SampledFunction& f) { return {f.values().begin(), f.values().end()}; }

// ---------------------------------------------------------------------------------------------

Outcome haar_exactness() {
  const auto s = build_haar(1024, make_grid(12));
  const double defect = orthonormality_defect(s);

  std::vector<std::vector<double>> h;
  for (std::size_t k = 1; k <= s.size(); ++k) h.push_back(values_of(s.phi(k)));
  double parseval = 0.0;
  for (std::size_t i = 0; i < 100; ++i) {
    const auto f = values_of(random_step_function(s.grid, 10, 2024, i));
    long double coeff_energy = 0;
    for (const auto& hk : h) {
      const double c = oracle::inner(f, hk);
      coeff_energy += static_cast<long double>(c) * c;
    }
    const double energy = oracle::inner(f, f);
    parseval = std::max(parseval, std::abs(energy - static_cast<double>(coeff_energy)) / std::max(1.0, energy));
  }
  return {defect <= 1e-12 && parseval <= 1e-10,
          "max |<h_j,h_k> - delta| = " + fmt("%.3g", defect) + ", Parseval error = " + fmt("%.3g", parseval)};
}

Outcome franklin_validity() {
  const auto f14 = build_franklin(256, make_grid(14));
  const auto f15 = build_franklin(256, make_grid(15));
  const double defect = orthonormality_defect(f14);
  ConditionOptions opt;
  opt.check_stability = false;
  const auto r14 = verify_wavelet_type(f14, 0.9, 1.0, opt);
  const auto r15 = verify_wavelet_type(f15, 0.9, 1.0, opt);
  const bool passes = r14.mean_zero_pass && r14.decay_pass && r14.holder_pass && r14.local_mass_pass;
  const double decay_drift = r15.decay_constant / r14.decay_constant;
  const double holder_drift = r15.holder_constant / r14.holder_constant;
  const bool stable = std::abs(decay_drift - 1.0) <= 0.1 && std::abs(holder_drift - 1.0) <= 0.1;

  const auto h14 = verify_wavelet_type(build_haar(256, make_grid(14)), 0.9, 1.0, opt);
  const auto h15 = verify_wavelet_type(build_haar(256, make_grid(15)), 0.9, 1.0, opt);
  const double haar_growth = h15.holder_constant / h14.holder_constant;

  return {defect <= 1e-8 && passes && stable && haar_growth >= 1.3,
          "defect = " + fmt("%.3g", defect) + ", conditions " + (passes ? "pass" : "fail") +
              ", decay J15/J14 = " + fmt("%.4f", decay_drift) + ", Hoelder J15/J14 = " + fmt("%.4f", holder_drift) +
              ", Haar Hoelder growth = " + fmt("%.3f", haar_growth)};
}

Outcome exact_inequality() {
  const auto trials = convolution_trials(1000, 42);
  const std::vector<double> a{1.0, 1.0}, b{1.0};
  const double equality = check_convolution_inequality(a, b).ratio_sup;
  return {trials.ratio_sup <= 1.0 + 1e-12 && std::abs(equality - 1.0) <= 1e-12,
          "max ratio over 1000 pairs = " + fmt("%.17g", trials.ratio_sup) + ", ratio at a=(1,1), b=(1) = " +
              fmt("%.17g", equality)};
}

// Sups of every lemma check on one system, labelled so two levels can be compared.
std::vector<std::pair<std::string, double>> lemma_suite(const OrthonormalSystem& s) {
  std::vector<std::pair<std::string, double>> out;
  const auto points = sample_points(64);
  for (int m = 1; m <= 7; ++m) out.emplace_back("y3 m=" + std::to_string(m), check_kernel_block(s, m, points).ratio_sup);

  ConstantEstimate dom;
  for (std::size_t i = 0; i < 4; ++i) {
    for (int m = 1; m <= 7; ++m) {
      const auto d = check_block_domination(s, random_coefficients(s.size(), 42, i), m);
      dom.merge(d.block_by_haar);
      dom.merge(d.haar_by_block);
    }
  }
  out.emplace_back("L2.1", dom.ratio_sup);

  ConstantEstimate decay;
  for (int m = 1; m <= 7; ++m) {
    const auto d = check_indicator_decay(s, 0.25, 0.5, m);
    decay.merge(d.everywhere);
    decay.merge(d.far_field);
  }
  out.emplace_back("L3.1", decay.ratio_sup);

  const auto a = random_coefficients(s.size(), 42, 0);
  InteractionCache cache{&s, &a, 1.5, {}, {}, {}};
  for (int n = 1; n <= 7; ++n) {
    for (int m = 1; m <= 7; ++m) {
      out.emplace_back("L3.2/3.3 n=" + std::to_string(n) + " m=" + std::to_string(m),
                       check_haar_phi_interaction(cache, n, m).ratio_sup);
    }
  }

  std::vector<std::size_t> all(s.size());
  std::iota(all.begin(), all.end(), std::size_t{1});
  ConstantEstimate lp;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto d = check_littlewood_paley(s, project(random_coefficients(s.size(), 42, i), s, all), 2.0, 64, 42 + i);
    lp.merge(d.block_square);
  }
  out.emplace_back("LP", lp.ratio_sup);

  std::vector<SampledFunction> family;
  for (std::size_t i = 0; i < 8; ++i) family.push_back(random_step_function(s.grid, 4, 42, i));
  out.emplace_back("FS", check_fefferman_stein(family, 3.0, 1.5).ratio_sup);

  auto rng = stream_rng(42, 0);
  std::vector<double> lambda(s.size());
  for (double& l : lambda) l = random_sign(rng);
  const auto cz = check_cz_kernel(s, lambda, 0.5, sample_points(32));
  out.emplace_back("CZ size", cz.size.ratio_sup);
  out.emplace_back("CZ smoothness", cz.smoothness.ratio_sup);
  return out;
}

Outcome lemma_stability() {
  const auto coarse = lemma_suite(build_franklin(128, make_grid(11)));
  const auto fine = lemma_suite(build_franklin(128, make_grid(12)));
  bool ok = true;
  double worst = 1.0;
  std::string worst_name;
  for (std::size_t i = 0; i < fine.size(); ++i) {
    const double r = stability_ratio(fine[i].second, coarse[i].second);
    const bool finite = std::isfinite(fine[i].second) && std::isfinite(coarse[i].second);
    if (!finite || std::abs(r - 1.0) > 0.25) ok = false;
    if (!std::isfinite(r) || std::abs(r - 1.0) > std::abs(worst - 1.0)) {
      worst = r;
      worst_name = fine[i].first;
    }
  }
  return {ok, std::to_string(fine.size()) + " sups, worst J12/J11 ratio " + fmt("%.4f", worst) + " (" + worst_name + ")"};
}

Outcome cww_good_lambda() {
  const auto grid = make_grid(12);
  const std::vector<double> eps{0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5};
  std::vector<CwwRow> rows;
  bool inclusions = true;
  for (std::size_t i = 0; i < 100; ++i) {
    // Haar polynomial of levels <= 10: coefficients on k <= 2^11.
    auto a = random_coefficients(2048, 7, i);
    a.resize(grid.cell_count(), 0.0);
    const auto f = haar_synthesis(grid, a);
    const auto r = check_cww(f, eps, cww_quantile_lambdas(f, 20));
    inclusions &= cww_inclusions_hold(r);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  const CwwFit fit = fit_cww(rows);
  return {fit.slope < 0.0 && fit.c > 0.0 && fit.r_squared >= 0.5 && inclusions,
          "c = " + fmt("%.4f", fit.c) + ", R^2 = " + fmt("%.4f", fit.r_squared) + ", points = " +
              std::to_string(fit.points) + ", inclusions " + (inclusions ? "hold" : "FAIL")};
}

// Random chain of length n: G_1 a random half of the indices, then 1-4 random toggles per step.
IndexChain random_chain(std::size_t n, std::size_t N, std::uint64_t seed, std::uint64_t index) {
  auto rng = stream_rng(seed, index);
  std::vector<bool> in(N + 1, false);
  std::vector<std::vector<std::size_t>> sets;
  for (std::size_t k = 1; k <= N; ++k) in[k] = (rng() >> 63) != 0;
  for (std::size_t m = 0; m < n; ++m) {
    if (m > 0) {
      const std::size_t toggles = 1 + uniform_index(rng, 4);
      for (std::size_t t = 0; t < toggles; ++t) {
        const std::size_t k = 1 + uniform_index(rng, N);
        in[k] = !in[k];
      }
    }
    std::vector<std::size_t> g;
    for (std::size_t k = 1; k <= N; ++k) {
      if (in[k]) g.push_back(k);
    }
    if (g.empty()) g.push_back(1 + uniform_index(rng, N));
    sets.push_back(std::move(g));
  }
  return make_chain(ChainKind::Arbitrary, std::move(sets), N);
}

Outcome flat_ratio(const std::vector<double>& witness_values) {
  const std::vector<double> ps{1.5, 2.0, 3.0};
  const std::vector<std::size_t> ns{4, 64, 1024};
  bool ok = true;
  std::string detail;
  for (const char* name : {"haar", "franklin"}) {
    const auto s = std::string(name) == "haar" ? build_haar(256, make_grid(12)) : build_franklin(256, make_grid(12));
    // sup[p][n]
    std::vector<std::vector<double>> sup(ps.size(), std::vector<double>(ns.size(), 0.0));
    for (std::size_t ni = 0; ni < ns.size(); ++ni) {
      const double norm = std::sqrt(std::log(ns[ni] + 1.0));
      const auto per_pair = parallel_map<std::vector<double>>(50, [&](std::size_t i) {
        const auto a = random_coefficients(s.size(), 1000 + ns[ni], i);
        std::vector<std::size_t> all(s.size());
        std::iota(all.begin(), all.end(), std::size_t{1});
        const auto f = project(a, s, all);
        const auto mx = chain_maximal(a, s, random_chain(ns[ni], s.size(), 77 + ns[ni], i));
        std::vector<double> r;
        for (double p : ps) r.push_back(lp_norm(mx, p) / (norm * lp_norm(f, p)));
        return r;
      });
      for (const auto& r : per_pair) {
        for (std::size_t pi = 0; pi < ps.size(); ++pi) sup[pi][ni] = std::max(sup[pi][ni], r[pi]);
      }
    }
    for (std::size_t pi = 0; pi < ps.size(); ++pi) {
      const double growth = sup[pi].back() / sup[pi].front();
      ok &= growth <= 2.0;
      detail += std::string(name) + " p=" + fmt("%g", ps[pi]) + ": " + fmt("%.3f", growth) + "; ";
    }
  }
  const double raw_growth = witness_values.size() >= 2 ? witness_values.back() / witness_values.front() : 0.0;
  ok &= raw_growth >= 1.5;
  detail += "unnormalized witness growth n=1024 vs n=4: " + fmt("%.3f", raw_growth);
  return {ok, "sup ratio n=1024 / n=4 -- " + detail};
}

Outcome oracle_equivalence() {
  const auto s = build_haar(16, make_grid(6));
  SearchConfig cfg;
  cfg.n = 4;
  cfg.p = 2.0;
  cfg.variant = Variant::Sng;
  cfg.active = {2, 3, 4, 5};
  cfg.generators = {GeneratorKind::EnumerateSigns};
  cfg.restarts = 16;
  const auto rec = estimate_A(s, cfg);

  // Brute force: 2^4 sign patterns (level-scaled magnitudes) x 4! orderings.
  const std::size_t cells = s.grid.cell_count();
  double best = 0.0;
  std::size_t best_pattern = 0;
  std::vector<std::size_t> best_order;
  for (std::size_t pattern = 0; pattern < 16; ++pattern) {
    std::vector<std::vector<double>> terms;
    std::vector<double> g(cells, 0.0);
    for (std::size_t j = 0; j < 4; ++j) {
      const std::size_t k = cfg.active[j];
      const int level = k < 3 ? 0 : (k < 5 ? 1 : 2);
      const double c = ((pattern >> j) & 1 ? -1.0 : 1.0) * std::pow(2.0, -0.5 * level);
      std::vector<double> t(cells);
      for (std::size_t i = 0; i < cells; ++i) t[i] = c * oracle::haar(k, (i + 0.5) / cells);
      for (std::size_t i = 0; i < cells; ++i) g[i] += t[i];
      terms.push_back(std::move(t));
    }
    std::vector<std::size_t> order{0, 1, 2, 3};
    do {
      const double v = oracle::ordering_ratio(terms, order, g, 2.0);
      if (v > best) {
        best = v;
        best_pattern = pattern;
        best_order = order;
      }
    } while (std::next_permutation(order.begin(), order.end()));
  }
  SearchWitness w;
  w.generator = make_generator(s, cfg, best_pattern);
  for (std::size_t k = 1; k <= 4; ++k) {
    std::string row(4, '0');
    for (std::size_t i = 0; i < k; ++i) row[best_order[i]] = '+';
    w.rows.push_back(row);
  }
  const double replay = evaluate_witness(s, w, 2.0);
  const bool ok = replay == rec.best_value && std::abs(best - rec.best_value) <= 1e-12 * best;
  return {ok, "search = " + fmt("%.17g", rec.best_value) + ", brute force = " + fmt("%.17g", best) +
                  ", brute-force optimum re-evaluated = " + fmt("%.17g", replay)};
}

Outcome growth_exponent(std::vector<double>& values) {
  const auto s = build_haar(2048, make_grid(12));
  std::vector<EstimateRecord> records;
  std::string detail;
  for (std::size_t n : {4u, 16u, 64u, 256u, 1024u}) {
    SearchConfig cfg;
    cfg.n = n;
    cfg.restarts = 32;
    records.push_back(estimate_A(s, cfg));
    values.push_back(records.back().best_value);
    detail += "A(" + std::to_string(n) + ")=" + fmt("%.4f", records.back().best_value) + " ";
  }
  const auto fit = fit_growth(records);
  return {fit.slope >= 0.35 && fit.slope <= 0.65, "slope = " + fmt("%.4f", fit.slope) + ", " + detail};
}

Outcome operator_identities() {
  const auto grid = make_grid(10);
  double partial_err = 0.0;
  bool maximal_ok = true;
  for (std::size_t i = 0; i < 100; ++i) {
    auto rng = stream_rng(99, i);
    std::vector<double> v(grid.cell_count());
    for (double& x : v) x = standard_normal(rng);
    const SampledFunction f(grid, v);
    if (i < 10) {
      for (int n = 0; n <= grid.level(); ++n) {
        const auto a = haar_partial(f, n), b = haar_partial_coefficients(f, n);
        for (std::size_t c = 0; c < v.size(); ++c) partial_err = std::max(partial_err, std::abs(a[c] - b[c]));
      }
    }
    const auto md = dyadic_maximal(f);
    const auto m1 = hl_maximal(f, 1.0, MaximalMode::Exact);
    const auto mq = hl_maximal(f, 1.5, MaximalMode::Exact);
    for (std::size_t c = 0; c < v.size(); ++c) {
      const double tol = 1e-12 * std::max(1.0, m1[c]);
      maximal_ok &= md[c] <= m1[c] + tol && std::abs(v[c]) <= mq[c] + 1e-12 * std::max(1.0, mq[c]);
    }
  }

  // Sign invariance of the Haar square function: every sign vector on 10 nonzero coefficients.
  const auto s = build_haar(256, make_grid(8));
  double sign_err = 0.0;
  for (std::size_t trial = 0; trial < 5; ++trial) {
    auto rng = stream_rng(5, trial);
    CoefficientVector a(s.size(), 0.0);
    std::vector<std::size_t> support;
    while (support.size() < 10) {
      const std::size_t k = uniform_index(rng, s.size());
      if (a[k] == 0.0) {
        a[k] = standard_normal(rng);
        support.push_back(k);
      }
    }
    std::vector<std::size_t> all(s.size());
    std::iota(all.begin(), all.end(), std::size_t{1});
    const auto base = haar_square(project(a, s, all));
    for (std::size_t pattern = 0; pattern < (1u << support.size()); ++pattern) {
      std::vector<double> lambda(s.size(), 1.0);
      for (std::size_t j = 0; j < support.size(); ++j) lambda[support[j]] = (pattern >> j) & 1 ? -1.0 : 1.0;
      const auto sq = haar_square(modulate(a, lambda, s));
      for (std::size_t c = 0; c < sq.size(); ++c) sign_err = std::max(sign_err, std::abs(sq[c] - base[c]));
    }
    const auto sup = modulated_square_sup(a, s);
    for (std::size_t c = 0; c < sup.value.size(); ++c) {
      sign_err = std::max(sign_err, std::abs(sup.value[c] - base[c]));
    }
  }
  return {partial_err <= 1e-12 && maximal_ok && sign_err <= 1e-12,
          "H_n forms differ by " + fmt("%.3g", partial_err) + ", M^d <= M_1 and |f| <= M_q " +
              (maximal_ok ? "hold" : "FAIL") + ", max |S(T f) - S f| = " + fmt("%.3g", sign_err)};
}

Outcome cli_determinism() {
  const fs::path dir = fs::temp_directory_path() / "weyl_acceptance_cli";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string sys = (dir / "franklin.wts").string();
  const std::string haar = (dir / "haar.wts").string();
  const std::string chain = (dir / "chain.json").string();
  report::write_file(chain, "[[2, 3], [2, 3, 5], [3, 5], [3, 5, 7, 8], [1, 3, 5, 7, 8]]\n");

  // Each entry: subcommand arguments; `{out}` is replaced by a per-run output path.
  const std::vector<std::vector<std::string>> commands{
      {"build", "--system", "franklin", "--n", "32", "--levels", "10", "--out", "{out}"},
      {"verify", "--in", sys, "--report", "{out}"},
      {"op", "--in", sys, "--f", "random:3", "--op", "majorant", "--out", "{out}"},
      {"op", "--in", sys, "--f", "random:3", "--op", "chain", "--g", "@" + chain, "--out", "{out}"},
      {"check", "--lemma", "L32", "--system", sys, "--report", "{out}"},
      {"check", "--lemma", "CWW", "--system", haar, "--report", "{out}"},
      {"check", "--lemma", "conv", "--report", "{out}"},
      {"estimate", "--system", haar, "--n", "4,8,16,32", "--variant", "full", "--restarts", "4", "--report", "{out}"},
      {"fit", "--in", (dir / "fit_input.csv").string(), "--report", "{out}"},
      {"pipeline", "--system", sys, "--g", "@" + chain, "--report", "{out}"},
  };

  std::ostringstream sink;
  if (cli::run({"build", "--system", "franklin", "--n", "32", "--levels", "10", "--out", sys}, sink, sink) != 0 ||
      cli::run({"build", "--system", "haar", "--n", "64", "--levels", "10", "--out", haar}, sink, sink) != 0 ||
      cli::run({"--seed", "5", "estimate", "--system", haar, "--n", "4,8,16,32", "--restarts", "4", "--report",
                (dir / "fit_input.csv").string()},
               sink, sink) != 0) {
    return {false, "setup failed: " + sink.str()};
  }

  bool ok = true;
  std::string detail;
  for (std::size_t c = 0; c < commands.size(); ++c) {
    std::vector<std::string> outputs;
    for (const char* threads : {"1", "8", "1"}) {
      // Same file name per run (reports may reference their own path), separate directories.
      const fs::path run_dir = dir / ("run" + std::to_string(outputs.size()));
      fs::create_directories(run_dir);
      const fs::path out = run_dir / ("cmd" + std::to_string(c) + ".out");
      std::vector<std::string> args{"--threads", threads, "--seed", "9"};
      for (const auto& a : commands[c]) args.push_back(a == "{out}" ? out.string() : a);
      std::ostringstream o, e;
      const int code = cli::run(args, o, e);
      std::string text = o.str() + "|" + std::to_string(code) + "|";
      if (fs::exists(out)) text += report::read_file(out);
      const fs::path side = out.string() + ".witness.json";
      if (fs::exists(side)) text += report::read_file(side);
      if (code != 0) {
        ok = false;
        detail += commands[c][0] + " exited " + std::to_string(code) + " " + e.str();
      }
      outputs.push_back(std::move(text));
    }
    if (outputs[0] != outputs[1] || outputs[0] != outputs[2]) {
      ok = false;
      detail += commands[c][0] + " differs; ";
    }
  }
  return {ok, std::to_string(commands.size()) + " invocations x 3 runs (threads 1, 8, 1) " +
                  (ok ? "byte-identical" : "NOT identical: " + detail)};
}

}  // namespace

int main() {
  int failures = 0;
  auto report_line = [&](int id, const char* name, const std::function<Outcome()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("%s %d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
    std::fflush(stdout);
  };

  std::vector<double> witness_values;
  report_line(1, "haar-exactness", haar_exactness);
  report_line(2, "franklin-validity", franklin_validity);
  report_line(3, "convolution-inequality", exact_inequality);
  report_line(4, "lemma-stability", lemma_stability);
  report_line(5, "cww-good-lambda", cww_good_lambda);
  report_line(7, "extremal-oracle", oracle_equivalence);
  report_line(8, "growth-exponent", [&] { return growth_exponent(witness_values); });
  report_line(6, "flat-ratio", [&] { return flat_ratio(witness_values); });
  report_line(9, "operator-identities", operator_identities);
  report_line(10, "cli-determinism", cli_determinism);
  return failures == 0 ? 0 : 1;
}
