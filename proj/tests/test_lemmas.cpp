#include <doctest.h>

#include <cmath>
#include <limits>

#include "weyl/haar.hpp"
#include "weyl/lemmas.hpp"

using namespace weyl;

Witness named(const char* input) {
  Witness w;
  w.input = input;
  return w;
}

TEST_CASE("constant estimates follow the 0/0 and witness rules") {
  ConstantEstimate e;
  CHECK(e.offer(0.0, 0.0, named("zero")) == 0.0);
  CHECK(e.ratio_sup == 0.0);
  CHECK(e.witness.input.empty());
  e.offer(1.0, 2.0, named("half"));
  e.offer(1.0, 4.0, named("quarter"));
  CHECK(e.ratio_sup == 0.5);
  CHECK(e.witness.input == "half");
  ConstantEstimate other;
  other.offer(3.0, 2.0, named("big"));
  other.samples = 5;
  e.samples = 2;
  e.merge(other);
  CHECK(e.ratio_sup == 1.5);
  CHECK(e.witness.input == "big");
  CHECK(e.samples == 7);
  e.offer(1.0, 0.0, named("inf"));
  CHECK(e.ratio_sup == std::numeric_limits<double>::infinity());
  CHECK(stability_ratio(0.0, 0.0) == 1.0);
  CHECK(stability_ratio(2.0, 1.0) == 2.0);
}

TEST_CASE("convolution inequality") {
  const double a[] = {1.0, 1.0}, b[] = {1.0};
  CHECK(check_convolution_inequality(a, b).ratio_sup == doctest::Approx(1.0).epsilon(1e-15));
  const double z[] = {0.0};
  CHECK(check_convolution_inequality(a, z).ratio_sup == 0.0);
  const auto trials = convolution_trials(1000, 42);
  CHECK(trials.ratio_sup <= 1.0 + 1e-12);
  CHECK(trials.samples == 1000);
}

TEST_CASE("lemma checks vanish on trivial inputs") {
  const auto s = build_franklin(32, make_grid(10));
  const auto dom = check_block_domination(s, CoefficientVector(32, 0.0), 3);
  CHECK(dom.block_by_haar.ratio_sup == 0.0);
  CHECK(dom.haar_by_block.ratio_sup == 0.0);
  const auto whole = check_indicator_decay(s, 0.0, 1.0, 3);
  CHECK(whole.everywhere.ratio_sup <= 1e-9);
  const auto lp = check_littlewood_paley(s, SampledFunction(s.grid), 2.0);
  CHECK(lp.block_square.ratio_sup == 0.0);
  const auto single = check_littlewood_paley(s, s.phi(7), 2.0);
  CHECK(single.block_square.ratio_sup == doctest::Approx(1.0).epsilon(1e-12));
  const auto cz = check_cz_kernel(s, std::vector<double>(32, 0.0), 0.5, sample_points(16));
  CHECK(cz.size.ratio_sup == 0.0);
  CHECK(cz.smoothness.ratio_sup == 0.0);
  CoefficientVector a(32, 0.0);
  a[2] = 1.0;  // block 2 only; block 4 is empty
  CHECK(check_haar_phi_interaction(s, a, 3, 4, 1.5).ratio_sup == 0.0);
}

TEST_CASE("kernel block bound at the centres") {
  const auto s = build_franklin(64, make_grid(12));
  const auto e = check_kernel_block(s, 4, sample_points(64));
  CHECK(std::isfinite(e.ratio_sup));
  CHECK(e.ratio_sup > 0.0);
  CHECK(e.samples == 64 * 64);
}

TEST_CASE("Fefferman-Stein on constants") {
  const auto g = make_grid(8);
  const std::vector<SampledFunction> family{SampledFunction(g, 2.0)};
  CHECK(check_fefferman_stein(family, 2.0, 1.0).ratio_sup == doctest::Approx(1.0).epsilon(1e-14));
  const std::vector<SampledFunction> zeros{SampledFunction(g)};
  CHECK(check_fefferman_stein(zeros, 2.0, 1.0).ratio_sup == 0.0);
  CHECK_THROWS_AS(check_fefferman_stein(family, 2.0, 2.0), Error);
}

TEST_CASE("CWW rows and inclusions") {
  const auto g = make_grid(10);
  const auto h2 = haar_function(2, g);
  const double eps[] = {0.4};
  const double lam[] = {2.0};
  const auto rows = check_cww(h2, eps, lam);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].lhs == 0.0);
  CHECK(rows[0].rhs == 0.0);

  const auto f = random_step_function(g, 8, 4, 0);
  const double grid_eps[] = {0.1, 0.2, 0.3, 0.5, 0.99};
  const auto lambdas = cww_quantile_lambdas(f, 10);
  const auto table = check_cww(f, grid_eps, lambdas);
  CHECK(cww_inclusions_hold(table));
  for (const auto& r : table) CHECK(r.ratio <= 1.0);
}

TEST_CASE("CWW fit recovers a synthetic exponential law") {
  std::vector<CwwRow> rows;
  for (double e : {0.1, 0.2, 0.3, 0.4, 0.5}) {
    CwwRow r;
    r.eps = e;
    r.rhs_cells = 1000000;
    r.lhs_cells = static_cast<std::size_t>(std::llround(1000000 * std::exp(-0.05 / (e * e))));
    rows.push_back(r);
  }
  const auto fit = fit_cww(rows);
  CHECK(fit.c == doctest::Approx(0.05).epsilon(1e-3));
  CHECK(fit.r_squared > 0.999);
}
