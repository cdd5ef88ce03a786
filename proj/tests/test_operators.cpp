#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "weyl/haar.hpp"
#include "weyl/lemmas.hpp"
#include "weyl/operators.hpp"

using namespace weyl;

namespace {

std::vector<double> vec(const SampledFunction& f) { return {f.values().begin(), f.values().end()}; }

std::vector<std::size_t> range(std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> v;
  for (std::size_t k = lo; k <= hi; ++k) v.push_back(k);
  return v;
}

}  // namespace

TEST_CASE("chains are validated and classified") {
  CHECK(classify_chain({{1}, {1, 2}, {1, 2, 3}}) == ChainKind::SingletonIncrement);
  CHECK(classify_chain({{1, 2}, {1, 2, 3, 4}}) == ChainKind::Monotone);
  CHECK(classify_chain({{2}, {1}}) == ChainKind::Arbitrary);
  CHECK_THROWS_AS(make_chain(ChainKind::Monotone, {{2}, {1}}, 4), Error);
  CHECK_THROWS_AS(make_chain(ChainKind::Arbitrary, {{5}}, 4), Error);
  const auto c = make_chain(ChainKind::Arbitrary, {{3, 1, 3}}, 4);
  CHECK(c.sets[0] == std::vector<std::size_t>{1, 3});
}

TEST_CASE("coefficients and projections in the Haar system") {
  const auto s = build_haar(16, make_grid(6));
  const auto a5 = coefficients(s.phi(5), s);
  for (std::size_t k = 1; k <= 16; ++k) CHECK(a5[k - 1] == doctest::Approx(k == 5 ? 1.0 : 0.0));
  const auto half = SampledFunction::indicator(s.grid, 0.0, 0.5);
  const auto a = coefficients(half, s);
  CHECK(a[0] == doctest::Approx(0.5));
  CHECK(a[1] == doctest::Approx(0.5));
  CHECK(std::abs(a[2]) < 1e-15);
  CHECK(std::abs(a[3]) < 1e-15);
  for (double v : coefficients(SampledFunction(s.grid), s)) CHECK(v == 0.0);

  const auto f = random_step_function(s.grid, 4, 1, 0);
  const std::vector<std::size_t> none;
  const auto r1 = project(f, s, none);
  for (double v : r1.values()) CHECK(v == 0.0);
  const auto g = std::vector<std::size_t>{2, 7, 9};
  const auto p1 = project(f, s, g), p2 = project(p1, s, g);
  for (std::size_t i = 0; i < p1.size(); ++i) CHECK(p2[i] == doctest::Approx(p1[i]).epsilon(1e-13));
  const auto full = project(f, s, range(1, 16));
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(full[i] == doctest::Approx(f[i]).epsilon(1e-13));
}

TEST_CASE("partial sums and blocks telescope") {
  const auto s = build_haar(32, make_grid(7));
  const auto a = random_coefficients(32, 5, 0);
  const auto p0 = phi_partial(a, s, 0);
  for (std::size_t i = 0; i < p0.size(); ++i) CHECK(p0[i] == a[0]);
  SampledFunction sum = p0;
  for (int m = 1; m <= 5; ++m) {
    const auto d = phi_block(a, s, m), diff = phi_partial(a, s, m) - phi_partial(a, s, m - 1);
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(d[i] == doctest::Approx(diff[i]).epsilon(1e-13));
    sum += d;
  }
  const auto p5 = phi_partial(a, s, 5);
  for (std::size_t i = 0; i < p5.size(); ++i) CHECK(sum[i] == doctest::Approx(p5[i]).epsilon(1e-13));
  CHECK(block_indices(0, 32) == std::vector<std::size_t>{1});
  CHECK(block_indices(3, 32) == std::vector<std::size_t>{5, 6, 7, 8});
  CHECK(block_indices(6, 40) == range(33, 40));
}

TEST_CASE("modulation") {
  const auto s = build_haar(32, make_grid(7));
  const auto a = random_coefficients(32, 2, 0);
  const auto ones = std::vector<double>(32, 1.0), zeros = std::vector<double>(32, 0.0);
  const auto full = project(a, s, range(1, 32));
  const auto t1 = modulate(a, ones, s);
  for (std::size_t i = 0; i < t1.size(); ++i) CHECK(t1[i] == doctest::Approx(full[i]).epsilon(1e-13));
  const auto r2 = modulate(a, zeros, s);
  for (double v : r2.values()) CHECK(v == 0.0);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> lam(32);
    for (double& l : lam) l = (rng() & 1) ? 1.0 : -1.0;
    CHECK(lp_norm(modulate(a, lam, s), 2.0) <= lp_norm(full, 2.0) * (1 + 1e-12));
  }
  CHECK_THROWS_AS(modulate(a, std::vector<double>(32, 2.0), s), Error);
}

TEST_CASE("chain maximal function") {
  const auto s = build_haar(16, make_grid(6));
  const auto f = s.phi(2) + s.phi(3);
  const auto a = coefficients(f, s);
  const auto chain = make_chain(ChainKind::SingletonIncrement, {{2}, {2, 3}}, 16);
  const auto m = chain_maximal(a, s, chain);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double expect = std::max(std::abs(s.phi(2)[i]), std::abs(s.phi(2)[i] + s.phi(3)[i]));
    CHECK(m[i] == doctest::Approx(expect).epsilon(1e-15));
    if (s.grid.midpoint(i) < 0.25) CHECK(m[i] == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-15));
  }
  const auto one = chain_maximal(a, s, make_chain(ChainKind::Arbitrary, {{3}}, 16));
  for (std::size_t i = 0; i < one.size(); ++i) CHECK(one[i] == std::abs(s.phi(3)[i]));

  // Arbitrary chains (removals included) agree with direct projections.
  const auto b = random_coefficients(16, 4, 0);
  const auto arb = make_chain(ChainKind::Arbitrary, {{2, 3, 4, 5, 6}, {2, 3, 4, 5}, {9}, {2, 9, 10, 11, 12, 13}}, 16);
  SampledFunction direct(s.grid);
  for (const auto& g : arb.sets) {
    const auto p = project(b, s, g);
    for (std::size_t i = 0; i < p.size(); ++i) direct[i] = std::max(direct[i], std::abs(p[i]));
  }
  const auto cm = chain_maximal(b, s, arb);
  for (std::size_t i = 0; i < cm.size(); ++i) CHECK(cm[i] == doctest::Approx(direct[i]).epsilon(1e-12));
  const auto longer = make_chain(ChainKind::Arbitrary, {{2, 3, 4, 5, 6}, {2, 3, 4, 5}, {9}, {2, 9, 10, 11, 12, 13}, {1}}, 16);
  const auto cm2 = chain_maximal(b, s, longer);
  for (std::size_t i = 0; i < cm.size(); ++i) CHECK(cm2[i] >= cm[i]);
}

TEST_CASE("Hardy-Littlewood maximal function against brute force") {
  const auto g = make_grid(6);
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto f = random_step_function(g, 6, seed, 7);
    for (double q : {1.0, 1.5, 2.0}) {
      const auto ref = oracle::maximal_q(vec(f), q);
      MaximalMode used{};
      const auto m = hl_maximal(f, q, MaximalMode::Auto, &used);
      CHECK(used == MaximalMode::Exact);
      for (std::size_t i = 0; i < f.size(); ++i) CHECK(m[i] == doctest::Approx(ref[i]).epsilon(1e-12));
      const auto win = hl_maximal(f, q, MaximalMode::DyadicWindows);
      for (std::size_t i = 0; i < f.size(); ++i) {
        CHECK(win[i] <= ref[i] * (1 + 1e-12));
        CHECK(ref[i] <= std::pow(2.0, 1.0 / q) * win[i] * (1 + 1e-12));
      }
    }
  }
  const auto c = hl_maximal(SampledFunction(g, -2.5), 1.5);
  for (double v : c.values()) CHECK(v == doctest::Approx(2.5).epsilon(1e-13));

  const auto ind = SampledFunction::indicator(g, 0.0, 0.25);
  const auto m = hl_maximal(ind, 1.0);
  // x = 1/2 sits on a cell boundary: the cell to its left attains exactly 1/2.
  CHECK(m[g.cell_of(0.5) - 1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(m[g.cell_of(0.5)] == doctest::Approx(0.25 / (0.5 + g.cell_width())).epsilon(1e-14));
  CHECK_THROWS_AS(hl_maximal(ind, 0.5), Error);
  CHECK_THROWS_AS(hl_maximal(SampledFunction(make_grid(14)), 1.0, MaximalMode::Exact), Error);
}

TEST_CASE("dyadic maximal function") {
  const auto g = make_grid(8);
  const auto ind = SampledFunction::indicator(g, 0.0, 0.25);
  const auto m = dyadic_maximal(ind);
  for (std::size_t i = 0; i < g.cell_count(); ++i) {
    const double x = g.midpoint(i);
    CHECK(m[i] == (x < 0.25 ? 1.0 : (x < 0.5 ? 0.5 : 0.0)));
  }
  const auto r3 = dyadic_maximal(SampledFunction(g, -4.0));
  for (double v : r3.values()) CHECK(v == 4.0);
  const auto f = random_step_function(g, 8, 11, 0);
  const auto ref = oracle::maximal_dyadic(vec(f));
  const auto md = dyadic_maximal(f);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(md[i] == doctest::Approx(ref[i]).epsilon(1e-13));
}

TEST_CASE("modulated square supremum") {
  const auto s = build_haar(16, make_grid(6));
  CoefficientVector a(16, 0.0);
  a[4] = 0.7;
  const auto sup = modulated_square_sup(a, s);
  CHECK(sup.exact);
  for (std::size_t i = 0; i < sup.value.size(); ++i) CHECK(sup.value[i] == doctest::Approx(0.7 * std::abs(s.phi(5)[i])));

  // Two active coefficients in a non-Haar system: enumerate the four sign patterns.
  const auto fr = build_franklin(8, make_grid(8));
  CoefficientVector b(8, 0.0);
  b[2] = 1.0;
  b[5] = -0.4;
  const auto res = modulated_square_sup(b, fr);
  CHECK(res.exact);
  SampledFunction ref(fr.grid);
  for (int s1 : {-1, 1}) {
    for (int s2 : {-1, 1}) {
      std::vector<double> lam(8, 0.0);
      lam[2] = s1;
      lam[5] = s2;
      const auto sq = haar_square(modulate(b, lam, fr));
      for (std::size_t i = 0; i < sq.size(); ++i) ref[i] = std::max(ref[i], sq[i]);
    }
  }
  for (std::size_t i = 0; i < ref.size(); ++i) CHECK(res.value[i] == doctest::Approx(ref[i]).epsilon(1e-12));

  SignSampler sampler;
  sampler.exact_limit = 2;
  sampler.samples = 64;
  const auto c = random_coefficients(8, 1, 0);
  const auto sampled = modulated_square_sup(c, fr, sampler);
  CHECK_FALSE(sampled.exact);
  CHECK(sampled.samples == 64);
  for (std::size_t i = 0; i < sampled.value.size(); ++i) CHECK(sampled.value[i] >= 0.0);
}

TEST_CASE("block majorant") {
  const auto s = build_franklin(32, make_grid(10));
  const double q = default_majorant_q(2.0, 0.9);
  CHECK(q == doctest::Approx(std::min({1.5, 1.0 / (1.0 - 0.45), 1.5})));
  const auto r4 = block_majorant(CoefficientVector(32, 0.0), s, q);
  for (double v : r4.values()) CHECK(v == 0.0);
  CoefficientVector a(32, 0.0);
  a[5] = 1.0;
  a[6] = -0.5;  // indices 6 and 7: both in block 3
  const auto maj = block_majorant(a, s, q);
  const auto ref = hl_maximal(block_abs_sum(a, s, 3), q);
  for (std::size_t i = 0; i < ref.size(); ++i) CHECK(maj[i] == doctest::Approx(ref[i]).epsilon(1e-12));
  CHECK_THROWS_AS(block_majorant(a, s, 10.0), Error);
}
