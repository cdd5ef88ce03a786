#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "weyl/kernels.hpp"

using weyl::simd::KernelTable;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> d;
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

void compare_tables(const KernelTable& ref, const KernelTable& alt) {
  std::mt19937_64 rng(7);
  for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 63u, 64u, 65u, 1000u}) {
    CAPTURE(n);
    const auto x = random_vector(rng, n), y = random_vector(rng, n);
    auto w1 = random_vector(rng, n), w2 = random_vector(rng, n);
    for (double& w : w1) w = std::abs(w);
    for (double& w : w2) w = std::abs(w);
    const double tol = 1e-12 * (1.0 + static_cast<double>(n));

    CHECK(alt.dot(x.data(), y.data(), n) == doctest::Approx(ref.dot(x.data(), y.data(), n)).epsilon(tol));
    CHECK(alt.sum_squares(x.data(), n) == doctest::Approx(ref.sum_squares(x.data(), n)).epsilon(tol));
    CHECK(alt.sum_abs(x.data(), n) == doctest::Approx(ref.sum_abs(x.data(), n)).epsilon(tol));

    // Elementwise kernels must agree bit for bit.
    auto a = y, b = y;
    ref.axpy(0.37, x.data(), a.data(), n);
    alt.axpy(0.37, x.data(), b.data(), n);
    CHECK(same_bits(a, b));
    a = w1, b = w1;
    ref.abs_axpy(-1.3, x.data(), a.data(), n);
    alt.abs_axpy(-1.3, x.data(), b.data(), n);
    CHECK(same_bits(a, b));
    a = w1, b = w1;
    ref.max_update(x.data(), a.data(), n);
    alt.max_update(x.data(), b.data(), n);
    CHECK(same_bits(a, b));
    a = w1, b = w1;
    ref.abs_max_update(x.data(), a.data(), n);
    alt.abs_max_update(x.data(), b.data(), n);
    CHECK(same_bits(a, b));
    a = w1, b = w1;
    ref.shifted_abs_max_update(x.data(), y.data(), a.data(), n);
    alt.shifted_abs_max_update(x.data(), y.data(), b.data(), n);
    CHECK(same_bits(a, b));
    std::vector<double> o1(n), o2(n);
    ref.scaled_diff(x.data(), 0.25, w1.data(), o1.data(), n);
    alt.scaled_diff(x.data(), 0.25, w1.data(), o2.data(), n);
    CHECK(same_bits(o1, o2));

    // Max reductions are order independent, so they agree exactly too.
    CHECK(alt.max_abs_diff_weighted(x.data(), y.data(), w1.data(), w2.data(), n) ==
          ref.max_abs_diff_weighted(x.data(), y.data(), w1.data(), w2.data(), n));
    CHECK(alt.max_abs_weighted(x.data(), w1.data(), n) == ref.max_abs_weighted(x.data(), w1.data(), n));
    CHECK(alt.sum_squares_of_max(w1.data(), w2.data(), n) ==
          doctest::Approx(ref.sum_squares_of_max(w1.data(), w2.data(), n)).epsilon(tol));
  }
}

}  // namespace

TEST_CASE("scalar kernels follow their definitions") {
  const auto& k = weyl::simd::scalar_table();
  const std::vector<double> x{1, -2, 3}, y{4, 5, -6};
  CHECK(k.dot(x.data(), y.data(), 3) == -24.0);
  CHECK(k.sum_squares(x.data(), 3) == 14.0);
  CHECK(k.sum_abs(x.data(), 3) == 6.0);
  std::vector<double> acc{0, 0, 0};
  k.shifted_abs_max_update(x.data(), y.data(), acc.data(), 3);
  CHECK(acc == std::vector<double>{5, 3, 3});
  const std::vector<double> wx{1, 1, 2}, wy{0.5, 3, 1};
  CHECK(k.max_abs_diff_weighted(x.data(), y.data(), wx.data(), wy.data(), 3) == 21.0);
  const std::vector<double> a{1, 5, 2}, b{3, 1, 2};
  CHECK(k.sum_squares_of_max(a.data(), b.data(), 3) == 38.0);
}

TEST_CASE("AVX2 kernels match the scalar reference") {
  const KernelTable* avx = weyl::simd::avx2_table();
  if (avx == nullptr) {
    MESSAGE("AVX2 table unavailable on this machine; skipped");
    return;
  }
  compare_tables(weyl::simd::scalar_table(), *avx);
}

TEST_CASE("NEON kernels match the scalar reference") {
  const KernelTable* neon = weyl::simd::neon_table();
  if (neon == nullptr) {
    MESSAGE("NEON table unavailable on this machine; skipped");
    return;
  }
  compare_tables(weyl::simd::scalar_table(), *neon);
}

TEST_CASE("active table is one of the compiled tables") {
  const auto& active = weyl::simd::active();
  const bool known = &active == &weyl::simd::scalar_table() || &active == weyl::simd::avx2_table() ||
                     &active == weyl::simd::neon_table();
  CHECK(known);
}
