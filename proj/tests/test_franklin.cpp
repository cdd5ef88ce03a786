#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "weyl/systems.hpp"

using namespace weyl;

TEST_CASE("Franklin system matches a dense Gram-Schmidt oracle") {
  const int J = 10;
  const auto s = build_franklin(48, make_grid(J));
  const auto dense = oracle::franklin_dense(48, J);
  double worst = 0.0;
  for (std::size_t k = 1; k <= 48; ++k) {
    for (std::size_t i = 0; i < s.grid.cell_count(); ++i) worst = std::max(worst, std::abs(s.phi(k)[i] - dense[k - 1][i]));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("first Franklin functions") {
  const int J = 14;
  const auto s = build_franklin(64, make_grid(J));
  for (std::size_t i = 0; i < s.grid.cell_count(); i += 97) {
    CHECK(s.phi(1)[i] == doctest::Approx(1.0).epsilon(1e-12));
    const double x = s.grid.midpoint(i);
    CHECK(std::abs(s.phi(2)[i] - std::sqrt(3.0) * (2.0 * x - 1.0)) <= 1e-8);
  }
  CHECK(orthonormality_defect(s) <= 1e-8);

  // phi_3 from the continuous Gram-Schmidt of {1, x, hat at 1/2}: evaluate at the knots
  // by linear extrapolation from the two nearest cell midpoints on the same linear piece.
  // Continuous oracle: hat minus its projections onto 1 and sqrt(3)(2x-1), normalised.
  // <hat,1> = 1/2, <hat, sqrt3(2x-1)> = 0 by symmetry, ||hat||^2 = 1/3.
  // phi_3 = (hat - 1/2) / sqrt(1/3 - 1/4) = (hat - 1/2) * sqrt(12).
  const double c = std::sqrt(12.0);
  const auto& f = s.phi(3);
  const std::size_t n = s.grid.cell_count();
  auto extrapolate = [&](std::size_t i0, std::size_t i1, double x) {
    const double x0 = s.grid.midpoint(i0), x1 = s.grid.midpoint(i1);
    return f[i0] + (f[i1] - f[i0]) * (x - x0) / (x1 - x0);
  };
  CHECK(std::abs(extrapolate(0, 1, 0.0) - (-0.5 * c)) <= 5e-8);
  CHECK(std::abs(extrapolate(n / 2 - 2, n / 2 - 1, 0.5) - 0.5 * c) <= 5e-8);
  CHECK(std::abs(extrapolate(n - 2, n - 1, 1.0) - (-0.5 * c)) <= 5e-8);
}

TEST_CASE("Franklin needs resolution margin") {
  CHECK_THROWS_AS(build_franklin(128, make_grid(10)), Error);
  CHECK_NOTHROW(build_franklin(64, make_grid(10)));
}

TEST_CASE("Franklin passes the wavelet-type conditions and is stable under refinement") {
  const auto fine = verify_wavelet_type(build_franklin(64, make_grid(13)), 0.9, 1.0);
  const auto finer = verify_wavelet_type(build_franklin(64, make_grid(14)), 0.9, 1.0);
  CHECK(fine.mean_zero_pass);
  CHECK(fine.decay_pass);
  CHECK(fine.holder_pass);
  CHECK(fine.local_mass_pass);
  CHECK(std::isfinite(fine.decay_constant));
  CHECK(finer.decay_constant == doctest::Approx(fine.decay_constant).epsilon(0.10));
  CHECK(finer.holder_constant == doctest::Approx(fine.holder_constant).epsilon(0.10));
}
