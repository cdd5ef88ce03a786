#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "weyl/haar.hpp"
#include "weyl/systems.hpp"

using namespace weyl;

namespace {

std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() / (std::string("weyl_test_") + name);
}

}  // namespace

TEST_CASE("envelope and centers") {
  CHECK(xi(0.0, 0.3) == 1.0);
  CHECK(xi(1.0, 0.5) == doctest::Approx(std::pow(2.0, -1.5)).epsilon(1e-15));
  for (double x : {0.1, 0.7, 3.0}) CHECK(xi(-x, 0.9) == xi(x, 0.9));
  CHECK(center(1).t == 0.5);
  CHECK(center(5).level == 2);
  CHECK(center(5).j == 1);
  CHECK(center(5).t == 0.125);
  CHECK(center(4).level == 1);
  CHECK(center(4).j == 2);
  CHECK(center(4).t == 0.75);
}

TEST_CASE("Haar system is exactly orthonormal") {
  const auto s = build_haar(64, make_grid(8));
  CHECK(s.size() == 64);
  CHECK(orthonormality_defect(s) <= 1e-14);
  for (std::size_t k = 2; k <= 64; ++k) CHECK(std::abs(integrate(s.phi(k))) <= 1e-15);
  CHECK_THROWS_AS(build_haar(512, make_grid(8)), Error);
}

TEST_CASE("system files round trip and reject damage") {
  const auto s = build_haar(16, make_grid(6));
  const auto path = temp_file("haar16.wts");
  save_system(s, path);
  const auto t = load_system(path);
  REQUIRE(t.size() == 16);
  CHECK(t.grid == s.grid);
  CHECK(t.name == s.name);
  for (std::size_t k = 1; k <= 16; ++k) {
    for (std::size_t i = 0; i < s.grid.cell_count(); ++i) CHECK(t.phi(k)[i] == s.phi(k)[i]);
  }

  const auto size = std::filesystem::file_size(path);
  const auto truncated = temp_file("truncated.wts");
  std::filesystem::copy_file(path, truncated, std::filesystem::copy_options::overwrite_existing);
  std::filesystem::resize_file(truncated, size - 8);
  try {
    load_system(truncated);
    FAIL("truncated payload accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Format);
  }

  // Header claims more functions than the payload holds.
  std::ifstream in(path, std::ios::binary);
  std::string header;
  std::getline(in, header);
  const std::string payload((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto pos = header.find("N=16");
  REQUIRE(pos != std::string::npos);
  header.replace(pos, 4, "N=17");
  const auto bad = temp_file("mismatch.wts");
  {
    std::ofstream out(bad, std::ios::binary);
    out << header << "\n" << payload;
  }
  try {
    load_system(bad);
    FAIL("mismatched header accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Format);
  }
  {
    std::ofstream out(bad, std::ios::binary);
    out << "not a system\n";
  }
  CHECK_THROWS_AS(load_system(bad), Error);
  std::filesystem::remove(path);
  std::filesystem::remove(truncated);
  std::filesystem::remove(bad);
}

TEST_CASE("coarsening averages pairs of cells") {
  const auto s = build_haar(8, make_grid(5));
  const auto c = coarsen(s);
  CHECK(c.grid.level() == 4);
  CHECK(orthonormality_defect(c) <= 1e-14);
}

TEST_CASE("wavelet-type verification: Haar mean zero, Hoelder fails") {
  const auto s = build_haar(64, make_grid(12));
  const auto r = verify_wavelet_type(s, 0.9, 1.0);
  CHECK(r.mean_zero_max <= 1e-15);
  CHECK(r.mean_zero_pass);
  CHECK_FALSE(r.holder_pass);
}
