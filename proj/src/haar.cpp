#include "weyl/haar.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace weyl {

SampledFunction haar_function(std::size_t k, const DyadicGrid& grid) {
  require(k >= 1, ErrorKind::Domain, "Haar index starts at 1");
  SampledFunction h(grid);
  if (k == 1) {
    for (double& v : h.values()) v = 1.0;
    return h;
  }
  const int n = static_cast<int>(std::bit_width(k - 1)) - 1;  // k = 2^n + j, 1 <= j <= 2^n
  require(n < grid.level(), ErrorKind::Resource,
          "Haar index " + std::to_string(k) + " needs a finer grid");
  const std::size_t j = k - (std::size_t{1} << n);
  const std::size_t width = grid.cell_count() >> n;
  const std::size_t first = (j - 1) * width;
  const double amp = std::ldexp(1.0, n / 2) * ((n % 2) ? std::sqrt(2.0) : 1.0);
  auto values = h.values();
  for (std::size_t i = 0; i < width / 2; ++i) values[first + i] = amp;
  for (std::size_t i = width / 2; i < width; ++i) values[first + i] = -amp;
  return h;
}

namespace {

double level_amplitude(int n) {
  return std::ldexp(1.0, n / 2) * ((n % 2) ? std::sqrt(2.0) : 1.0);
}

}  // namespace

std::vector<double> haar_transform(const SampledFunction& f) {
  const int J = f.grid().level();
  const double w = f.grid().cell_width();
  std::vector<double> c(f.size(), 0.0);
  std::vector<double> sums(f.values().begin(), f.values().end());
  for (int level = J; level >= 1; --level) {
    const int n = level - 1;
    const std::size_t count = std::size_t{1} << n;
    const double amp = level_amplitude(n) * w;
    for (std::size_t j = 0; j < count; ++j) {
      const double left = sums[2 * j];
      const double right = sums[2 * j + 1];
      c[count + j] = amp * (left - right);
      sums[j] = left + right;
    }
  }
  c[0] = w * sums[0];
  return c;
}

SampledFunction haar_synthesis(const DyadicGrid& grid, const std::vector<double>& coeffs) {
  require(coeffs.size() == grid.cell_count(), ErrorKind::Shape,
          "Haar synthesis needs one coefficient per cell");
  std::vector<double> cur(grid.cell_count());
  std::vector<double> next(grid.cell_count());
  cur[0] = coeffs[0];
  for (int n = 0; n < grid.level(); ++n) {
    const std::size_t count = std::size_t{1} << n;
    const double amp = level_amplitude(n);
    for (std::size_t j = 0; j < count; ++j) {
      const double d = amp * coeffs[count + j];
      next[2 * j] = cur[j] + d;
      next[2 * j + 1] = cur[j] - d;
    }
    std::swap(cur, next);
  }
  return SampledFunction(grid, std::move(cur));
}

SampledFunction haar_partial(const SampledFunction& f, int n) {
  const int J = f.grid().level();
  require(n >= 0 && n <= J, ErrorKind::Domain, "haar_partial level must lie in [0, J]");
  SampledFunction out(f.grid());
  const std::size_t width = f.size() >> n;
  const auto in = f.values();
  auto dst = out.values();
  for (std::size_t b = 0; b < f.size(); b += width) {
    double s = 0.0;
    for (std::size_t i = 0; i < width; ++i) s += in[b + i];
    const double mean = s / static_cast<double>(width);
    for (std::size_t i = 0; i < width; ++i) dst[b + i] = mean;
  }
  return out;
}

SampledFunction haar_partial_coefficients(const SampledFunction& f, int n) {
  const int J = f.grid().level();
  require(n >= 0 && n <= J, ErrorKind::Domain, "haar_partial level must lie in [0, J]");
  std::vector<double> c = haar_transform(f);
  for (std::size_t k = std::size_t{1} << n; k < c.size(); ++k) c[k] = 0.0;
  return haar_synthesis(f.grid(), c);
}

SampledFunction haar_block(const SampledFunction& f, int n) {
  require(n >= 1, ErrorKind::Domain, "haar_block level must be at least 1");
  return haar_partial(f, n) - haar_partial(f, n - 1);
}

SampledFunction haar_square_from_coefficients(const DyadicGrid& grid,
                                              const std::vector<double>& coeffs) {
  require(coeffs.size() == grid.cell_count(), ErrorKind::Shape,
          "square function needs one coefficient per cell");
  std::vector<double> cur(grid.cell_count());
  std::vector<double> next(grid.cell_count());
  cur[0] = coeffs[0] * coeffs[0];
  for (int n = 0; n < grid.level(); ++n) {
    const std::size_t count = std::size_t{1} << n;
    const double scale = std::ldexp(1.0, n);  // h_k^2 = 2^n on its support
    for (std::size_t j = 0; j < count; ++j) {
      const double c = coeffs[count + j];
      const double v = cur[j] + scale * c * c;
      next[2 * j] = v;
      next[2 * j + 1] = v;
    }
    std::swap(cur, next);
  }
  for (double& v : cur) v = std::sqrt(v);
  return SampledFunction(grid, std::move(cur));
}

SampledFunction haar_square(const SampledFunction& f) {
  return haar_square_from_coefficients(f.grid(), haar_transform(f));
}

}  // namespace weyl
