#include "weyl/systems.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "weyl/haar.hpp"
#include "weyl/kernels.hpp"
#include "weyl/parallel.hpp"

namespace weyl {

double xi(double x, double delta) {
  require(delta > 0.0 && delta < 1.0, ErrorKind::Domain, "xi requires 0 < delta < 1");
  return std::pow(1.0 + std::fabs(x), -(1.0 + delta));
}

Center center(std::int64_t k) {
  require(k >= 1, ErrorKind::Domain, "center index starts at 1");
  if (k == 1) return {};
  const auto u = static_cast<std::uint64_t>(k - 1);
  const int n = static_cast<int>(std::bit_width(u)) - 1;
  const std::int64_t j = k - (std::int64_t{1} << n);
  return {std::ldexp(static_cast<double>(2 * j - 1), -(n + 1)), n, j};
}

OrthonormalSystem build_haar(std::size_t n, const DyadicGrid& grid) {
  require(n >= 1, ErrorKind::Domain, "system needs at least one function");
  require(n <= kMaxSystemSize, ErrorKind::Resource, "N exceeds the system size cap");
  require(n <= grid.cell_count(), ErrorKind::Resource,
          "Haar system of size " + std::to_string(n) + " needs a finer grid");
  OrthonormalSystem s;
  s.name = "haar";
  s.grid = grid;
  s.first_index_special = true;
  s.functions.reserve(n);
  for (std::size_t k = 1; k <= n; ++k) s.functions.push_back(haar_function(k, grid));
  return s;
}

double orthonormality_defect(const OrthonormalSystem& s) {
  const std::size_t n = s.size();
  const double w = s.grid.cell_width();
  const auto rows = parallel_map<double>(n, [&](std::size_t j) {
    double worst = 0.0;
    const auto fj = s.functions[j].values();
    for (std::size_t k = j; k < n; ++k) {
      const double g = simd::dot(fj, s.functions[k].values()) * w;
      worst = std::max(worst, std::fabs(k == j ? g - 1.0 : g));
    }
    return worst;
  });
  double worst = 0.0;
  for (double v : rows) worst = std::max(worst, v);
  return worst;
}

OrthonormalSystem coarsen(const OrthonormalSystem& s) {
  require(s.grid.level() >= 1, ErrorKind::Domain, "cannot coarsen a one-cell grid");
  OrthonormalSystem out = s;
  out.grid = DyadicGrid(s.grid.level() - 1);
  for (auto& f : out.functions) {
    std::vector<double> v(out.grid.cell_count());
    const auto src = f.values();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.5 * (src[2 * i] + src[2 * i + 1]);
    f = SampledFunction(out.grid, std::move(v));
  }
  return out;
}

}  // namespace weyl
