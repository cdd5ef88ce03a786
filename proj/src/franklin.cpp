#include <algorithm>
#include <cmath>
#include <string>

#include "weyl/banded.hpp"
#include "weyl/systems.hpp"

namespace weyl {
namespace {

// Knots are stored in cell units so every element spans a whole number of cells.
struct Knots {
  std::vector<std::size_t> pos;

  std::size_t insert(std::size_t x) {
    const auto it = std::lower_bound(pos.begin(), pos.end(), x);
    require(it == pos.end() || *it != x, ErrorKind::Numeric, "Franklin knot inserted twice");
    const auto at = static_cast<std::size_t>(it - pos.begin());
    pos.insert(it, x);
    return at;
  }
};

// Gram matrix of the nodal hat basis in the grid inner product. A hat restricted to an
// element of m cells, sampled at midpoints u_i = (i + 1/2)/m, gives
//   sum (1-u_i)^2 = m/3 - 1/(12m),   sum u_i (1-u_i) = m/6 + 1/(12m).
TridiagonalSpd gram(const Knots& knots, double w) {
  const std::size_t n = knots.pos.size();
  std::vector<double> diag(n, 0.0);
  std::vector<double> off(n - 1, 0.0);
  for (std::size_t e = 0; e + 1 < n; ++e) {
    const double m = static_cast<double>(knots.pos[e + 1] - knots.pos[e]);
    const double self = w * (m / 3.0 - 1.0 / (12.0 * m));
    diag[e] += self;
    diag[e + 1] += self;
    off[e] = w * (m / 6.0 + 1.0 / (12.0 * m));
  }
  return TridiagonalSpd(std::move(diag), std::move(off));
}

SampledFunction evaluate(const Knots& knots, const std::vector<double>& nodal,
                         const DyadicGrid& grid) {
  SampledFunction f(grid);
  auto v = f.values();
  for (std::size_t e = 0; e + 1 < knots.pos.size(); ++e) {
    const std::size_t a = knots.pos[e];
    const std::size_t b = knots.pos[e + 1];
    const double m = static_cast<double>(b - a);
    for (std::size_t i = a; i < b; ++i) {
      const double u = (static_cast<double>(i - a) + 0.5) / m;
      v[i] = nodal[e] * (1.0 - u) + nodal[e + 1] * u;
    }
  }
  return f;
}

}  // namespace

OrthonormalSystem build_franklin(std::size_t n, const DyadicGrid& grid) {
  require(n >= 1, ErrorKind::Domain, "system needs at least one function");
  require(n <= kMaxSystemSize, ErrorKind::Resource, "N exceeds the system size cap");
  require(grid.level() >= 4 && n <= (grid.cell_count() >> 4), ErrorKind::Resource,
          "Franklin system of size " + std::to_string(n) + " needs N <= 2^(J-4)");

  OrthonormalSystem s;
  s.name = "franklin";
  s.grid = grid;
  s.first_index_special = true;
  s.delta = 0.9;
  s.alpha = 1.0;
  s.functions.reserve(n);
  s.functions.emplace_back(grid, 1.0);

  const double w = grid.cell_width();
  const std::size_t cells = grid.cell_count();
  Knots knots{{0, cells}};
  for (std::size_t k = 2; k <= n; ++k) {
    // phi_k spans V_k minus V_{k-1}: w in V_k lies in V_{k-1} exactly when ell . w = 0,
    // so c = G^{-1} ell is orthogonal to V_{k-1} and <c, ell> is its squared norm.
    std::vector<double> ell(k == 2 ? 2 : knots.pos.size() + 1, 0.0);
    if (k == 2) {
      ell = {-1.0, 1.0};
    } else {
      const double t = center(static_cast<std::int64_t>(k - 1)).t;
      const auto x = static_cast<std::size_t>(std::ldexp(t, grid.level()));
      const std::size_t i = knots.insert(x);
      const double left = static_cast<double>(knots.pos[i - 1]);
      const double right = static_cast<double>(knots.pos[i + 1]);
      const double theta = (right - static_cast<double>(x)) / (right - left);
      ell[i - 1] = -theta;
      ell[i] = 1.0;
      ell[i + 1] = -(1.0 - theta);
    }
    const TridiagonalSpd g = gram(knots, w);
    std::vector<double> c = ell;
    g.solve(c);
    double norm2 = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) norm2 += c[i] * ell[i];
    require(norm2 > 0.0 && std::isfinite(norm2), ErrorKind::Numeric,
            "Franklin Gram solve lost positivity at k=" + std::to_string(k));
    const double scale = 1.0 / std::sqrt(norm2);
    for (double& v : c) v *= scale;
    s.functions.push_back(evaluate(knots, c, grid));
  }
  return s;
}

}  // namespace weyl
