#include "weyl/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "weyl/kernels.hpp"

namespace weyl {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Shape: return "shape";
    case ErrorKind::Resource: return "resource";
    case ErrorKind::Format: return "format";
    case ErrorKind::Numeric: return "numeric";
  }
  return "unknown";
}

DyadicGrid::DyadicGrid(int level) : level_(level) {
  require(level >= 0 && level <= 62, ErrorKind::Domain, "grid level must be in [0, 62]");
}

std::size_t DyadicGrid::cell_of(double x) const {
  require(x >= 0.0 && x < 1.0, ErrorKind::Domain, "point must lie in [0,1)");
  // x * 2^J is exact for doubles, so floor gives the half-open cell.
  const auto i = static_cast<std::size_t>(std::ldexp(x, level_));
  return std::min(i, cell_count() - 1);
}

DyadicGrid make_grid(int level, int cap) {
  require(level >= 0, ErrorKind::Domain, "grid level must be nonnegative");
  require(level <= cap, ErrorKind::Resource,
          "grid level " + std::to_string(level) + " exceeds cap " + std::to_string(cap));
  return DyadicGrid(level);
}

double DyadicInterval::left() const noexcept {
  return std::ldexp(static_cast<double>(index - 1), -level);
}
double DyadicInterval::right() const noexcept {
  return std::ldexp(static_cast<double>(index), -level);
}
double DyadicInterval::length() const noexcept { return std::ldexp(1.0, -level); }

DyadicInterval dyadic_interval(double x, int level) {
  require(x >= 0.0 && x < 1.0, ErrorKind::Domain, "point must lie in [0,1)");
  require(level >= 0 && level <= 62, ErrorKind::Domain, "level must be in [0, 62]");
  const auto j = static_cast<std::int64_t>(std::floor(std::ldexp(x, level)));
  return {level, j + 1};
}

CellRange cells_intersecting(const DyadicGrid& grid, double a, double b) {
  a = std::max(a, 0.0);
  b = std::min(b, 1.0);
  if (!(b > a)) return {};
  const double n = static_cast<double>(grid.cell_count());
  const auto first = static_cast<std::size_t>(std::floor(a * n));
  const auto last = static_cast<std::size_t>(std::ceil(b * n));
  return {first, std::min(last, grid.cell_count())};
}

SampledFunction::SampledFunction(DyadicGrid grid, double fill)
    : grid_(grid), values_(grid.cell_count(), fill) {}

SampledFunction::SampledFunction(DyadicGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  require(values_.size() == grid_.cell_count(), ErrorKind::Shape,
          "value count does not match grid cell count");
}

SampledFunction SampledFunction::from_midpoints(DyadicGrid grid,
                                                const std::function<double(double)>& fn) {
  SampledFunction f(grid);
  for (std::size_t i = 0; i < f.size(); ++i) f.values_[i] = fn(grid.midpoint(i));
  return f;
}

SampledFunction SampledFunction::indicator(DyadicGrid grid, double a, double b) {
  SampledFunction f(grid);
  const CellRange r = cells_intersecting(grid, a, b);
  std::fill(f.values_.begin() + static_cast<std::ptrdiff_t>(r.first),
            f.values_.begin() + static_cast<std::ptrdiff_t>(r.first + r.size()), 1.0);
  return f;
}

SampledFunction& SampledFunction::operator+=(const SampledFunction& other) {
  require_same_grid(*this, other);
  simd::axpy(1.0, other.values(), values());
  return *this;
}

SampledFunction& SampledFunction::operator-=(const SampledFunction& other) {
  require_same_grid(*this, other);
  simd::axpy(-1.0, other.values(), values());
  return *this;
}

SampledFunction& SampledFunction::operator*=(double scale) {
  for (double& v : values_) v *= scale;
  return *this;
}

bool SampledFunction::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

SampledFunction operator+(SampledFunction lhs, const SampledFunction& rhs) { return lhs += rhs; }
SampledFunction operator-(SampledFunction lhs, const SampledFunction& rhs) { return lhs -= rhs; }
SampledFunction operator*(double scale, SampledFunction f) { return f *= scale; }

SampledFunction abs(SampledFunction f) {
  for (double& v : f.values()) v = std::fabs(v);
  return f;
}

void require_same_grid(const SampledFunction& f, const SampledFunction& g) {
  require(f.grid() == g.grid() && f.size() == g.size(), ErrorKind::Shape,
          "functions live on different grids");
}

double integrate(const SampledFunction& f) {
  double s = 0.0;
  for (double v : f.values()) s += v;
  return s * f.grid().cell_width();
}

double power_mean(std::span<const double> values, double p) {
  if (values.empty()) return 0.0;
  double s = 0.0;
  if (p == 2.0) {
    s = simd::sum_squares(values);
  } else if (p == 1.0) {
    s = simd::sum_abs(values);
  } else {
    for (double v : values) s += std::pow(std::fabs(v), p);
  }
  return std::pow(s / static_cast<double>(values.size()), 1.0 / p);
}

double lp_norm(const SampledFunction& f, double p) {
  require(p > 1.0 && std::isfinite(p), ErrorKind::Domain, "lp_norm requires 1 < p < inf");
  return power_mean(f.values(), p);
}

double inner_product(const SampledFunction& f, const SampledFunction& g) {
  require_same_grid(f, g);
  return simd::dot(f.values(), g.values()) * f.grid().cell_width();
}

double oscillation(const SampledFunction& f, CellRange cells) {
  require(!cells.empty() && cells.last <= f.size(), ErrorKind::Domain,
          "oscillation over an empty set of cells");
  const auto first = f.values().begin() + static_cast<std::ptrdiff_t>(cells.first);
  const auto [lo, hi] = std::minmax_element(first, first + static_cast<std::ptrdiff_t>(cells.size()));
  return *hi - *lo;
}

double oscillation(const SampledFunction& f, const DyadicInterval& interval) {
  return oscillation(f, cells_intersecting(f.grid(), interval.left(), interval.right()));
}

}  // namespace weyl
