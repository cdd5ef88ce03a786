#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "weyl/error.hpp"

namespace weyl {

inline constexpr int kMaxGridLevel = 24;

/// Uniform dyadic partition of [0,1) into 2^J half-open cells.
class DyadicGrid {
 public:
  DyadicGrid() = default;
  explicit DyadicGrid(int level);

  int level() const noexcept { return level_; }
  std::size_t cell_count() const noexcept { return std::size_t{1} << level_; }
  double cell_width() const noexcept { return 1.0 / static_cast<double>(cell_count()); }
  double midpoint(std::size_t cell) const noexcept {
    return (static_cast<double>(cell) + 0.5) * cell_width();
  }
  /// Cell containing x; x must lie in [0,1).
  std::size_t cell_of(double x) const;

  friend bool operator==(const DyadicGrid&, const DyadicGrid&) = default;

 private:
  int level_ = 0;
};

/// Throws ErrorKind::Resource when J exceeds `cap`.
DyadicGrid make_grid(int level, int cap = kMaxGridLevel);

/// The level-n interval [(j-1)/2^n, j/2^n), j in 1..2^n.
struct DyadicInterval {
  int level = 0;
  std::int64_t index = 1;

  double left() const noexcept;
  double right() const noexcept;
  double length() const noexcept;
  bool contains(double x) const noexcept { return x >= left() && x < right(); }

  friend bool operator==(const DyadicInterval&, const DyadicInterval&) = default;
};

DyadicInterval dyadic_interval(double x, int level);

/// Grid-aligned half-open interval [first, last) in cell units.
struct CellRange {
  std::size_t first = 0;
  std::size_t last = 0;

  std::size_t size() const noexcept { return last > first ? last - first : 0; }
  bool empty() const noexcept { return size() == 0; }
};

/// Cells covered by an arbitrary [a,b) (cells that intersect it).
CellRange cells_intersecting(const DyadicGrid& grid, double a, double b);

/// A real function on [0,1), constant on each cell of its grid.
class SampledFunction {
 public:
  SampledFunction() = default;
  explicit SampledFunction(DyadicGrid grid, double fill = 0.0);
  SampledFunction(DyadicGrid grid, std::vector<double> values);

  /// Samples `fn` at cell midpoints.
  static SampledFunction from_midpoints(DyadicGrid grid, const std::function<double(double)>& fn);
  /// Indicator of the grid-aligned cells meeting [a,b).
  static SampledFunction indicator(DyadicGrid grid, double a, double b);

  const DyadicGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double& operator[](std::size_t i) noexcept { return values_[i]; }
  /// Value on the cell containing x.
  double at(double x) const { return values_[grid_.cell_of(x)]; }

  SampledFunction& operator+=(const SampledFunction& other);
  SampledFunction& operator-=(const SampledFunction& other);
  SampledFunction& operator*=(double scale);

  bool all_finite() const noexcept;

 private:
  DyadicGrid grid_;
  std::vector<double> values_;
};

SampledFunction operator+(SampledFunction lhs, const SampledFunction& rhs);
SampledFunction operator-(SampledFunction lhs, const SampledFunction& rhs);
SampledFunction operator*(double scale, SampledFunction f);
SampledFunction abs(SampledFunction f);

void require_same_grid(const SampledFunction& f, const SampledFunction& g);

double integrate(const SampledFunction& f);
/// (integral of |f|^p)^(1/p); p must exceed 1.
double lp_norm(const SampledFunction& f, double p);
/// Same quadrature without the p > 1 guard. Used internally for p = 1 and p = infinity style reductions.
double power_mean(std::span<const double> values, double p);
double inner_product(const SampledFunction& f, const SampledFunction& g);
/// max - min of f over the cells meeting E.
double oscillation(const SampledFunction& f, const DyadicInterval& interval);
double oscillation(const SampledFunction& f, CellRange cells);

}  // namespace weyl
