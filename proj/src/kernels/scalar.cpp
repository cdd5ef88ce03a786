#include <algorithm>
#include <cmath>

#include "kernel_tables.hpp"

namespace weyl::simd {
namespace {

double dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

double sum_squares(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
  return s;
}

double sum_abs(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::fabs(x[i]);
  return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + a * x[i];
}

void abs_axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + std::fabs(a * x[i]);
}

void max_update(const double* x, double* acc, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] = std::max(acc[i], x[i]);
}

void abs_max_update(const double* x, double* acc, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] = std::max(acc[i], std::fabs(x[i]));
}

void shifted_abs_max_update(const double* s, const double* v, double* acc, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] = std::max(acc[i], std::fabs(s[i] + v[i]));
}

void scaled_diff(const double* x, double base, const double* scale, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = (x[i] - base) * scale[i];
}

double max_abs_diff_weighted(const double* x, const double* y, const double* wx, const double* wy,
                             std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    m = std::max(m, std::fabs(x[i] - y[i]) * std::max(wx[i], wy[i]));
  }
  return m;
}

double sum_squares_of_max(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double m = std::max(a[i], b[i]);
    s += m * m;
  }
  return s;
}

double max_abs_weighted(const double* x, const double* w, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(x[i]) * w[i]);
  return m;
}

}  // namespace

const KernelTable& scalar_table() noexcept {
  static const KernelTable table{
      "scalar",     dot,          sum_squares,  sum_abs,
      axpy,         abs_axpy,     max_update,   abs_max_update,
      shifted_abs_max_update,     scaled_diff,  max_abs_diff_weighted,
      sum_squares_of_max,         max_abs_weighted,
  };
  return table;
}

}  // namespace weyl::simd
