#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference version; AVX2
// (x86-64) and NEON (aarch64) tables are picked at runtime when the CPU has them.
// Elementwise kernels round identically across tables; reductions may differ
// in the last bits because lanes are summed in a different order.

#include <cstddef>
#include <span>
#include <string_view>

namespace weyl::simd {

struct KernelTable {
  const char* name;
  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*sum_squares)(const double* x, std::size_t n);
  double (*sum_abs)(const double* x, std::size_t n);
  // y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // y += |a * x|
  void (*abs_axpy)(double a, const double* x, double* y, std::size_t n);
  // acc = max(acc, x)
  void (*max_update)(const double* x, double* acc, std::size_t n);
  // acc = max(acc, |x|)
  void (*abs_max_update)(const double* x, double* acc, std::size_t n);
  // acc = max(acc, |s + v|)
  void (*shifted_abs_max_update)(const double* s, const double* v, double* acc, std::size_t n);
  // out = (x - base) * scale
  void (*scaled_diff)(const double* x, double base, const double* scale, double* out, std::size_t n);
  // max_i |x_i - y_i| * max(wx_i, wy_i)
  double (*max_abs_diff_weighted)(const double* x, const double* y, const double* wx,
                                  const double* wy, std::size_t n);
  // sum_i max(a_i, b_i)^2
  double (*sum_squares_of_max)(const double* a, const double* b, std::size_t n);
  // max_i |x_i| * w_i
  double (*max_abs_weighted)(const double* x, const double* w, std::size_t n);
};

const KernelTable& scalar_table() noexcept;
/// nullptr when the table was not compiled in or the CPU lacks the extension.
const KernelTable* avx2_table() noexcept;
const KernelTable* neon_table() noexcept;

/// Table used by the library. Chosen once: WEYL_LAB_SIMD=scalar|avx2|neon
/// forces a table, otherwise the widest supported one wins.
const KernelTable& active() noexcept;

inline double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), x.size());
}
inline double sum_squares(std::span<const double> x) {
  return active().sum_squares(x.data(), x.size());
}
inline double sum_abs(std::span<const double> x) { return active().sum_abs(x.data(), x.size()); }
inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  active().axpy(a, x.data(), y.data(), x.size());
}
inline void abs_axpy(double a, std::span<const double> x, std::span<double> y) {
  active().abs_axpy(a, x.data(), y.data(), x.size());
}
inline void max_update(std::span<const double> x, std::span<double> acc) {
  active().max_update(x.data(), acc.data(), x.size());
}
inline void abs_max_update(std::span<const double> x, std::span<double> acc) {
  active().abs_max_update(x.data(), acc.data(), x.size());
}
inline void shifted_abs_max_update(std::span<const double> s, std::span<const double> v,
                                   std::span<double> acc) {
  active().shifted_abs_max_update(s.data(), v.data(), acc.data(), s.size());
}
inline double sum_squares_of_max(std::span<const double> a, std::span<const double> b) {
  return active().sum_squares_of_max(a.data(), b.data(), a.size());
}
inline double max_abs_weighted(std::span<const double> x, std::span<const double> w) {
  return active().max_abs_weighted(x.data(), w.data(), x.size());
}

}  // namespace weyl::simd
