#include <arm_neon.h>

#include <algorithm>
#include <cmath>

#include "kernel_tables.hpp"

namespace weyl::simd {
namespace {

// vmaxq_f64 differs from std::max only on signed zeros; select explicitly instead.
inline float64x2_t max2(float64x2_t acc, float64x2_t v) {
  return vbslq_f64(vcltq_f64(acc, v), v, acc);
}

inline double hmax(float64x2_t v) { return std::max(vgetq_lane_f64(v, 0), vgetq_lane_f64(v, 1)); }

double dot(const double* x, const double* y, std::size_t n) {
  float64x2_t a0 = vdupq_n_f64(0.0);
  float64x2_t a1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    a0 = vaddq_f64(a0, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
    a1 = vaddq_f64(a1, vmulq_f64(vld1q_f64(x + i + 2), vld1q_f64(y + i + 2)));
  }
  double s = vaddvq_f64(vaddq_f64(a0, a1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double sum_squares(const double* x, std::size_t n) { return dot(x, x, n); }

double sum_abs(const double* x, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vabsq_f64(vld1q_f64(x + i)));
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += std::fabs(x[i]);
  return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
  for (; i < n; ++i) y[i] = y[i] + a * x[i];
}

void abs_axpy(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vabsq_f64(vmulq_f64(va, vld1q_f64(x + i)))));
  }
  for (; i < n; ++i) y[i] = y[i] + std::fabs(a * x[i]);
}

void max_update(const double* x, double* acc, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(acc + i, max2(vld1q_f64(acc + i), vld1q_f64(x + i)));
  for (; i < n; ++i) acc[i] = std::max(acc[i], x[i]);
}

void abs_max_update(const double* x, double* acc, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(acc + i, max2(vld1q_f64(acc + i), vabsq_f64(vld1q_f64(x + i))));
  }
  for (; i < n; ++i) acc[i] = std::max(acc[i], std::fabs(x[i]));
}

void shifted_abs_max_update(const double* s, const double* v, double* acc, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t sum = vaddq_f64(vld1q_f64(s + i), vld1q_f64(v + i));
    vst1q_f64(acc + i, max2(vld1q_f64(acc + i), vabsq_f64(sum)));
  }
  for (; i < n; ++i) acc[i] = std::max(acc[i], std::fabs(s[i] + v[i]));
}

void scaled_diff(const double* x, double base, const double* scale, double* out, std::size_t n) {
  const float64x2_t vb = vdupq_n_f64(base);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(out + i, vmulq_f64(vsubq_f64(vld1q_f64(x + i), vb), vld1q_f64(scale + i)));
  }
  for (; i < n; ++i) out[i] = (x[i] - base) * scale[i];
}

double max_abs_diff_weighted(const double* x, const double* y, const double* wx, const double* wy,
                             std::size_t n) {
  float64x2_t m = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vabsq_f64(vsubq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
    const float64x2_t w = max2(vld1q_f64(wx + i), vld1q_f64(wy + i));
    m = max2(m, vmulq_f64(d, w));
  }
  double r = hmax(m);
  for (; i < n; ++i) r = std::max(r, std::fabs(x[i] - y[i]) * std::max(wx[i], wy[i]));
  return r;
}

double sum_squares_of_max(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t m = max2(vld1q_f64(a + i), vld1q_f64(b + i));
    acc = vaddq_f64(acc, vmulq_f64(m, m));
  }
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) {
    const double m = std::max(a[i], b[i]);
    s += m * m;
  }
  return s;
}

double max_abs_weighted(const double* x, const double* w, std::size_t n) {
  float64x2_t m = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) m = max2(m, vmulq_f64(vabsq_f64(vld1q_f64(x + i)), vld1q_f64(w + i)));
  double r = hmax(m);
  for (; i < n; ++i) r = std::max(r, std::fabs(x[i]) * w[i]);
  return r;
}

}  // namespace

const KernelTable& neon_kernels() noexcept {
  static const KernelTable table{
      "neon",       dot,          sum_squares,  sum_abs,
      axpy,         abs_axpy,     max_update,   abs_max_update,
      shifted_abs_max_update,     scaled_diff,  max_abs_diff_weighted,
      sum_squares_of_max,         max_abs_weighted,
  };
  return table;
}

}  // namespace weyl::simd
