#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "kernel_tables.hpp"

namespace weyl::simd {
namespace {

inline __m256d abs4(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

// Operand order mirrors std::max(acc, v): v wins only when strictly greater.
inline __m256d max4(__m256d acc, __m256d v) { return _mm256_max_pd(v, acc); }

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmax(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  return std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
}

double dot(const double* x, const double* y, std::size_t n) {
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    a0 = _mm256_add_pd(a0, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    a1 = _mm256_add_pd(a1, _mm256_mul_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4)));
  }
  for (; i + 4 <= n; i += 4) {
    a0 = _mm256_add_pd(a0, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  double s = hsum(_mm256_add_pd(a0, a1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double sum_squares(const double* x, std::size_t n) { return dot(x, x, n); }

double sum_abs(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, abs4(_mm256_loadu_pd(x + i)));
  double s = hsum(acc);
  for (; i < n; ++i) s += std::fabs(x[i]);
  return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_add_pd(_mm256_loadu_pd(y + i), _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    _mm256_storeu_pd(y + i, r);
  }
  for (; i < n; ++i) y[i] = y[i] + a * x[i];
}

void abs_axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r =
        _mm256_add_pd(_mm256_loadu_pd(y + i), abs4(_mm256_mul_pd(va, _mm256_loadu_pd(x + i))));
    _mm256_storeu_pd(y + i, r);
  }
  for (; i < n; ++i) y[i] = y[i] + std::fabs(a * x[i]);
}

void max_update(const double* x, double* acc, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(acc + i, max4(_mm256_loadu_pd(acc + i), _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) acc[i] = std::max(acc[i], x[i]);
}

void abs_max_update(const double* x, double* acc, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(acc + i, max4(_mm256_loadu_pd(acc + i), abs4(_mm256_loadu_pd(x + i))));
  }
  for (; i < n; ++i) acc[i] = std::max(acc[i], std::fabs(x[i]));
}

void shifted_abs_max_update(const double* s, const double* v, double* acc, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d sum = _mm256_add_pd(_mm256_loadu_pd(s + i), _mm256_loadu_pd(v + i));
    _mm256_storeu_pd(acc + i, max4(_mm256_loadu_pd(acc + i), abs4(sum)));
  }
  for (; i < n; ++i) acc[i] = std::max(acc[i], std::fabs(s[i] + v[i]));
}

void scaled_diff(const double* x, double base, const double* scale, double* out, std::size_t n) {
  const __m256d vb = _mm256_set1_pd(base);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), vb);
    _mm256_storeu_pd(out + i, _mm256_mul_pd(d, _mm256_loadu_pd(scale + i)));
  }
  for (; i < n; ++i) out[i] = (x[i] - base) * scale[i];
}

double max_abs_diff_weighted(const double* x, const double* y, const double* wx, const double* wy,
                             std::size_t n) {
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = abs4(_mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    const __m256d w = max4(_mm256_loadu_pd(wx + i), _mm256_loadu_pd(wy + i));
    m = max4(m, _mm256_mul_pd(d, w));
  }
  double r = hmax(m);
  for (; i < n; ++i) r = std::max(r, std::fabs(x[i] - y[i]) * std::max(wx[i], wy[i]));
  return r;
}

double sum_squares_of_max(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d m = max4(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(m, m));
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double m = std::max(a[i], b[i]);
    s += m * m;
  }
  return s;
}

double max_abs_weighted(const double* x, const double* w, std::size_t n) {
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    m = max4(m, _mm256_mul_pd(abs4(_mm256_loadu_pd(x + i)), _mm256_loadu_pd(w + i)));
  }
  double r = hmax(m);
  for (; i < n; ++i) r = std::max(r, std::fabs(x[i]) * w[i]);
  return r;
}

}  // namespace

const KernelTable& avx2_kernels() noexcept {
  static const KernelTable table{
      "avx2",       dot,          sum_squares,  sum_abs,
      axpy,         abs_axpy,     max_update,   abs_max_update,
      shifted_abs_max_update,     scaled_diff,  max_abs_diff_weighted,
      sum_squares_of_max,         max_abs_weighted,
  };
  return table;
}

}  // namespace weyl::simd
