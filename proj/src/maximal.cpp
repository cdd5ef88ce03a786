#include <algorithm>
#include <cmath>

#include "weyl/kernels.hpp"
#include "weyl/operators.hpp"
#include "weyl/parallel.hpp"

namespace weyl {

const char* to_string(MaximalMode mode) noexcept {
  switch (mode) {
    case MaximalMode::Auto: return "auto";
    case MaximalMode::Exact: return "exact";
    case MaximalMode::DyadicWindows: return "dyadic-windows";
  }
  return "auto";
}

namespace {

std::vector<double> powered(const SampledFunction& f, double q) {
  std::vector<double> g(f.size());
  const auto v = f.values();
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] = q == 1.0 ? std::fabs(v[i]) : std::pow(std::fabs(v[i]), q);
  }
  return g;
}

std::vector<double> prefix_sums(const std::vector<double>& g) {
  std::vector<double> p(g.size() + 1, 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) p[i + 1] = p[i] + g[i];
  return p;
}

// For a fixed left end a, the averages over [a, b) are scanned for every b, and the
// suffix maximum over b > x is the best interval starting at a that covers x.
std::vector<double> exact_scan(const std::vector<double>& g) {
  const std::size_t n = g.size();
  const auto prefix = prefix_sums(g);
  std::vector<double> recip(n);
  for (std::size_t i = 0; i < n; ++i) recip[i] = 1.0 / static_cast<double>(i + 1);

  const std::size_t groups = std::min<std::size_t>(16, n);
  const auto partial = parallel_map<std::vector<double>>(groups, [&](std::size_t grp) {
    std::vector<double> best(n, 0.0);
    std::vector<double> avg(n);
    for (std::size_t a = grp; a < n; a += groups) {
      const std::size_t len = n - a;
      simd::active().scaled_diff(prefix.data() + a + 1, prefix[a], recip.data(), avg.data(), len);
      for (std::size_t i = len - 1; i-- > 0;) avg[i] = std::max(avg[i], avg[i + 1]);
      simd::active().max_update(avg.data(), best.data() + a, len);
    }
    return best;
  });
  std::vector<double> best(g);  // the cell itself, free of prefix-difference rounding
  for (const auto& p : partial) simd::max_update(p, best);
  return best;
}

std::vector<double> window_scan(const std::vector<double>& g) {
  const std::size_t n = g.size();
  const auto prefix = prefix_sums(g);
  std::vector<double> best(g);
  auto apply = [&](std::size_t lo, std::size_t hi) {
    hi = std::min(hi, n);
    if (hi <= lo) return;
    const double avg = (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
    for (std::size_t i = lo; i < hi; ++i) best[i] = std::max(best[i], avg);
  };
  for (std::size_t len = 2; len <= 4; ++len) {
    for (std::size_t lo = 0; lo + 1 < n; ++lo) apply(lo, lo + len);
  }
  for (std::size_t step = 2; step < n; step *= 2) {
    for (std::size_t k = 2; k <= 5; ++k) {
      for (std::size_t lo = 0; lo < n; lo += step) apply(lo, lo + k * step);
    }
  }
  apply(0, n);
  return best;
}

}  // namespace

SampledFunction hl_maximal(const SampledFunction& f, double q, MaximalMode mode, MaximalMode* used) {
  require(q >= 1.0 && std::isfinite(q), ErrorKind::Domain, "M_q requires q >= 1");
  const int level = f.grid().level();
  if (mode == MaximalMode::Auto) {
    mode = level <= kExactMaximalLevel ? MaximalMode::Exact : MaximalMode::DyadicWindows;
  }
  require(mode != MaximalMode::Exact || level <= kExactMaximalLevel, ErrorKind::Resource,
          "exact M_q is limited to J <= 12");
  if (used != nullptr) *used = mode;

  const auto g = powered(f, q);
  auto m = mode == MaximalMode::Exact ? exact_scan(g) : window_scan(g);
  if (q != 1.0) {
    // Undoing the power can round below |f|; the cell itself is always admissible.
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::max(std::pow(m[i], 1.0 / q), std::fabs(f[i]));
  }
  return SampledFunction(f.grid(), std::move(m));
}

SampledFunction dyadic_maximal(const SampledFunction& f) {
  const int level = f.grid().level();
  SampledFunction out(f.grid());
  if (level == 0) {
    // No level >= 1 exists; the only dyadic interval is the cell itself.
    out[0] = std::fabs(f[0]);
    return out;
  }
  // sums[n][j] = integral-free sum of |f| over the j-th level-n interval.
  std::vector<std::vector<double>> sums(static_cast<std::size_t>(level) + 1);
  sums[level].resize(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) sums[level][i] = std::fabs(f[i]);
  for (int n = level - 1; n >= 1; --n) {
    auto& cur = sums[n];
    const auto& finer = sums[n + 1];
    cur.resize(finer.size() / 2);
    for (std::size_t j = 0; j < cur.size(); ++j) cur[j] = finer[2 * j] + finer[2 * j + 1];
  }
  std::vector<double> best(2);
  const double w1 = static_cast<double>(f.size() >> 1);
  for (std::size_t j = 0; j < 2; ++j) best[j] = sums[1][j] / w1;
  for (int n = 2; n <= level; ++n) {
    const double width = static_cast<double>(f.size() >> n);
    std::vector<double> next(best.size() * 2);
    for (std::size_t j = 0; j < next.size(); ++j) {
      next[j] = std::max(best[j / 2], sums[n][j] / width);
    }
    best.swap(next);
  }
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = best[i];
  return out;
}

}  // namespace weyl
