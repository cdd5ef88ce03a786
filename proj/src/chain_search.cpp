#include <algorithm>
#include <cmath>
#include <numeric>

#include "search_internal.hpp"
#include "weyl/error.hpp"
#include "weyl/kernels.hpp"
#include "weyl/rng.hpp"

namespace weyl::detail {
namespace {

double power_sum(const double* x, std::size_t n, double p) {
  if (p == 2.0) return simd::active().sum_squares(x, n);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::pow(std::abs(x[i]), p);
  return s;
}

double power_sum_of_max(const double* a, const double* b, std::size_t n, double p) {
  if (p == 2.0) return simd::active().sum_squares_of_max(a, b, n);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::pow(std::max(a[i], b[i]), p);
  return s;
}

// Accept a move only if it beats the current objective by more than rounding noise,
// so local searches cannot cycle on ties.
constexpr double kImprovement = 1e-12;

// Rows S_1..S_n (full length) and their pointwise max |S_k|. A move adds a dense
// delta on [lo, hi) to rows [k0, k1); trial() scores it without touching the rows.
class Rows {
 public:
  Rows(std::size_t n, std::size_t cells, double p)
      : rows_(n, std::vector<double>(cells, 0.0)), max_(cells, 0.0), acc_(cells), delta_(cells), p_(p) {}

  std::size_t size() const noexcept { return rows_.size(); }

  void add(std::size_t r, const Term& t, double scale) {
    if (t.hi <= t.lo) return;
    simd::active().axpy(scale * t.coeff, t.phi + t.lo, rows_[r].data() + t.lo, t.hi - t.lo);
  }

  void finalize() {
    std::fill(max_.begin(), max_.end(), 0.0);
    for (const auto& r : rows_) simd::active().abs_max_update(r.data(), max_.data(), max_.size());
    total_ = power_sum(max_.data(), max_.size(), p_);
  }

  void clear_delta(std::size_t lo, std::size_t hi) { std::fill(delta_.begin() + lo, delta_.begin() + hi, 0.0); }
  void add_delta(const Term& t, double scale) {
    if (t.hi <= t.lo) return;
    simd::active().axpy(scale * t.coeff, t.phi + t.lo, delta_.data() + t.lo, t.hi - t.lo);
  }

  /// Objective change if rows [k0, k1) gained the delta on [lo, hi).
  double trial(std::size_t k0, std::size_t k1, std::size_t lo, std::size_t hi) {
    if (hi <= lo || k0 >= k1) return 0.0;
    const auto& kt = simd::active();
    const std::size_t len = hi - lo;
    double* acc = acc_.data() + lo;
    std::fill(acc, acc + len, 0.0);
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const double* row = rows_[k].data() + lo;
      if (k >= k0 && k < k1) {
        kt.shifted_abs_max_update(row, delta_.data() + lo, acc, len);
      } else {
        kt.abs_max_update(row, acc, len);
      }
    }
    return power_sum(acc, len, p_) - power_sum(max_.data() + lo, len, p_);
  }

  bool improves(double gain) const noexcept { return gain > kImprovement * std::max(total_, 1e-300); }

  /// Applies the move last passed to trial().
  void commit(std::size_t k0, std::size_t k1, std::size_t lo, std::size_t hi, double gain) {
    for (std::size_t k = k0; k < k1; ++k) {
      double* row = rows_[k].data();
      for (std::size_t i = lo; i < hi; ++i) row[i] += delta_[i];
    }
    std::copy(acc_.begin() + lo, acc_.begin() + hi, max_.begin() + lo);
    total_ += gain;
  }

 private:
  std::vector<std::vector<double>> rows_;
  std::vector<double> max_;
  std::vector<double> acc_;
  std::vector<double> delta_;
  double p_;
  double total_ = 0.0;
};

std::pair<std::size_t, std::size_t> hull(const Term& a, const Term& b) {
  if (a.hi <= a.lo) return {b.lo, b.hi};
  if (b.hi <= b.lo) return {a.lo, a.hi};
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

// Depth-first enumeration of ordered n-subsets with in-place undo on support ranges.
class Exhaustive {
 public:
  Exhaustive(const std::vector<Term>& terms, const std::vector<std::size_t>& candidates, std::size_t n,
             std::size_t cells, double p)
      : terms_(terms), cand_(candidates), n_(n), p_(p), cur_(cells, 0.0), mx_(cells, 0.0),
        used_(candidates.size(), false) {}

  std::vector<std::size_t> run() {
    path_.clear();
    best_.clear();
    best_value_ = -1.0;
    dfs();
    return best_;
  }

 private:
  void dfs() {
    if (path_.size() == n_) {
      const double v = power_sum(mx_.data(), mx_.size(), p_);
      if (v > best_value_) {
        best_value_ = v;
        best_ = path_;
      }
      return;
    }
    std::vector<double> saved_cur, saved_mx;
    for (std::size_t c = 0; c < cand_.size(); ++c) {
      if (used_[c]) continue;
      const Term& t = terms_[cand_[c]];
      saved_cur.assign(cur_.begin() + t.lo, cur_.begin() + t.hi);
      saved_mx.assign(mx_.begin() + t.lo, mx_.begin() + t.hi);
      for (std::size_t i = t.lo; i < t.hi; ++i) {
        cur_[i] += t.coeff * t.phi[i];
        mx_[i] = std::max(mx_[i], std::abs(cur_[i]));
      }
      used_[c] = true;
      path_.push_back(cand_[c]);
      dfs();
      path_.pop_back();
      used_[c] = false;
      std::copy(saved_cur.begin(), saved_cur.end(), cur_.begin() + t.lo);
      std::copy(saved_mx.begin(), saved_mx.end(), mx_.begin() + t.lo);
    }
  }

  const std::vector<Term>& terms_;
  const std::vector<std::size_t>& cand_;
  std::size_t n_;
  double p_;
  std::vector<double> cur_, mx_;
  std::vector<bool> used_;
  std::vector<std::size_t> path_, best_;
  double best_value_ = -1.0;
};

// Inserts terms one at a time (in the given order) at the position that maximises
// the objective on the term's support: inserting v after S_i leaves S_1..S_i and
// shifts S_{i+1}.. by v, so the new max is max(PM_i, SM_i) with PM_i = max_{k<=i}|S_k|
// and SM_i = max_{k>=i}|S_k + v| (S_0 = 0).
std::vector<std::size_t> greedy_insertion(const std::vector<Term>& terms,
                                          const std::vector<std::size_t>& candidates, std::size_t cells,
                                          double p) {
  const auto& kt = simd::active();
  std::vector<std::size_t> order;
  std::vector<std::vector<double>> rows;  // S_1..S_t
  const std::vector<double> zero(cells, 0.0);
  std::vector<double> v, pm, sm_all;
  for (std::size_t pos : candidates) {
    const Term& t = terms[pos];
    const std::size_t lo = t.lo, hi = t.hi, len = hi > lo ? hi - lo : 0;
    const std::size_t count = rows.size();
    std::size_t best_i = count;
    if (len > 0 && count > 0) {
      v.resize(len);
      for (std::size_t i = 0; i < len; ++i) v[i] = t.coeff * t.phi[lo + i];
      // sm_all[i] = SM_i on [lo, hi) for i = 0..count
      sm_all.assign((count + 1) * len, 0.0);
      for (std::size_t i = count + 1; i-- > 0;) {
        double* sm = sm_all.data() + i * len;
        if (i < count) std::copy(sm + len, sm + 2 * len, sm);
        const double* s = i == 0 ? zero.data() + lo : rows[i - 1].data() + lo;
        kt.shifted_abs_max_update(s, v.data(), sm, len);
      }
      pm.assign(len, 0.0);
      double best = -1.0;
      for (std::size_t i = 0; i <= count; ++i) {
        if (i > 0) kt.abs_max_update(rows[i - 1].data() + lo, pm.data(), len);
        const double score = power_sum_of_max(pm.data(), sm_all.data() + i * len, len, p);
        if (score > best) {
          best = score;
          best_i = i;
        }
      }
    }
    std::vector<double> row = best_i == 0 ? zero : rows[best_i - 1];
    rows.insert(rows.begin() + static_cast<std::ptrdiff_t>(best_i), std::move(row));
    if (len > 0) {
      for (std::size_t k = best_i; k < rows.size(); ++k) {
        kt.axpy(t.coeff, t.phi + lo, rows[k].data() + lo, len);
      }
    }
    order.insert(order.begin() + static_cast<std::ptrdiff_t>(best_i), pos);
  }
  return order;
}

}  // namespace

std::pair<std::size_t, std::size_t> support_range(std::span<const double> f) {
  std::size_t lo = 0;
  while (lo < f.size() && f[lo] == 0.0) ++lo;
  if (lo == f.size()) return {0, 0};
  std::size_t hi = f.size();
  while (f[hi - 1] == 0.0) --hi;
  return {lo, hi};
}

std::size_t partial_permutations(std::size_t m, std::size_t n, std::size_t cap) {
  if (n > m) return 0;
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t f = m - i;
    if (total > (cap + 1) / f) return cap + 1;
    total *= f;
    if (total > cap) return cap + 1;
  }
  return total;
}

std::vector<std::size_t> search_sng(const std::vector<Term>& terms, const std::vector<std::size_t>& candidates,
                                    std::size_t n, std::size_t cells, double p, const SearchConfig& cfg,
                                    std::mt19937_64& rng) {
  require(candidates.size() >= n, ErrorKind::Domain, "search needs at least n candidate indices");
  if (partial_permutations(candidates.size(), n, cfg.exhaustive_limit) <= cfg.exhaustive_limit) {
    auto order = Exhaustive(terms, candidates, n, cells, p).run();
    for (std::size_t c : candidates) {
      if (std::find(order.begin(), order.end(), c) == order.end()) order.push_back(c);
    }
    return order;
  }
  require(candidates.size() == n, ErrorKind::Domain, "heuristic search expects exactly n candidates");
  auto order = greedy_insertion(terms, candidates, cells, p);

  Rows rows(n, cells, p);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i <= k; ++i) rows.add(k, terms[order[i]], 1.0);
  }
  rows.finalize();

  // Swapping order[i] < order[j] changes S_{i+1}..S_j by v_b - v_a.
  auto try_swap = [&](std::size_t i, std::size_t j) {
    const Term& a = terms[order[i]];
    const Term& b = terms[order[j]];
    const auto [lo, hi] = hull(a, b);
    if (hi <= lo) return false;
    rows.clear_delta(lo, hi);
    rows.add_delta(b, 1.0);
    rows.add_delta(a, -1.0);
    const double gain = rows.trial(i, j, lo, hi);
    if (!rows.improves(gain)) return false;
    rows.commit(i, j, lo, hi, gain);
    std::swap(order[i], order[j]);
    return true;
  };

  for (int pass = 0; pass < 8; ++pass) {
    bool changed = false;
    for (std::size_t i = 0; i + 1 < n; ++i) changed |= try_swap(i, i + 1);
    if (!changed) break;
  }
  if (n >= 2) {
    for (std::size_t it = 0; it < cfg.local_iterations; ++it) {
      std::size_t i = uniform_index(rng, n);
      std::size_t j = uniform_index(rng, n - 1);
      if (j >= i) ++j;
      if (i > j) std::swap(i, j);
      try_swap(i, j);
    }
  }
  return order;
}

std::vector<std::size_t> search_mon(const std::vector<Term>& terms, std::vector<std::size_t> entry,
                                    std::size_t n, std::size_t cells, double p, const SearchConfig& cfg,
                                    std::mt19937_64& rng) {
  (void)rng;  // the sweep is deterministic; the stream is reserved for future moves
  require(entry.size() == terms.size(), ErrorKind::Shape, "entry steps must cover every term");
  Rows rows(n, cells, p);
  for (std::size_t j = 0; j < terms.size(); ++j) {
    for (std::size_t k = entry[j] - 1; k < n; ++k) rows.add(k, terms[j], 1.0);
  }
  rows.finalize();

  // Entry e means rows e-1..n-1 (0-based) contain the term.
  auto try_move = [&](std::size_t j, std::size_t to) {
    const std::size_t from = entry[j];
    const Term& t = terms[j];
    if (t.hi <= t.lo) return false;
    const std::size_t k0 = std::min(from, to) - 1, k1 = std::max(from, to) - 1;
    rows.clear_delta(t.lo, t.hi);
    rows.add_delta(t, to < from ? 1.0 : -1.0);
    const double gain = rows.trial(k0, k1, t.lo, t.hi);
    if (!rows.improves(gain)) return false;
    rows.commit(k0, k1, t.lo, t.hi, gain);
    entry[j] = to;
    return true;
  };

  const std::size_t sweeps = std::max<std::size_t>(2, cfg.local_iterations / std::max<std::size_t>(terms.size(), 1));
  for (std::size_t sweep = 0; sweep < std::min<std::size_t>(sweeps, 4); ++sweep) {
    bool changed = false;
    for (std::size_t j = 0; j < terms.size(); ++j) {
      const std::size_t e = entry[j];
      const std::size_t options[4] = {1, e - 1, e + 1, n + 1};
      for (std::size_t to : options) {
        if (to < 1 || to > n + 1 || to == e) continue;
        if (try_move(j, to)) {
          changed = true;
          break;
        }
      }
    }
    if (!changed) break;
  }
  return entry;
}

std::vector<std::vector<std::int8_t>> search_full(const std::vector<Term>& terms,
                                                  std::vector<std::vector<std::int8_t>> lambda,
                                                  std::size_t cells, double p, const SearchConfig& cfg,
                                                  std::mt19937_64& rng) {
  const std::size_t n = lambda.size();
  const std::size_t m = terms.size();
  if (n == 0 || m == 0) return lambda;
  Rows rows(n, cells, p);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < m; ++j) {
      if (lambda[k][j] != 0) rows.add(k, terms[j], lambda[k][j]);
    }
  }
  rows.finalize();

  auto try_coord = [&](std::size_t k, std::size_t j) {
    const Term& t = terms[j];
    if (t.hi <= t.lo) return false;
    const int from = lambda[k][j];
    for (int to = -1; to <= 1; ++to) {
      if (to == from) continue;
      rows.clear_delta(t.lo, t.hi);
      rows.add_delta(t, static_cast<double>(to - from));
      const double gain = rows.trial(k, k + 1, t.lo, t.hi);
      if (rows.improves(gain)) {
        rows.commit(k, k + 1, t.lo, t.hi, gain);
        lambda[k][j] = static_cast<std::int8_t>(to);
        return true;
      }
    }
    return false;
  };

  if (n * m <= 4096) {
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t j = 0; j < m; ++j) try_coord(k, j);
    }
  }
  const std::size_t trials = 4 * cfg.local_iterations;
  for (std::size_t it = 0; it < trials; ++it) {
    const std::size_t k = uniform_index(rng, n);
    const std::size_t j = uniform_index(rng, m);
    try_coord(k, j);
  }
  return lambda;
}

}  // namespace weyl::detail
