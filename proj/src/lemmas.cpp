#include "weyl/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "weyl/haar.hpp"
#include "weyl/kernels.hpp"
#include "weyl/parallel.hpp"
#include "weyl/rng.hpp"

namespace weyl {

double ConstantEstimate::offer(double lhs, double rhs, const Witness& w) {
  if (lhs == 0.0) return 0.0;
  const double r = rhs > 0.0 ? lhs / rhs : std::numeric_limits<double>::infinity();
  if (r > ratio_sup) {
    ratio_sup = r;
    witness = w;
  }
  return r;
}

void ConstantEstimate::merge(const ConstantEstimate& other) {
  if (other.ratio_sup > ratio_sup) {
    ratio_sup = other.ratio_sup;
    witness = other.witness;
  }
  samples += other.samples;
  level = std::max(level, other.level);
}

std::vector<double> sample_points(std::size_t count) {
  std::vector<double> x(count);
  for (std::size_t i = 0; i < count; ++i) {
    x[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(count);
  }
  return x;
}

CoefficientVector random_coefficients(std::size_t n_functions, std::uint64_t seed, std::uint64_t index) {
  auto rng = stream_rng(seed, index);
  CoefficientVector a(n_functions, 0.0);
  for (std::size_t k = 1; k < n_functions; ++k) a[k] = standard_normal(rng);
  return a;
}

SampledFunction random_step_function(const DyadicGrid& grid, int coarse_level, std::uint64_t seed,
                                     std::uint64_t index) {
  require(coarse_level >= 0 && coarse_level <= grid.level(), ErrorKind::Domain,
          "step level must lie in [0, J]");
  auto rng = stream_rng(seed, index);
  const std::size_t pieces = std::size_t{1} << coarse_level;
  const std::size_t width = grid.cell_count() >> coarse_level;
  SampledFunction f(grid);
  for (std::size_t p = 0; p < pieces; ++p) {
    const double v = standard_normal(rng);
    for (std::size_t i = 0; i < width; ++i) f[p * width + i] = v;
  }
  return f;
}

double stability_ratio(double fine, double coarse) {
  if (fine == 0.0 && coarse == 0.0) return 1.0;
  if (fine == 0.0 || coarse == 0.0) return std::numeric_limits<double>::infinity();
  return fine / coarse;
}

namespace {

double system_delta(const OrthonormalSystem& s) {
  require(s.delta.has_value(), ErrorKind::Domain, "system has no fitted delta");
  return *s.delta;
}

double system_alpha(const OrthonormalSystem& s) { return s.alpha.value_or(1.0); }

void require_block(const OrthonormalSystem& s, int m) {
  require(m >= 1 && m < 63 && (std::size_t{1} << m) <= s.size(), ErrorKind::Domain,
          "block m needs 1 <= m and 2^m <= N");
}

// Pointwise sup of |lhs| / rhs over every cell.
void offer_cells(ConstantEstimate& est, const SampledFunction& lhs, const SampledFunction& rhs,
                 const Witness& base) {
  Witness w = base;
  const auto& grid = lhs.grid();
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    const double l = std::fabs(lhs[i]);
    if (l == 0.0) continue;
    const double r = rhs[i];
    if (r > 0.0 && l / r <= est.ratio_sup) continue;
    w.point = grid.midpoint(i);
    est.offer(l, r, w);
  }
}

}  // namespace

ConstantEstimate check_kernel_block(const OrthonormalSystem& s, int m, std::span<const double> points) {
  const double delta = system_delta(s);
  require_block(s, m);
  const auto idx = block_indices(m, s.size());
  const std::size_t np = points.size();
  std::vector<std::vector<double>> v(idx.size(), std::vector<double>(np));
  for (std::size_t b = 0; b < idx.size(); ++b) {
    const auto& phi = s.phi(idx[b]);
    for (std::size_t i = 0; i < np; ++i) v[b][i] = std::fabs(phi.at(points[i]));
  }
  const double scale = std::ldexp(1.0, m);
  const auto rows = parallel_map<ConstantEstimate>(np, [&](std::size_t i) {
    ConstantEstimate est;
    Witness w{"block", points[i], 0.0, {{"m", m}}};
    for (std::size_t j = 0; j < np; ++j) {
      double lhs = 0.0;
      for (std::size_t b = 0; b < idx.size(); ++b) lhs += v[b][i] * v[b][j];
      w.point2 = points[j];
      est.offer(lhs, scale * xi(scale * (points[i] - points[j]), delta), w);
    }
    return est;
  });
  ConstantEstimate out;
  for (const auto& r : rows) out.merge(r);
  out.samples = np * np;
  out.level = s.grid.level();
  return out;
}

DominationPair check_block_domination(const OrthonormalSystem& s, const CoefficientVector& a, int m) {
  require_block(s, m);
  require(a.size() == s.size(), ErrorKind::Shape, "coefficient vector length differs from N");
  SampledFunction haar_sum(s.grid);
  for (std::size_t k : block_indices(m, s.size())) {
    if (a[k - 1] != 0.0) simd::axpy(a[k - 1], haar_function(k, s.grid).values(), haar_sum.values());
  }
  const SampledFunction block = block_abs_sum(a, s, m);
  const SampledFunction m_haar = hl_maximal(haar_sum, 1.0);
  const SampledFunction m_block = hl_maximal(block, 1.0);

  DominationPair out;
  const Witness base{"coefficients", 0.0, 0.0, {{"m", m}}};
  offer_cells(out.block_by_haar, block, m_haar, base);
  offer_cells(out.haar_by_block, m_haar, m_block, base);
  out.block_by_haar.samples = out.haar_by_block.samples = s.grid.cell_count();
  out.block_by_haar.level = out.haar_by_block.level = s.grid.level();
  return out;
}

IndicatorDecay check_indicator_decay(const OrthonormalSystem& s, double a, double b, int m) {
  const double delta = system_delta(s);
  require_block(s, m);
  IndicatorDecay out;
  out.everywhere.level = out.far_field.level = s.grid.level();
  out.everywhere.samples = out.far_field.samples = s.grid.cell_count();
  if (!(b > a)) return out;
  const SampledFunction ind = SampledFunction::indicator(s.grid, a, b);
  const SampledFunction d = phi_block(coefficients(ind, s), s, m);
  const double scale = std::ldexp(1.0, m);
  const double len = b - a;
  Witness w{"indicator", 0.0, 0.0, {{"m", m}, {"a", a}, {"b", b}}};
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double x = s.grid.midpoint(i);
    const double lhs = std::fabs(d[i]);
    w.point = x;
    const double near = std::pow(1.0 + scale * std::fabs(x - a), -delta) +
                        std::pow(1.0 + scale * std::fabs(x - b), -delta);
    out.everywhere.offer(lhs, near, w);
    const bool outside_double = x < a - len / 2.0 || x >= b + len / 2.0;
    if (outside_double) out.far_field.offer(lhs, scale * len * xi(scale * (x - a), delta), w);
  }
  return out;
}

ConstantEstimate check_haar_phi_interaction(InteractionCache& cache, int n, int m,
                                            InteractionBranch branch) {
  const OrthonormalSystem& s = *cache.system;
  const CoefficientVector& a = *cache.coeffs;
  require_block(s, m);
  require(n >= 1 && n <= s.grid.level(), ErrorKind::Domain, "Haar level n must lie in [1, J]");
  if (branch == InteractionBranch::Auto) {
    branch = n > m ? InteractionBranch::HaarBlock : InteractionBranch::HaarPartial;
  }
  if (!cache.block.count(m)) cache.block.emplace(m, phi_block(a, s, m));
  const SampledFunction& block = cache.block.at(m);

  ConstantEstimate est;
  est.level = s.grid.level();
  est.samples = s.grid.cell_count();
  Witness base{"coefficients", 0.0, 0.0, {{"n", n}, {"m", m}}};
  if (branch == InteractionBranch::HaarBlock) {
    require(n >= m, ErrorKind::Domain, "the Delta H_n branch needs n >= m");
    if (!cache.block_abs_max.count(m)) {
      cache.block_abs_max.emplace(m, hl_maximal(block_abs_sum(a, s, m), 1.0));
    }
    const double factor = std::pow(2.0, system_alpha(s) * (m - n));
    const SampledFunction rhs = factor * cache.block_abs_max.at(m);
    base.params["branch"] = 1;
    offer_cells(est, haar_block(block, n), rhs, base);
  } else {
    require(m >= n, ErrorKind::Domain, "the H_n branch needs m >= n");
    const double q = cache.q;
    require(q > 1.0, ErrorKind::Domain, "the H_n branch needs q > 1");
    const double q_conj = q / (q - 1.0);
    require(q_conj * system_delta(s) > 1.0, ErrorKind::Domain, "the H_n branch needs q' * delta > 1");
    if (!cache.block_mq.count(m)) cache.block_mq.emplace(m, hl_maximal(block, q));
    const SampledFunction rhs = std::pow(2.0, (n - m) / q_conj) * cache.block_mq.at(m);
    base.params["branch"] = 2;
    base.params["q"] = q;
    offer_cells(est, haar_partial(block, n), rhs, base);
  }
  return est;
}

ConstantEstimate check_haar_phi_interaction(const OrthonormalSystem& s, const CoefficientVector& a,
                                            int n, int m, double q, InteractionBranch branch) {
  require(a.size() == s.size(), ErrorKind::Shape, "coefficient vector length differs from N");
  InteractionCache cache{&s, &a, q, {}, {}, {}};
  return check_haar_phi_interaction(cache, n, m, branch);
}

LittlewoodPaley check_littlewood_paley(const OrthonormalSystem& s, const SampledFunction& f, double p,
                                       std::size_t sign_samples, std::uint64_t seed) {
  require(p > 1.0, ErrorKind::Domain, "Littlewood-Paley check needs p > 1");
  require(sign_samples >= 1, ErrorKind::Domain, "need at least one random sign vector");
  const CoefficientVector a = coefficients(f, s);
  const double norm_f = lp_norm(f, p);

  std::vector<double> blocks(s.grid.cell_count(), 0.0);
  for (int m = 1; (std::size_t{1} << (m - 1)) + 1 <= s.size(); ++m) {
    const SampledFunction b = block_abs_sum(a, s, m);
    for (std::size_t i = 0; i < blocks.size(); ++i) blocks[i] += b[i] * b[i];
  }
  std::vector<double> squares(s.grid.cell_count(), 0.0);
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (a[k] == 0.0) continue;
    const auto phi = s.functions[k].values();
    for (std::size_t i = 0; i < squares.size(); ++i) squares[i] += a[k] * a[k] * phi[i] * phi[i];
  }
  for (double& v : blocks) v = std::sqrt(v);
  for (double& v : squares) v = std::sqrt(v);

  const auto per_sample = parallel_map<double>(sign_samples, [&](std::size_t i) {
    auto rng = stream_rng(seed, i);
    std::vector<double> g(s.grid.cell_count(), 0.0);
    for (std::size_t k = 0; k < s.size(); ++k) {
      const double c = random_sign(rng) * a[k];
      if (c != 0.0) simd::axpy(c, s.functions[k].values(), g);
    }
    return std::pow(power_mean(g, p), p);
  });
  double mean = 0.0;
  for (double v : per_sample) mean += v;
  const double random_norm = std::pow(mean / static_cast<double>(sign_samples), 1.0 / p);
  const double square_norm = power_mean(squares, p);

  LittlewoodPaley out;
  const Witness w{"f", 0.0, 0.0, {{"p", p}}};
  out.block_square.offer(power_mean(blocks, p), norm_f, w);
  out.square_over_random.offer(square_norm, random_norm, w);
  out.random_over_square.offer(random_norm, square_norm, w);
  for (auto* e : {&out.block_square, &out.square_over_random, &out.random_over_square}) {
    e->samples = sign_samples;
    e->level = s.grid.level();
  }
  return out;
}

ConstantEstimate check_convolution_inequality(std::span<const double> a, std::span<const double> b) {
  ConstantEstimate est;
  est.samples = 1;
  if (a.empty() || b.empty()) return est;
  std::vector<double> conv(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) conv[i + j] += std::fabs(a[i]) * std::fabs(b[j]);
  }
  double l2a = 0.0, l1b = 0.0, lhs = 0.0;
  for (double v : a) l2a += v * v;
  for (double v : b) l1b += std::fabs(v);
  for (double v : conv) lhs += v * v;
  est.offer(std::sqrt(lhs), std::sqrt(l2a) * l1b,
            {"pair", 0.0, 0.0, {{"len_a", static_cast<double>(a.size())}, {"len_b", static_cast<double>(b.size())}}});
  return est;
}

ConstantEstimate convolution_trials(std::size_t trials, std::uint64_t seed) {
  ConstantEstimate out;
  for (std::size_t t = 0; t < trials; ++t) {
    auto rng = stream_rng(seed, t);
    auto draw = [&] {
      std::vector<double> v(1 + uniform_index(rng, 32));
      for (double& x : v) x = static_cast<double>(static_cast<int>(uniform_index(rng, 19)) - 9);
      return v;
    };
    const auto a = draw();
    const auto b = draw();
    ConstantEstimate e = check_convolution_inequality(a, b);
    if (e.ratio_sup > 0.0) {
      e.witness.input = "trial";
      e.witness.params["trial"] = static_cast<double>(t);
    }
    out.merge(e);
  }
  out.samples = trials;
  return out;
}

ConstantEstimate check_fefferman_stein(const std::vector<SampledFunction>& family, double p, double q) {
  require(p > 1.0, ErrorKind::Domain, "Fefferman-Stein check needs p > 1");
  require(q >= 1.0 && q < std::min(2.0, p), ErrorKind::Domain, "Fefferman-Stein needs 1 <= q < min(2,p)");
  ConstantEstimate est;
  est.samples = family.size();
  if (family.empty()) return est;
  const DyadicGrid grid = family.front().grid();
  est.level = grid.level();
  std::vector<double> lhs(grid.cell_count(), 0.0);
  std::vector<double> rhs(grid.cell_count(), 0.0);
  for (const auto& g : family) {
    require(g.grid() == grid, ErrorKind::Shape, "family members live on different grids");
    const SampledFunction mg = hl_maximal(g, q);
    for (std::size_t i = 0; i < lhs.size(); ++i) {
      lhs[i] += mg[i] * mg[i];
      rhs[i] += g[i] * g[i];
    }
  }
  for (double& v : lhs) v = std::sqrt(v);
  for (double& v : rhs) v = std::sqrt(v);
  est.offer(power_mean(lhs, p), power_mean(rhs, p),
            {"family", 0.0, 0.0, {{"p", p}, {"q", q}, {"members", static_cast<double>(family.size())}}});
  return est;
}

CzEstimate check_cz_kernel(const OrthonormalSystem& s, std::span<const double> lambda, double beta,
                           std::span<const double> points) {
  const double delta = system_delta(s);
  const double alpha = system_alpha(s);
  require(beta > 0.0 && beta < std::min(alpha, delta), ErrorKind::Domain,
          "CZ smoothness exponent needs 0 < beta < min(alpha, delta)");
  require(lambda.size() == s.size(), ErrorKind::Shape, "lambda length differs from N");
  for (double l : lambda) require(std::fabs(l) <= 1.0, ErrorKind::Domain, "CZ kernel needs |lambda_k| <= 1");
  const std::size_t np = points.size();
  for (std::size_t i = 1; i < np; ++i) {
    require(points[i] > points[i - 1], ErrorKind::Domain, "sample points must be increasing");
  }

  std::vector<std::vector<double>> v(s.size(), std::vector<double>(np));
  for (std::size_t k = 0; k < s.size(); ++k) {
    for (std::size_t i = 0; i < np; ++i) v[k][i] = s.functions[k].at(points[i]);
  }
  std::vector<double> kernel(np * np, 0.0);
  parallel_for(np, [&](std::size_t i) {
    for (std::size_t k = 0; k < s.size(); ++k) {
      const double c = lambda[k] * v[k][i];
      if (c != 0.0) simd::axpy(c, v[k], std::span<double>(kernel.data() + i * np, np));
    }
  });

  // Distance powers, tabulated once: |t - t'|^beta and |x - t|^{1+beta}.
  std::vector<double> pow_beta(np * np, 0.0);
  std::vector<double> pow_outer(np * np, 0.0);
  for (std::size_t i = 0; i < np; ++i) {
    for (std::size_t j = 0; j < np; ++j) {
      const double d = std::fabs(points[i] - points[j]);
      pow_beta[i * np + j] = std::pow(d, beta);
      pow_outer[i * np + j] = std::pow(d, 1.0 + beta);
    }
  }

  const auto rows = parallel_map<CzEstimate>(np, [&](std::size_t i) {
    CzEstimate est;
    const double x = points[i];
    const double* ki = kernel.data() + i * np;
    Witness w{"kernel", x, 0.0, {{"beta", beta}}};
    for (std::size_t j = 0; j < np; ++j) {
      if (j == i) continue;
      const double dxt = std::fabs(x - points[j]);
      w.point2 = points[j];
      w.params.erase("t_prime");
      est.size.offer(std::fabs(ki[j]), 1.0 / dxt, w);
      const double outer = pow_outer[i * np + j];
      for (std::size_t jp = 0; jp < np; ++jp) {
        if (jp == j) continue;
        const double dtt = std::fabs(points[j] - points[jp]);
        if (!(dxt > 2.0 * dtt)) continue;
        const double lhs = std::fabs(ki[j] - ki[jp]);
        const double rhs = pow_beta[j * np + jp] / outer;
        if (lhs == 0.0 || lhs / rhs <= est.smoothness.ratio_sup) continue;
        w.params["t_prime"] = points[jp];
        est.smoothness.offer(lhs, rhs, w);
      }
    }
    return est;
  });
  CzEstimate out;
  for (const auto& r : rows) {
    out.size.merge(r.size);
    out.smoothness.merge(r.smoothness);
  }
  out.size.samples = np * (np - 1);
  out.smoothness.samples = np * np * np;
  out.size.level = out.smoothness.level = s.grid.level();
  return out;
}

}  // namespace weyl
