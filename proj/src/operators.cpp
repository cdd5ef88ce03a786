#include "weyl/operators.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <cmath>
#include <string>

#include "weyl/haar.hpp"
#include "weyl/kernels.hpp"
#include "weyl/parallel.hpp"
#include "weyl/rng.hpp"

namespace weyl {

const char* to_string(ChainKind kind) noexcept {
  switch (kind) {
    case ChainKind::Arbitrary: return "arbitrary";
    case ChainKind::Monotone: return "monotone";
    case ChainKind::SingletonIncrement: return "singleton-increment";
  }
  return "arbitrary";
}

ChainKind classify_chain(const std::vector<std::vector<std::size_t>>& sets) {
  if (sets.empty()) return ChainKind::Arbitrary;
  bool nested = true;
  bool singleton = sets.front().size() == 1;
  for (std::size_t i = 1; i < sets.size(); ++i) {
    const auto& prev = sets[i - 1];
    const auto& cur = sets[i];
    if (!std::includes(cur.begin(), cur.end(), prev.begin(), prev.end())) {
      nested = false;
      break;
    }
    if (cur.size() != prev.size() + 1) singleton = false;
  }
  if (!nested) return ChainKind::Arbitrary;
  return singleton ? ChainKind::SingletonIncrement : ChainKind::Monotone;
}

IndexChain make_chain(ChainKind kind, std::vector<std::vector<std::size_t>> sets,
                      std::size_t n_functions) {
  require(!sets.empty(), ErrorKind::Domain, "index chain is empty");
  for (auto& g : sets) {
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    for (std::size_t k : g) {
      require(k >= 1 && k <= n_functions, ErrorKind::Domain,
              "chain index " + std::to_string(k) + " outside 1.." + std::to_string(n_functions));
    }
  }
  const ChainKind actual = classify_chain(sets);
  if (kind == ChainKind::Monotone) {
    require(actual != ChainKind::Arbitrary, ErrorKind::Domain, "chain sets are not nested");
  } else if (kind == ChainKind::SingletonIncrement) {
    require(actual == ChainKind::SingletonIncrement, ErrorKind::Domain,
            "chain is not a singleton-increment chain");
  }
  return {kind, std::move(sets)};
}

CoefficientVector coefficients(const SampledFunction& f, const OrthonormalSystem& s) {
  require(f.grid() == s.grid, ErrorKind::Shape, "function and system live on different grids");
  const double w = s.grid.cell_width();
  return parallel_map<double>(s.size(), [&](std::size_t i) {
    return simd::dot(f.values(), s.functions[i].values()) * w;
  });
}

namespace {

void require_coefficients(const CoefficientVector& a, const OrthonormalSystem& s) {
  require(a.size() == s.size(), ErrorKind::Shape, "coefficient vector length differs from N");
}

void accumulate(SampledFunction& out, const CoefficientVector& a, const OrthonormalSystem& s,
                std::size_t first, std::size_t last) {
  for (std::size_t k = first; k <= last; ++k) {
    if (a[k - 1] != 0.0) simd::axpy(a[k - 1], s.phi(k).values(), out.values());
  }
}

}  // namespace

SampledFunction project(const CoefficientVector& a, const OrthonormalSystem& s,
                        std::span<const std::size_t> indices) {
  require_coefficients(a, s);
  SampledFunction out(s.grid);
  for (std::size_t k : indices) {
    require(k >= 1 && k <= s.size(), ErrorKind::Domain, "projection index out of range");
    if (a[k - 1] != 0.0) simd::axpy(a[k - 1], s.phi(k).values(), out.values());
  }
  return out;
}

SampledFunction project(const SampledFunction& f, const OrthonormalSystem& s,
                        std::span<const std::size_t> indices) {
  require(f.grid() == s.grid, ErrorKind::Shape, "function and system live on different grids");
  CoefficientVector a(s.size(), 0.0);
  const double w = s.grid.cell_width();
  for (std::size_t k : indices) {
    require(k >= 1 && k <= s.size(), ErrorKind::Domain, "projection index out of range");
    a[k - 1] = simd::dot(f.values(), s.phi(k).values()) * w;
  }
  return project(a, s, indices);
}

SampledFunction phi_partial(const CoefficientVector& a, const OrthonormalSystem& s, int n) {
  require_coefficients(a, s);
  require(n >= 0 && n < 63 && (std::size_t{1} << n) <= s.size(), ErrorKind::Domain,
          "phi_partial needs 2^n <= N");
  SampledFunction out(s.grid);
  accumulate(out, a, s, 1, std::size_t{1} << n);
  return out;
}

SampledFunction phi_block(const CoefficientVector& a, const OrthonormalSystem& s, int m) {
  require_coefficients(a, s);
  require(m >= 1 && m < 63 && (std::size_t{1} << m) <= s.size(), ErrorKind::Domain,
          "phi_block needs m >= 1 and 2^m <= N");
  SampledFunction out(s.grid);
  accumulate(out, a, s, (std::size_t{1} << (m - 1)) + 1, std::size_t{1} << m);
  return out;
}

std::vector<std::size_t> block_indices(int m, std::size_t n_functions) {
  std::vector<std::size_t> out;
  if (m == 0) {
    if (n_functions >= 1) out.push_back(1);
    return out;
  }
  const std::size_t first = (std::size_t{1} << (m - 1)) + 1;
  const std::size_t last = std::min(n_functions, std::size_t{1} << m);
  for (std::size_t k = first; k <= last; ++k) out.push_back(k);
  return out;
}

SampledFunction block_abs_sum(const CoefficientVector& a, const OrthonormalSystem& s, int m) {
  require_coefficients(a, s);
  SampledFunction out(s.grid);
  for (std::size_t k : block_indices(m, s.size())) {
    if (a[k - 1] != 0.0) simd::abs_axpy(a[k - 1], s.phi(k).values(), out.values());
  }
  return out;
}

SampledFunction modulate(const CoefficientVector& a, std::span<const double> lambda,
                         const OrthonormalSystem& s) {
  require_coefficients(a, s);
  require(lambda.size() == a.size(), ErrorKind::Shape, "lambda length differs from N");
  SampledFunction out(s.grid);
  for (std::size_t k = 0; k < a.size(); ++k) {
    require(std::fabs(lambda[k]) <= 1.0, ErrorKind::Domain, "modulation requires |lambda_k| <= 1");
    const double c = lambda[k] * a[k];
    if (c != 0.0) simd::axpy(c, s.functions[k].values(), out.values());
  }
  return out;
}

void for_each_chain_projection(const CoefficientVector& a, const OrthonormalSystem& s, const IndexChain& chain,
                               const std::function<void(std::size_t, const SampledFunction&)>& visit) {
  require_coefficients(a, s);
  SampledFunction current(s.grid);
  const std::vector<std::size_t>* prev = nullptr;
  std::vector<std::size_t> added, removed;
  for (std::size_t m = 0; m < chain.sets.size(); ++m) {
    const auto& g = chain.sets[m];
    for (std::size_t k : g) require(k >= 1 && k <= s.size(), ErrorKind::Domain, "chain index out of range");
    added.clear();
    removed.clear();
    if (prev != nullptr) {
      std::set_difference(g.begin(), g.end(), prev->begin(), prev->end(), std::back_inserter(added));
      std::set_difference(prev->begin(), prev->end(), g.begin(), g.end(), std::back_inserter(removed));
    }
    // Update by the symmetric difference when that is cheaper than rebuilding.
    if (prev != nullptr && added.size() + removed.size() < g.size()) {
      for (std::size_t k : removed) {
        if (a[k - 1] != 0.0) simd::axpy(-a[k - 1], s.phi(k).values(), current.values());
      }
      for (std::size_t k : added) {
        if (a[k - 1] != 0.0) simd::axpy(a[k - 1], s.phi(k).values(), current.values());
      }
    } else {
      current = project(a, s, g);
    }
    visit(m, current);
    prev = &g;
  }
}

SampledFunction chain_maximal(const CoefficientVector& a, const OrthonormalSystem& s,
                              const IndexChain& chain) {
  require(chain.length() >= 1, ErrorKind::Domain, "chain_maximal needs a nonempty chain");
  SampledFunction best(s.grid);
  for_each_chain_projection(a, s, chain, [&](std::size_t, const SampledFunction& pk) {
    simd::abs_max_update(pk.values(), best.values());
  });
  return best;
}

double default_majorant_q(double p, double delta) {
  require(p > 1.0, ErrorKind::Domain, "p must exceed 1");
  require(delta > 0.0 && delta < 1.0, ErrorKind::Domain, "delta must lie in (0,1)");
  return std::min({(p + 1.0) / 2.0, 1.0 / (1.0 - delta / 2.0), 1.5});
}

SampledFunction block_majorant(const CoefficientVector& a, const OrthonormalSystem& s, double q) {
  require_coefficients(a, s);
  require(q >= 1.0 && std::isfinite(q), ErrorKind::Domain, "majorant exponent q must be >= 1");
  if (s.delta && q > 1.0) {
    const double q_conj = q / (q - 1.0);
    require(q_conj * *s.delta > 1.0, ErrorKind::Domain,
            "majorant exponent violates q' * delta > 1 for this system");
  }
  std::vector<double> acc(s.grid.cell_count(), 0.0);
  CoefficientVector b = a;
  if (!b.empty()) b[0] = 0.0;
  for (int m = 1; (std::size_t{1} << (m - 1)) + 1 <= s.size(); ++m) {
    const SampledFunction block = block_abs_sum(b, s, m);
    const SampledFunction mq = hl_maximal(block, q);
    const auto v = mq.values();
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += v[i] * v[i];
  }
  for (double& v : acc) v = std::sqrt(v);
  return SampledFunction(s.grid, std::move(acc));
}

ModulatedSup modulated_square_sup(const CoefficientVector& a, const OrthonormalSystem& s,
                                  const SignSampler& sampler) {
  require_coefficients(a, s);
  std::vector<std::size_t> active;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] != 0.0) active.push_back(k);
  }
  ModulatedSup out{SampledFunction(s.grid), 0, false};
  if (active.empty()) {
    out.samples = 1;
    out.exact = true;
    return out;
  }

  if (active.size() <= sampler.exact_limit) {
    // S(-g) = S(g): fix the first sign and walk the rest in Gray-code order.
    SampledFunction t(s.grid);
    std::vector<double> sign(active.size(), 1.0);
    for (std::size_t k : active) simd::axpy(a[k], s.functions[k].values(), t.values());
    const std::uint64_t patterns = std::uint64_t{1} << (active.size() - 1);
    auto best = out.value.values();
    for (std::uint64_t i = 0; i < patterns; ++i) {
      if (i > 0) {
        const std::size_t b = 1 + static_cast<std::size_t>(std::countr_zero(i));
        const std::size_t k = active[b];
        simd::axpy(-2.0 * sign[b] * a[k], s.functions[k].values(), t.values());
        sign[b] = -sign[b];
      }
      simd::max_update(haar_square(t).values(), best);
    }
    out.samples = static_cast<std::size_t>(patterns);
    out.exact = true;
    return out;
  }

  require(sampler.samples >= 1, ErrorKind::Domain, "sign sampler needs at least one sample");
  const std::size_t groups = std::min<std::size_t>(64, sampler.samples);
  const auto partial = parallel_map<std::vector<double>>(groups, [&](std::size_t g) {
    std::vector<double> best(s.grid.cell_count(), 0.0);
    const std::size_t lo = sampler.samples * g / groups;
    const std::size_t hi = sampler.samples * (g + 1) / groups;
    for (std::size_t i = lo; i < hi; ++i) {
      auto rng = stream_rng(sampler.seed, i);
      SampledFunction t(s.grid);
      for (std::size_t k : active) {
        const double c = random_sign(rng) * a[k];
        simd::axpy(c, s.functions[k].values(), t.values());
      }
      simd::max_update(haar_square(t).values(), best);
    }
    return best;
  });
  for (const auto& p : partial) simd::max_update(p, out.value.values());
  out.samples = sampler.samples;
  return out;
}

}  // namespace weyl
