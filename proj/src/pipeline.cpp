#include <algorithm>
#include <cmath>
#include <set>

#include "weyl/error.hpp"
#include "weyl/extremal.hpp"
#include "weyl/haar.hpp"
#include "weyl/kernels.hpp"

namespace weyl {

PipelineReport theorem1_pipeline(const CoefficientVector& a, const OrthonormalSystem& s, const IndexChain& chain,
                                 double p, double c, std::size_t lambda_count) {
  require(p >= 1.0 && std::isfinite(p), ErrorKind::Domain, "pipeline needs 1 <= p < infinity");
  require(c > 0.0 && std::isfinite(c), ErrorKind::Domain, "pipeline constant c must be positive");
  require(chain.length() >= 2, ErrorKind::Domain, "pipeline needs a chain of length n >= 2");
  require(a.size() == s.size(), ErrorKind::Shape, "coefficient vector length differs from N");

  PipelineReport rep;
  rep.n = chain.length();
  rep.p = p;
  rep.n_distinct = std::set<std::vector<std::size_t>>(chain.sets.begin(), chain.sets.end()).size();
  rep.eps_n = std::sqrt(c / std::log(static_cast<double>(rep.n)));

  std::vector<std::size_t> all(s.size());
  for (std::size_t k = 0; k < all.size(); ++k) all[k] = k + 1;
  const SampledFunction f = project(a, s, all);
  rep.norm_f = power_mean(f.values(), p);
  if (!(rep.norm_f > 0.0)) {
    rep.degenerate = true;
    return rep;
  }

  // Pass 1: p* = max_k |p_k| and P = max_k S(p_k).
  SampledFunction pstar(s.grid), square_sup(s.grid);
  for_each_chain_projection(a, s, chain, [&](std::size_t, const SampledFunction& pk) {
    simd::abs_max_update(pk.values(), pstar.values());
    simd::max_update(haar_square(pk).values(), square_sup.values());
  });
  rep.norm_pstar = power_mean(pstar.values(), p);
  rep.norm_square_sup = power_mean(square_sup.values(), p);
  rep.square_ratio = rep.norm_square_sup / rep.norm_f;
  rep.ratio = rep.norm_pstar / (std::sqrt(std::log2(static_cast<double>(rep.n_distinct) + 1.0)) * rep.norm_f);

  // Levels at the i/count quantiles of p*, positive ones only.
  std::vector<double> sorted(pstar.values().begin(), pstar.values().end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> lambdas;
  for (std::size_t i = 0; i < lambda_count; ++i) {
    const double v = sorted[i * sorted.size() / lambda_count];
    if (v > 0.0 && (lambdas.empty() || v != lambdas.back())) lambdas.push_back(v);
  }

  const std::size_t cells = s.grid.cell_count();
  rep.rows.resize(lambdas.size());
  for (std::size_t l = 0; l < lambdas.size(); ++l) {
    auto& row = rep.rows[l];
    row.lambda = lambdas[l];
    const double cut = rep.eps_n * row.lambda;
    for (std::size_t i = 0; i < cells; ++i) {
      const bool above = pstar[i] > row.lambda;
      const bool bad = square_sup[i] > cut;
      row.pstar_cells += above;
      row.a_cells += above && !bad;
      row.b_cells += bad;
    }
  }

  // Pass 2: good-lambda sums over k.
  for_each_chain_projection(a, s, chain, [&](std::size_t, const SampledFunction& pk) {
    const SampledFunction md = dyadic_maximal(pk);
    for (std::size_t l = 0; l < lambdas.size(); ++l) {
      auto& row = rep.rows[l];
      const double cut = rep.eps_n * row.lambda;
      std::size_t lhs = 0, rhs = 0;
      for (std::size_t i = 0; i < cells; ++i) {
        lhs += std::abs(pk[i]) > row.lambda && square_sup[i] <= cut;
        rhs += md[i] > row.lambda / 2.0;
      }
      row.good_lhs_cells += lhs;
      row.good_rhs_cells += rhs;
    }
  });

  for (const auto& row : rep.rows) {
    // {p* > lambda} lies in A u B, and each good set lies in {M^d p_k > lambda/2}.
    if (row.pstar_cells > row.a_cells + row.b_cells || row.good_lhs_cells > row.good_rhs_cells) {
      rep.inclusion_holds = false;
    }
  }
  return rep;
}

}  // namespace weyl
