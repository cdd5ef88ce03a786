#include <algorithm>
#include <cmath>
#include <map>

#include "weyl/haar.hpp"
#include "weyl/lemmas.hpp"

namespace weyl {

std::vector<CwwRow> check_cww(const SampledFunction& f, std::span<const double> eps,
                              std::span<const double> lambdas) {
  for (double e : eps) require(e > 0.0 && e < 1.0, ErrorKind::Domain, "CWW needs 0 < eps < 1");
  for (double l : lambdas) require(l > 0.0, ErrorKind::Domain, "CWW needs lambda > 0");
  const SampledFunction md = dyadic_maximal(f);
  const SampledFunction sq = haar_square(f);
  const double w = f.grid().cell_width();

  std::vector<CwwRow> rows;
  rows.reserve(eps.size() * lambdas.size());
  for (double lambda : lambdas) {
    std::size_t above = 0, above_half = 0;
    for (std::size_t i = 0; i < md.size(); ++i) {
      above += md[i] > lambda;
      above_half += md[i] > lambda / 2.0;
    }
    for (double e : eps) {
      std::size_t good = 0;
      for (std::size_t i = 0; i < md.size(); ++i) good += md[i] > lambda && sq[i] < e * lambda;
      CwwRow r;
      r.eps = e;
      r.lambda = lambda;
      r.lhs_cells = good;
      r.level_cells = above;
      r.rhs_cells = above_half;
      r.lhs = static_cast<double>(good) * w;
      r.rhs = static_cast<double>(above_half) * w;
      r.ratio = above_half > 0 ? static_cast<double>(good) / static_cast<double>(above_half) : 0.0;
      rows.push_back(r);
    }
  }
  return rows;
}

std::vector<double> cww_quantile_lambdas(const SampledFunction& f, std::size_t count) {
  const SampledFunction md = dyadic_maximal(f);
  std::vector<double> sorted(md.values().begin(), md.values().end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out;
  for (std::size_t i = 0; i < count; ++i) {
    const double v = sorted[i * sorted.size() / count];
    if (v > 0.0) out.push_back(v);
  }
  return out;
}

bool cww_inclusions_hold(std::span<const CwwRow> rows) {
  std::map<double, std::vector<const CwwRow*>> by_lambda;
  for (const auto& r : rows) {
    if (r.lhs_cells > r.level_cells || r.level_cells > r.rhs_cells) return false;
    by_lambda[r.lambda].push_back(&r);
  }
  for (auto& [lambda, group] : by_lambda) {
    std::sort(group.begin(), group.end(), [](const CwwRow* a, const CwwRow* b) { return a->eps < b->eps; });
    for (std::size_t i = 1; i < group.size(); ++i) {
      if (group[i]->lhs_cells < group[i - 1]->lhs_cells) return false;
    }
  }
  return true;
}

CwwFit fit_cww(std::span<const CwwRow> rows) {
  std::map<double, std::pair<double, double>> pooled;  // eps -> (sum lhs, sum rhs)
  for (const auto& r : rows) {
    if (r.rhs_cells == 0) continue;
    auto& acc = pooled[r.eps];
    acc.first += static_cast<double>(r.lhs_cells);
    acc.second += static_cast<double>(r.rhs_cells);
  }
  std::vector<double> xs, ys;
  for (const auto& [eps, acc] : pooled) {
    if (acc.first <= 0.0) continue;
    xs.push_back(1.0 / (eps * eps));
    ys.push_back(std::log(acc.first / acc.second));
  }
  CwwFit fit;
  fit.points = xs.size();
  if (xs.size() < 2) return fit;
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) return fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.c = -fit.slope;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

}  // namespace weyl
