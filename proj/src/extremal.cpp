#include "weyl/extremal.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "search_internal.hpp"
#include "weyl/error.hpp"
#include "weyl/kernels.hpp"
#include "weyl/parallel.hpp"
#include "weyl/rng.hpp"

namespace weyl {

const char* to_string(Variant v) noexcept {
  switch (v) {
    case Variant::Sng: return "sng";
    case Variant::Mon: return "mon";
    case Variant::Full: return "full";
  }
  return "?";
}

Variant parse_variant(const std::string& text) {
  if (text == "sng") return Variant::Sng;
  if (text == "mon") return Variant::Mon;
  if (text == "full") return Variant::Full;
  fail(ErrorKind::Domain, "unknown variant '" + text + "' (expected sng, mon or full)");
}

const char* to_string(GeneratorKind k) noexcept {
  switch (k) {
    case GeneratorKind::LevelSigns: return "level-signs";
    case GeneratorKind::UnitSigns: return "unit-signs";
    case GeneratorKind::EnumerateSigns: return "enumerate-signs";
    case GeneratorKind::Indicator: return "indicator";
    case GeneratorKind::Step: return "step";
  }
  return "?";
}

GeneratorKind parse_generator(const std::string& text) {
  for (auto k : {GeneratorKind::LevelSigns, GeneratorKind::UnitSigns, GeneratorKind::EnumerateSigns,
                 GeneratorKind::Indicator, GeneratorKind::Step}) {
    if (text == to_string(k)) return k;
  }
  fail(ErrorKind::Domain, "unknown generator '" + text + "'");
}

namespace {

// Stream layout per restart: stages 0..2 drive sng/mon/full, 3 draws the generator.
constexpr std::uint64_t kStreamsPerRestart = 4;
constexpr std::uint64_t kGeneratorStream = 3;

bool enumerates(const SearchConfig& cfg) {
  const bool any = std::find(cfg.generators.begin(), cfg.generators.end(), GeneratorKind::EnumerateSigns) !=
                   cfg.generators.end();
  require(!any || cfg.generators.size() == 1, ErrorKind::Domain,
          "enumerate-signs cannot be mixed with other generators");
  return any;
}

std::vector<std::size_t> active_indices(const OrthonormalSystem& s, const SearchConfig& cfg) {
  std::vector<std::size_t> idx = cfg.active;
  if (idx.empty()) {
    const std::size_t start = s.first_index_special ? 2 : 1;
    require(start + cfg.n - 1 <= s.size(), ErrorKind::Domain,
            "system has too few functions for the default active set");
    idx.resize(cfg.n);
    std::iota(idx.begin(), idx.end(), start);
  }
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  for (std::size_t k : idx) require(k >= 1 && k <= s.size(), ErrorKind::Domain, "active index out of range");
  return idx;
}

SampledFunction synthesize(const OrthonormalSystem& s, const std::vector<std::size_t>& indices,
                           const std::vector<double>& coeffs) {
  SampledFunction g(s.grid);
  for (std::size_t j = 0; j < indices.size(); ++j) {
    if (coeffs[j] != 0.0) simd::axpy(coeffs[j], s.phi(indices[j]).values(), g.values());
  }
  return g;
}

// Coefficients of f on every index, keeping the ones that are not rounding noise.
void from_function(const OrthonormalSystem& s, const SampledFunction& f, Generator& gen) {
  const CoefficientVector a = coefficients(f, s);
  double peak = 0.0;
  for (double v : a) peak = std::max(peak, std::abs(v));
  for (std::size_t k = 1; k <= a.size(); ++k) {
    if (peak > 0.0 && std::abs(a[k - 1]) > 1e-13 * peak) {
      gen.indices.push_back(k);
      gen.coeffs.push_back(a[k - 1]);
    }
  }
}

std::string row_from_entry(const std::vector<std::size_t>& entry, std::size_t k) {
  std::string row(entry.size(), '0');
  for (std::size_t j = 0; j < entry.size(); ++j) {
    if (entry[j] <= k) row[j] = '+';
  }
  return row;
}

std::vector<std::string> rows_from_entry(const std::vector<std::size_t>& entry, std::size_t n) {
  std::vector<std::string> rows;
  rows.reserve(n);
  for (std::size_t k = 1; k <= n; ++k) rows.push_back(row_from_entry(entry, k));
  return rows;
}

std::vector<std::string> rows_from_lambda(const std::vector<std::vector<std::int8_t>>& lambda) {
  std::vector<std::string> rows;
  for (const auto& l : lambda) {
    std::string row(l.size(), '0');
    for (std::size_t j = 0; j < l.size(); ++j) row[j] = l[j] > 0 ? '+' : (l[j] < 0 ? '-' : '0');
    rows.push_back(std::move(row));
  }
  return rows;
}

struct Outcome {
  bool ok = false;
  double value = 0.0;
  SearchWitness witness;
};

Outcome run_restart(const OrthonormalSystem& s, const SearchConfig& cfg, std::size_t restart,
                    const std::vector<std::pair<std::size_t, std::size_t>>& supports) {
  Outcome out;
  Generator gen = make_generator(s, cfg, restart);
  if (gen.indices.empty()) return out;
  const std::size_t n = cfg.n;
  const std::size_t cells = s.grid.cell_count();

  // Pad with zero-coefficient indices so a chain of n distinct steps exists.
  if (gen.indices.size() < n) {
    require(n <= s.size(), ErrorKind::Domain, "chain length exceeds the system size");
    std::vector<std::pair<std::size_t, double>> merged;
    for (std::size_t j = 0; j < gen.indices.size(); ++j) merged.emplace_back(gen.indices[j], gen.coeffs[j]);
    for (std::size_t k = 1; k <= s.size() && merged.size() < n; ++k) {
      if (std::find(gen.indices.begin(), gen.indices.end(), k) == gen.indices.end()) merged.emplace_back(k, 0.0);
    }
    std::sort(merged.begin(), merged.end());
    gen.indices.clear();
    gen.coeffs.clear();
    for (auto [k, c] : merged) {
      gen.indices.push_back(k);
      gen.coeffs.push_back(c);
    }
  }

  const std::size_t m = gen.indices.size();
  std::vector<detail::Term> terms(m);
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t k = gen.indices[j];
    terms[j] = {s.phi(k).values().data(), gen.coeffs[j], supports[k - 1].first, supports[k - 1].second};
  }

  std::vector<std::size_t> candidates(m);
  std::iota(candidates.begin(), candidates.end(), 0);
  if (m > n && detail::partial_permutations(m, n, cfg.exhaustive_limit) > cfg.exhaustive_limit) {
    std::stable_sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
      return std::abs(gen.coeffs[a]) > std::abs(gen.coeffs[b]);
    });
    candidates.resize(n);
    std::sort(candidates.begin(), candidates.end());
  }

  const std::uint64_t base = static_cast<std::uint64_t>(restart) * kStreamsPerRestart;
  auto rng_sng = stream_rng(cfg.seed, base);
  const auto order = detail::search_sng(terms, candidates, n, cells, cfg.p, cfg, rng_sng);
  std::vector<std::size_t> entry(m, n + 1);
  for (std::size_t i = 0; i < n; ++i) entry[order[i]] = i + 1;

  out.witness.generator = gen;
  out.witness.rows = rows_from_entry(entry, n);
  out.value = evaluate_witness(s, out.witness, cfg.p);
  if (m > n) {
    // Same additions on top of everything else: G_1 is the complement of the later
    // entries, so g_n = g. Also an sng chain; at n = 1 it is g itself.
    std::vector<std::size_t> filled(m, 1);
    for (std::size_t i = 1; i < n; ++i) filled[order[i]] = i + 1;
    SearchWitness w{gen, rows_from_entry(filled, n)};
    const double v = evaluate_witness(s, w, cfg.p);
    if (v > out.value) {
      out.value = v;
      out.witness = std::move(w);
      entry = std::move(filled);
    }
  }

  if (cfg.variant != Variant::Sng) {
    auto rng_mon = stream_rng(cfg.seed, base + 1);
    entry = detail::search_mon(terms, entry, n, cells, cfg.p, cfg, rng_mon);
    SearchWitness w{gen, rows_from_entry(entry, n)};
    const double v = evaluate_witness(s, w, cfg.p);
    if (v >= out.value) {
      out.value = v;
      out.witness = std::move(w);
    }
  }
  if (cfg.variant == Variant::Full) {
    std::vector<std::vector<std::int8_t>> lambda(n, std::vector<std::int8_t>(m, 0));
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t j = 0; j < m; ++j) lambda[k][j] = out.witness.rows[k][j] == '+' ? 1 : 0;
    }
    auto rng_full = stream_rng(cfg.seed, base + 2);
    lambda = detail::search_full(terms, std::move(lambda), cells, cfg.p, cfg, rng_full);
    SearchWitness w{gen, rows_from_lambda(lambda)};
    const double v = evaluate_witness(s, w, cfg.p);
    if (v >= out.value) {
      out.value = v;
      out.witness = std::move(w);
    }
  }
  out.ok = true;
  return out;
}

}  // namespace

Generator make_generator(const OrthonormalSystem& s, const SearchConfig& cfg, std::size_t restart) {
  require(!cfg.generators.empty(), ErrorKind::Domain, "no generator kinds configured");
  const bool enumerate = enumerates(cfg);
  const GeneratorKind kind = cfg.generators[restart % cfg.generators.size()];
  auto rng = stream_rng(cfg.seed, static_cast<std::uint64_t>(restart) * kStreamsPerRestart + kGeneratorStream);

  Generator gen;
  gen.id = std::string(to_string(kind)) + "#" + std::to_string(restart);
  switch (kind) {
    case GeneratorKind::LevelSigns:
    case GeneratorKind::UnitSigns:
    case GeneratorKind::EnumerateSigns: {
      gen.indices = active_indices(s, cfg);
      if (enumerate) {
        require(gen.indices.size() <= 20, ErrorKind::Resource, "enumerate-signs supports at most 20 indices");
        require(restart < (std::size_t{1} << gen.indices.size()), ErrorKind::Domain,
                "sign pattern index out of range");
      }
      for (std::size_t j = 0; j < gen.indices.size(); ++j) {
        const double sign = enumerate ? (((restart >> j) & 1U) ? -1.0 : 1.0) : static_cast<double>(random_sign(rng));
        const int level = center(static_cast<std::int64_t>(gen.indices[j])).level;
        const double scale = kind == GeneratorKind::UnitSigns ? 1.0 : std::sqrt(std::ldexp(1.0, -level));
        gen.coeffs.push_back(sign * scale);
      }
      break;
    }
    case GeneratorKind::Indicator: {
      const int top = std::max(1, std::min(s.grid.level(),
                                            static_cast<int>(std::bit_width(s.size())) - 1));
      const int level = 1 + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(top)));
      const std::uint64_t j = uniform_index(rng, std::uint64_t{1} << level);
      const double len = std::ldexp(1.0, -level);
      from_function(s, SampledFunction::indicator(s.grid, static_cast<double>(j) * len,
                                                  static_cast<double>(j + 1) * len),
                    gen);
      break;
    }
    case GeneratorKind::Step: {
      const int level = std::clamp(cfg.step_level, 0, s.grid.level());
      const std::size_t pieces = std::size_t{1} << level;
      std::vector<double> heights(pieces);
      for (double& h : heights) h = standard_normal(rng);
      const std::size_t per = s.grid.cell_count() / pieces;
      std::vector<double> values(s.grid.cell_count());
      for (std::size_t i = 0; i < values.size(); ++i) values[i] = heights[i / per];
      from_function(s, SampledFunction(s.grid, std::move(values)), gen);
      break;
    }
  }

  const double norm = power_mean(synthesize(s, gen.indices, gen.coeffs).values(), cfg.p);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    gen.indices.clear();
    gen.coeffs.clear();
    return gen;
  }
  for (double& c : gen.coeffs) c /= norm;
  return gen;
}

double evaluate_witness(const OrthonormalSystem& s, const SearchWitness& w, double p) {
  const auto& gen = w.generator;
  const std::size_t m = gen.indices.size();
  require(gen.coeffs.size() == m, ErrorKind::Shape, "generator indices and coefficients differ in length");
  for (std::size_t k : gen.indices) require(k >= 1 && k <= s.size(), ErrorKind::Domain, "witness index out of range");
  for (const auto& row : w.rows) {
    require(row.size() == m, ErrorKind::Shape, "witness row length differs from the generator");
    for (char c : row) require(c == '+' || c == '-' || c == '0', ErrorKind::Format, "witness rows use +, - and 0");
  }
  if (w.rows.empty() || m == 0) return 0.0;

  const std::size_t cells = s.grid.cell_count();
  std::vector<double> cur(cells, 0.0), mx(cells, 0.0);
  std::vector<int> prev(m, 0);
  for (const auto& row : w.rows) {
    for (std::size_t j = 0; j < m; ++j) {
      const int lam = row[j] == '+' ? 1 : (row[j] == '-' ? -1 : 0);
      if (lam == prev[j]) continue;
      const double scale = static_cast<double>(lam - prev[j]) * gen.coeffs[j];
      simd::axpy(scale, s.phi(gen.indices[j]).values(), cur);
      prev[j] = lam;
    }
    simd::abs_max_update(cur, mx);
  }
  const double denom = power_mean(synthesize(s, gen.indices, gen.coeffs).values(), p);
  if (!(denom > 0.0)) return 0.0;
  return power_mean(mx, p) / denom;
}

IndexChain witness_chain(const SearchWitness& w) {
  std::vector<std::vector<std::size_t>> sets;
  std::size_t top = 1;
  for (const auto& row : w.rows) {
    std::vector<std::size_t> g;
    for (std::size_t j = 0; j < row.size(); ++j) {
      require(row[j] != '-', ErrorKind::Domain, "witness with negative signs is not an index chain");
      if (row[j] == '+') g.push_back(w.generator.indices[j]);
    }
    sets.push_back(std::move(g));
  }
  for (std::size_t k : w.generator.indices) top = std::max(top, k);
  const ChainKind kind = classify_chain(sets);
  return make_chain(kind, std::move(sets), top);
}

EstimateRecord estimate_A(const OrthonormalSystem& s, const SearchConfig& cfg) {
  require(cfg.p >= 1.0 && std::isfinite(cfg.p), ErrorKind::Domain, "search needs 1 <= p < infinity");
  require(cfg.n >= 1, ErrorKind::Domain, "chain length n must be positive");
  require(cfg.n <= s.size(), ErrorKind::Domain, "chain length exceeds the system size");
  std::size_t restarts = cfg.restarts;
  if (enumerates(cfg)) {
    const std::size_t m = active_indices(s, cfg).size();
    require(m <= 20, ErrorKind::Resource, "enumerate-signs supports at most 20 indices");
    restarts = std::size_t{1} << m;
  }
  require(restarts >= 1, ErrorKind::Domain, "at least one restart is required");

  std::vector<std::pair<std::size_t, std::size_t>> supports(s.size());
  parallel_for(s.size(), [&](std::size_t i) { supports[i] = detail::support_range(s.functions[i].values()); });

  const auto outcomes =
      parallel_map<Outcome>(restarts, [&](std::size_t r) { return run_restart(s, cfg, r, supports); });

  EstimateRecord rec;
  rec.n = cfg.n;
  rec.variant = cfg.variant;
  rec.p = cfg.p;
  bool found = false;
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    if (!outcomes[r].ok) continue;
    ++rec.evaluated_restarts;
    if (!found || outcomes[r].value > rec.best_value) {
      found = true;
      rec.best_value = outcomes[r].value;
      rec.restart = r;
      rec.witness = outcomes[r].witness;
    }
  }
  require(found, ErrorKind::Numeric, "every generator was degenerate (zero norm)");
  const double l = std::log2(static_cast<double>(cfg.n) + 1.0);
  rec.ratio_sqrt = rec.best_value / std::sqrt(l);
  rec.ratio_log = rec.best_value / l;
  return rec;
}

GrowthFit fit_growth(std::span<const std::size_t> n, std::span<const double> values) {
  require(n.size() == values.size(), ErrorKind::Shape, "growth fit needs one value per n");
  require(n.size() >= 4, ErrorKind::Domain, "growth fit needs at least 4 points");
  std::vector<std::size_t> sorted(n.begin(), n.end());
  std::sort(sorted.begin(), sorted.end());
  require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), ErrorKind::Domain,
          "growth fit needs distinct n");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < n.size(); ++i) {
    require(n[i] >= 1 && values[i] > 0.0 && std::isfinite(values[i]), ErrorKind::Domain,
            "growth fit needs n >= 1 and positive finite values");
    xs.push_back(std::log(std::log2(static_cast<double>(n[i]) + 1.0)));
    ys.push_back(std::log(values[i]));
  }
  const double count = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / count;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / count;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  GrowthFit fit;
  fit.points = xs.size();
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / count);
  fit.r_squared = syy > 0.0 ? 1.0 - ss / syy : 1.0;
  return fit;
}

GrowthFit fit_growth(std::span<const EstimateRecord> records) {
  std::vector<std::size_t> n;
  std::vector<double> v;
  for (const auto& r : records) {
    n.push_back(r.n);
    v.push_back(r.best_value);
  }
  return fit_growth(n, v);
}

}  // namespace weyl
