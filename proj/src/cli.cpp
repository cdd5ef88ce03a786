#include "weyl/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>

#include <CLI11.hpp>

#include "weyl/error.hpp"
#include "weyl/extremal.hpp"
#include "weyl/haar.hpp"
#include "weyl/lemmas.hpp"
#include "weyl/operators.hpp"
#include "weyl/parallel.hpp"
#include "weyl/report.hpp"
#include "weyl/rng.hpp"
#include "weyl/systems.hpp"

namespace weyl::cli {
namespace {

using report::Json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// small parsers

std::uint64_t parse_u64(const std::string& text, const char* what) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end) throw UsageError(std::string("invalid ") + what + ": '" + text + "'");
  return v;
}

double parse_number(const std::string& text, const char* what) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  require(!text.empty() && end == text.c_str() + text.size() && std::isfinite(v), ErrorKind::Format,
          std::string("invalid ") + what + ": '" + text + "'");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::size_t> parse_index_list(const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& tok : split(text, ',')) {
    require(!tok.empty(), ErrorKind::Format, "empty entry in index list '" + text + "'");
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    require(ec == std::errc() && ptr == tok.data() + tok.size(), ErrorKind::Format, "invalid index '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

/// G-SPEC: comma-separated indices (one set) or @file with a JSON array of arrays.
IndexChain parse_chain(const std::string& spec, std::size_t n_functions) {
  std::vector<std::vector<std::size_t>> sets;
  if (!spec.empty() && spec[0] == '@') {
    Json j;
    try {
      j = Json::parse(report::read_file(spec.substr(1)));
      sets = j.get<std::vector<std::vector<std::size_t>>>();
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::Format, "chain file must be a JSON array of index arrays: " + std::string(e.what()));
    }
  } else {
    sets.push_back(parse_index_list(spec));
  }
  return make_chain(ChainKind::Arbitrary, std::move(sets), n_functions);
}

/// FUNC: phi:K | haar:K | indicator:A:B | const:C | step:LEVEL:SEED | random:SEED | system file.
SampledFunction parse_function(const std::string& spec, const OrthonormalSystem& s) {
  const auto parts = split(spec, ':');
  const auto& kind = parts[0];
  auto arity = [&](std::size_t n) {
    require(parts.size() == n + 1, ErrorKind::Format, "function spec '" + spec + "' has the wrong number of fields");
  };
  if (kind == "phi") {
    arity(1);
    const std::size_t k = parse_u64(parts[1], "phi index");
    require(k >= 1 && k <= s.size(), ErrorKind::Domain, "phi index out of range");
    return s.phi(k);
  }
  if (kind == "haar") {
    arity(1);
    return haar_function(parse_u64(parts[1], "Haar index"), s.grid);
  }
  if (kind == "indicator") {
    arity(2);
    const double a = parse_number(parts[1], "interval start"), b = parse_number(parts[2], "interval end");
    require(0.0 <= a && a < b && b <= 1.0, ErrorKind::Domain, "indicator needs 0 <= a < b <= 1");
    return SampledFunction::indicator(s.grid, a, b);
  }
  if (kind == "const") {
    arity(1);
    return SampledFunction(s.grid, parse_number(parts[1], "constant"));
  }
  if (kind == "step") {
    arity(2);
    return random_step_function(s.grid, static_cast<int>(parse_u64(parts[1], "step level")),
                                parse_u64(parts[2], "step seed"), 0);
  }
  if (kind == "random") {
    arity(1);
    const auto a = random_coefficients(s.size(), parse_u64(parts[1], "random seed"), 0);
    std::vector<std::size_t> all(s.size());
    for (std::size_t k = 0; k < all.size(); ++k) all[k] = k + 1;
    return project(a, s, all);
  }
  require(std::filesystem::exists(spec), ErrorKind::Format, "unknown function spec or missing file '" + spec + "'");
  const OrthonormalSystem holder = load_system(spec);
  require(holder.grid == s.grid, ErrorKind::Shape, "function file lives on a different grid");
  return holder.phi(1);
}

// ---------------------------------------------------------------------------
// output

void emit(std::ostream& out, const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    report::write_file(path, text);
  }
}

Json system_json(const OrthonormalSystem& s) {
  Json j;
  j["name"] = s.name;
  j["N"] = s.size();
  j["J"] = s.grid.level();
  j["delta"] = s.delta ? Json(*s.delta) : Json(nullptr);
  j["alpha"] = s.alpha ? Json(*s.alpha) : Json(nullptr);
  j["special_first"] = s.first_index_special;
  return j;
}

// ---------------------------------------------------------------------------
// lemma checks

struct LemmaResult {
  ConstantEstimate main;
  Json parts = Json::object();
};

Json lemma_defaults(const std::string& lemma, std::uint64_t seed) {
  Json d;
  if (lemma == "y3") {
    d["m"] = 3;
    d["points"] = 64;
  } else if (lemma == "L21") {
    d["m"] = 3;
    d["samples"] = 4;
    d["seed"] = seed;
  } else if (lemma == "L31") {
    d["a"] = 0.25;
    d["b"] = 0.5;
    d["m"] = 3;
  } else if (lemma == "L32") {
    d["n"] = 4;
    d["m"] = 2;
    d["q"] = 1.5;
    d["samples"] = 4;
    d["seed"] = seed;
  } else if (lemma == "L33") {
    d["n"] = 2;
    d["m"] = 4;
    d["q"] = 1.5;
    d["samples"] = 4;
    d["seed"] = seed;
  } else if (lemma == "LP") {
    d["p"] = 2.0;
    d["samples"] = 4;
    d["signs"] = 64;
    d["seed"] = seed;
  } else if (lemma == "conv") {
    d["trials"] = 1000;
    d["seed"] = seed;
  } else if (lemma == "FS") {
    d["p"] = 3.0;
    d["q"] = 1.5;
    d["family"] = 8;
    d["step_level"] = 4;
    d["seed"] = seed;
  } else if (lemma == "CWW") {
    d["eps"] = std::vector<double>{0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5};
    d["samples"] = 4;
    d["quantiles"] = 20;
    d["seed"] = seed;
  } else if (lemma == "CZ") {
    d["beta"] = 0.5;
    d["points"] = 32;
    d["seed"] = seed;
  } else {
    throw UsageError("unknown lemma '" + lemma + "'");
  }
  return d;
}

Json resolve_params(const std::string& lemma, const std::string& text, std::uint64_t seed) {
  Json resolved = lemma_defaults(lemma, seed);
  if (text.empty()) return resolved;
  Json user;
  try {
    user = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Format, "--params is not valid JSON: " + std::string(e.what()));
  }
  require(user.is_object(), ErrorKind::Format, "--params must be a JSON object");
  for (auto it = user.begin(); it != user.end(); ++it) {
    require(resolved.contains(it.key()), ErrorKind::Domain, "unknown parameter '" + it.key() + "' for lemma " + lemma);
    require(it.value().type() == resolved[it.key()].type() ||
                (it.value().is_number() && resolved[it.key()].is_number()),
            ErrorKind::Domain, "parameter '" + it.key() + "' has the wrong type");
    resolved[it.key()] = it.value();
  }
  return resolved;
}

template <class T>
T get(const Json& params, const char* key) {
  const Json& v = params.at(key);
  if constexpr (std::is_integral_v<T>) {
    require(v.is_number_integer() || (v.is_number() && std::floor(v.get<double>()) == v.get<double>()),
            ErrorKind::Domain, std::string("parameter '") + key + "' must be an integer");
    require(!v.is_number_integer() || v.get<std::int64_t>() >= 0 || std::is_signed_v<T>, ErrorKind::Domain,
            std::string("parameter '") + key + "' must be nonnegative");
  }
  return v.get<T>();
}

LemmaResult run_lemma(const std::string& lemma, const OrthonormalSystem* sys, const Json& prm) {
  LemmaResult r;
  if (lemma == "conv") {
    r.main = convolution_trials(get<std::size_t>(prm, "trials"), get<std::uint64_t>(prm, "seed"));
    return r;
  }
  require(sys != nullptr, ErrorKind::Domain, "lemma " + lemma + " needs --system");
  const OrthonormalSystem& s = *sys;

  auto coeffs = [&](std::size_t i) { return random_coefficients(s.size(), get<std::uint64_t>(prm, "seed"), i); };
  auto synth = [&](const CoefficientVector& a) {
    std::vector<std::size_t> all(s.size());
    for (std::size_t k = 0; k < all.size(); ++k) all[k] = k + 1;
    return project(a, s, all);
  };

  if (lemma == "y3") {
    r.main = check_kernel_block(s, get<int>(prm, "m"), sample_points(get<std::size_t>(prm, "points")));
  } else if (lemma == "L21") {
    ConstantEstimate a, b;
    for (std::size_t i = 0; i < get<std::size_t>(prm, "samples"); ++i) {
      const auto d = check_block_domination(s, coeffs(i), get<int>(prm, "m"));
      a.merge(d.block_by_haar);
      b.merge(d.haar_by_block);
    }
    r.parts["block_by_haar"] = report::to_json(a);
    r.parts["haar_by_block"] = report::to_json(b);
    r.main = a;
    r.main.merge(b);
  } else if (lemma == "L31") {
    const auto d = check_indicator_decay(s, get<double>(prm, "a"), get<double>(prm, "b"), get<int>(prm, "m"));
    r.parts["everywhere"] = report::to_json(d.everywhere);
    r.parts["far_field"] = report::to_json(d.far_field);
    r.main = d.everywhere;
    r.main.merge(d.far_field);
  } else if (lemma == "L32" || lemma == "L33") {
    const auto branch = lemma == "L32" ? InteractionBranch::HaarBlock : InteractionBranch::HaarPartial;
    for (std::size_t i = 0; i < get<std::size_t>(prm, "samples"); ++i) {
      r.main.merge(check_haar_phi_interaction(s, coeffs(i), get<int>(prm, "n"), get<int>(prm, "m"),
                                              get<double>(prm, "q"), branch));
    }
  } else if (lemma == "LP") {
    ConstantEstimate a, b, c;
    for (std::size_t i = 0; i < get<std::size_t>(prm, "samples"); ++i) {
      const auto d = check_littlewood_paley(s, synth(coeffs(i)), get<double>(prm, "p"), get<std::size_t>(prm, "signs"),
                                            get<std::uint64_t>(prm, "seed") + i);
      a.merge(d.block_square);
      b.merge(d.square_over_random);
      c.merge(d.random_over_square);
    }
    r.parts["block_square"] = report::to_json(a);
    r.parts["square_over_random"] = report::to_json(b);
    r.parts["random_over_square"] = report::to_json(c);
    r.main = a;
    r.main.merge(b);
    r.main.merge(c);
  } else if (lemma == "FS") {
    std::vector<SampledFunction> family;
    for (std::size_t i = 0; i < get<std::size_t>(prm, "family"); ++i) {
      family.push_back(random_step_function(s.grid, get<int>(prm, "step_level"), get<std::uint64_t>(prm, "seed"), i));
    }
    r.main = check_fefferman_stein(family, get<double>(prm, "p"), get<double>(prm, "q"));
  } else if (lemma == "CWW") {
    const auto eps = prm.at("eps").get<std::vector<double>>();
    std::vector<CwwRow> all;
    bool inclusions = true;
    for (std::size_t i = 0; i < get<std::size_t>(prm, "samples"); ++i) {
      const SampledFunction f = synth(coeffs(i));
      const auto lambdas = cww_quantile_lambdas(f, get<std::size_t>(prm, "quantiles"));
      const auto rows = check_cww(f, eps, lambdas);
      inclusions &= cww_inclusions_hold(rows);
      for (const auto& row : rows) {
        Witness w;
        w.input = "sample:" + std::to_string(i);
        w.params["eps"] = row.eps;
        w.params["lambda"] = row.lambda;
        r.main.offer(static_cast<double>(row.lhs_cells), static_cast<double>(row.rhs_cells), w);
      }
      all.insert(all.end(), rows.begin(), rows.end());
    }
    const CwwFit fit = fit_cww(all);
    Json jf;
    jf["slope"] = fit.slope;
    jf["intercept"] = fit.intercept;
    jf["c"] = fit.c;
    jf["r_squared"] = fit.r_squared;
    jf["points"] = fit.points;
    r.parts["fit"] = std::move(jf);
    r.parts["inclusions_hold"] = inclusions;
    r.main.level = s.grid.level();
    r.main.samples = all.size();
  } else if (lemma == "CZ") {
    auto rng = stream_rng(get<std::uint64_t>(prm, "seed"), 0);
    std::vector<double> lambda(s.size());
    for (double& l : lambda) l = random_sign(rng);
    const auto d = check_cz_kernel(s, lambda, get<double>(prm, "beta"), sample_points(get<std::size_t>(prm, "points")));
    r.parts["size"] = report::to_json(d.size);
    r.parts["smoothness"] = report::to_json(d.smoothness);
    r.main = d.size;
    r.main.merge(d.smoothness);
  }
  return r;
}

// ---------------------------------------------------------------------------

struct Options {
  unsigned threads = 0;
  std::optional<std::uint64_t> seed;
  bool dry_run = false;

  // build
  std::string system_kind;
  std::size_t n = 0;
  int levels = 0;
  std::string out;
  // verify / op / check / estimate / pipeline
  std::string in;
  std::string system;
  std::optional<double> delta, alpha;
  std::string report;
  std::string f;
  std::string op;
  std::string g;
  std::optional<double> q;
  int m = 1;
  double p = 2.0;
  std::string lemma;
  std::string params;
  std::string variant = "sng";
  std::string n_list;
  std::size_t restarts = 8;
  std::size_t local_iterations = 256;
  std::size_t exhaustive_limit = 40320;
  std::string generators = "level-signs";
  std::string active;
  int step_level = 4;
  double c = 1.0;
  std::size_t lambdas = 16;
};

std::uint64_t resolve_seed(const Options& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("WEYL_LAB_SEED"); env != nullptr && *env != '\0') {
    return parse_u64(env, "WEYL_LAB_SEED");
  }
  return kDefaultSeed;
}

int cmd_build(const Options& o, std::ostream& out) {
  if (o.system_kind != "haar" && o.system_kind != "franklin") throw UsageError("--system must be haar or franklin");
  require(o.n <= kMaxSystemSize, ErrorKind::Resource, "N exceeds the cap " + std::to_string(kMaxSystemSize));
  require(o.levels <= kMaxGridLevel, ErrorKind::Resource, "J exceeds the cap " + std::to_string(kMaxGridLevel));
  Json plan;
  plan["command"] = "build";
  plan["system"] = o.system_kind;
  plan["n"] = o.n;
  plan["levels"] = o.levels;
  plan["out"] = o.out;
  if (o.dry_run) {
    out << report::dump(plan);
    return kOk;
  }
  const DyadicGrid grid = make_grid(o.levels);
  const OrthonormalSystem s = o.system_kind == "haar" ? build_haar(o.n, grid) : build_franklin(o.n, grid);
  save_system(s, o.out);
  return kOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  const OrthonormalSystem s = load_system(o.in);
  const double delta = o.delta.value_or(s.delta.value_or(0.9));
  const double alpha = o.alpha.value_or(s.alpha.value_or(1.0));
  require(delta > 0.0 && delta < 1.0, ErrorKind::Domain, "delta must lie in (0,1)");
  require(alpha > 0.0 && alpha <= 1.0, ErrorKind::Domain, "alpha must lie in (0,1]");
  Json j;
  j["command"] = "verify";
  j["system"] = system_json(s);
  j["delta"] = delta;
  j["alpha"] = alpha;
  if (o.dry_run) {
    out << report::dump(j);
    return kOk;
  }
  j["orthonormality_defect"] = orthonormality_defect(s);
  j["conditions"] = report::to_json(verify_wavelet_type(s, delta, alpha));
  emit(out, o.report, report::dump(j));
  return kOk;
}

int cmd_op(const Options& o, std::ostream& out) {
  static const std::set<std::string> ops{"project", "phi-block", "haar-block", "mq", "md", "square", "majorant", "chain"};
  if (!ops.count(o.op)) throw UsageError("unknown --op '" + o.op + "'");
  const OrthonormalSystem s = load_system(o.in);
  const SampledFunction f = parse_function(o.f, s);
  std::optional<IndexChain> chain;
  if (o.op == "project" || o.op == "chain") {
    if (o.g.empty()) throw UsageError("--op " + o.op + " needs --g");
    chain = parse_chain(o.g, s.size());
    require(o.op != "project" || chain->length() == 1, ErrorKind::Domain, "project takes a single index set");
  }
  const double q = o.q.value_or(o.op == "majorant" && s.delta ? default_majorant_q(o.p, *s.delta) : 1.0);
  Json plan;
  plan["command"] = "op";
  plan["system"] = system_json(s);
  plan["f"] = o.f;
  plan["op"] = o.op;
  plan["g"] = o.g;
  plan["q"] = q;
  plan["m"] = o.m;
  plan["out"] = o.out;
  if (o.dry_run) {
    out << report::dump(plan);
    return kOk;
  }

  SampledFunction result;
  if (o.op == "project") {
    result = project(f, s, chain->sets.front());
  } else if (o.op == "chain") {
    result = chain_maximal(coefficients(f, s), s, *chain);
  } else if (o.op == "phi-block") {
    result = phi_block(coefficients(f, s), s, o.m);
  } else if (o.op == "haar-block") {
    result = haar_block(f, o.m);
  } else if (o.op == "mq") {
    result = hl_maximal(f, q);
  } else if (o.op == "md") {
    result = dyadic_maximal(f);
  } else if (o.op == "square") {
    result = haar_square(f);
  } else {
    result = block_majorant(coefficients(f, s), s, q);
  }
  report::CsvTable t{{"cell", "x", "value"}, {}};
  for (std::size_t i = 0; i < result.size(); ++i) {
    t.rows.push_back({std::to_string(i), report::format_double(s.grid.midpoint(i)), report::format_double(result[i])});
  }
  emit(out, o.out, report::to_csv(t));
  return kOk;
}

int cmd_check(const Options& o, std::ostream& out) {
  const std::uint64_t seed = resolve_seed(o);
  const Json params = resolve_params(o.lemma, o.params, seed);
  std::optional<OrthonormalSystem> s;
  if (!o.system.empty()) s = load_system(o.system);
  if (o.lemma != "conv" && !s) throw UsageError("--lemma " + o.lemma + " needs --system");

  Json j;
  j["lemma"] = o.lemma;
  j["params"] = params;
  if (o.dry_run) {
    if (s) j["system"] = system_json(*s);
    out << report::dump(j);
    return kOk;
  }
  const LemmaResult fine = run_lemma(o.lemma, s ? &*s : nullptr, params);
  j["ratio_sup"] = fine.main.ratio_sup;
  j["witness"] = report::to_json(fine.main.witness);
  j["samples"] = fine.main.samples;
  j["J"] = s ? Json(s->grid.level()) : Json(nullptr);
  Json stability;
  if (s && s->grid.level() >= 1 && o.lemma != "conv") {
    const OrthonormalSystem coarse = coarsen(*s);
    const LemmaResult prev = run_lemma(o.lemma, &coarse, params);
    stability["J_prev"] = coarse.grid.level();
    stability["J_prev_ratio_sup"] = prev.main.ratio_sup;
    stability["J_prev_ratio"] = stability_ratio(fine.main.ratio_sup, prev.main.ratio_sup);
  } else {
    stability["J_prev_ratio"] = nullptr;
  }
  j["stability"] = std::move(stability);
  if (!fine.parts.empty()) j["parts"] = fine.parts;
  emit(out, o.report, report::dump(j));
  return kOk;
}

SearchConfig search_config(const Options& o, std::uint64_t seed) {
  SearchConfig cfg;
  cfg.variant = parse_variant(o.variant);
  require(o.p >= 1.0, ErrorKind::Domain, "p must be at least 1");
  cfg.p = o.p;
  cfg.restarts = o.restarts;
  cfg.local_iterations = o.local_iterations;
  cfg.exhaustive_limit = o.exhaustive_limit;
  cfg.step_level = o.step_level;
  cfg.seed = seed;
  cfg.generators.clear();
  for (const auto& g : split(o.generators, ',')) cfg.generators.push_back(parse_generator(g));
  if (!o.active.empty()) cfg.active = parse_index_list(o.active);
  return cfg;
}

int cmd_estimate(const Options& o, std::ostream& out) {
  const std::uint64_t seed = resolve_seed(o);
  const OrthonormalSystem s = load_system(o.system);
  SearchConfig cfg = search_config(o, seed);
  const auto ns = parse_index_list(o.n_list);
  for (std::size_t n : ns) require(n >= 1, ErrorKind::Domain, "chain lengths must be positive");

  if (o.dry_run) {
    Json j;
    j["command"] = "estimate";
    j["system"] = system_json(s);
    j["variant"] = to_string(cfg.variant);
    j["p"] = cfg.p;
    j["n"] = ns;
    j["restarts"] = cfg.restarts;
    j["local_iterations"] = cfg.local_iterations;
    j["exhaustive_limit"] = cfg.exhaustive_limit;
    Json gens = Json::array();
    for (auto g : cfg.generators) gens.push_back(to_string(g));
    j["generators"] = std::move(gens);
    j["active"] = cfg.active;
    j["step_level"] = cfg.step_level;
    j["seed"] = seed;
    j["report"] = o.report;
    out << report::dump(j);
    return kOk;
  }

  const bool to_file = !o.report.empty() && o.report != "-";
  const std::string sidecar = to_file ? o.report + ".witness.json" : std::string();
  const std::string ref = to_file ? std::filesystem::path(sidecar).filename().string() : std::string();
  report::CsvTable t{{"n", "variant", "p", "best_value", "ratio_sqrt", "ratio_log", "witness_ref"}, {}};
  Json witnesses = Json::array();
  for (std::size_t i = 0; i < ns.size(); ++i) {
    cfg.n = ns[i];
    const EstimateRecord rec = estimate_A(s, cfg);
    t.rows.push_back({std::to_string(rec.n), to_string(rec.variant), report::format_double(rec.p),
                      report::format_double(rec.best_value), report::format_double(rec.ratio_sqrt),
                      report::format_double(rec.ratio_log), ref + "#" + std::to_string(i)});
    Json w;
    w["n"] = rec.n;
    w["variant"] = to_string(rec.variant);
    w["p"] = rec.p;
    w["best_value"] = rec.best_value;
    w["restart"] = rec.restart;
    w["evaluated_restarts"] = rec.evaluated_restarts;
    w["witness"] = report::to_json(rec.witness);
    witnesses.push_back(std::move(w));
  }
  emit(out, o.report, report::to_csv(t));
  if (to_file) {
    Json side;
    side["system"] = system_json(s);
    side["seed"] = seed;
    side["records"] = std::move(witnesses);
    report::write_file(sidecar, report::dump(side));
  }
  return kOk;
}

int cmd_fit(const Options& o, std::ostream& out) {
  const report::CsvTable t = report::parse_csv(report::read_file(o.in));
  auto column = [&](const char* name) {
    for (std::size_t i = 0; i < t.header.size(); ++i) {
      if (t.header[i] == name) return i;
    }
    fail(ErrorKind::Format, std::string("CSV has no '") + name + "' column");
  };
  const std::size_t cn = column("n"), cv = column("best_value");
  if (o.dry_run) {
    Json j;
    j["command"] = "fit";
    j["in"] = o.in;
    j["rows"] = t.rows.size();
    out << report::dump(j);
    return kOk;
  }
  std::vector<std::size_t> ns;
  std::vector<double> vs;
  for (const auto& row : t.rows) {
    ns.push_back(parse_u64(row[cn], "n"));
    vs.push_back(parse_number(row[cv], "best_value"));
  }
  const GrowthFit fit = fit_growth(ns, vs);
  Json j = report::to_json(fit);
  j["sqrt_log_exponent"] = 0.5;
  j["log_exponent"] = 1.0;
  emit(out, o.report, report::dump(j));
  return kOk;
}

int cmd_pipeline(const Options& o, std::ostream& out) {
  const std::uint64_t seed = resolve_seed(o);
  const OrthonormalSystem s = load_system(o.system);
  const std::string fspec = o.f.empty() ? "random:" + std::to_string(seed) : o.f;
  if (o.g.empty()) throw UsageError("pipeline needs --g");
  const IndexChain chain = parse_chain(o.g, s.size());
  Json plan;
  plan["command"] = "pipeline";
  plan["system"] = system_json(s);
  plan["f"] = fspec;
  plan["chain_length"] = chain.length();
  plan["p"] = o.p;
  plan["c"] = o.c;
  plan["lambdas"] = o.lambdas;
  if (o.dry_run) {
    out << report::dump(plan);
    return kOk;
  }
  const SampledFunction f = parse_function(fspec, s);
  const PipelineReport rep = theorem1_pipeline(coefficients(f, s), s, chain, o.p, o.c, o.lambdas);
  Json j = report::to_json(rep);
  j["f"] = fspec;
  emit(out, o.report, report::dump(j));
  return kOk;
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Format: return kFormat;
    case ErrorKind::Resource: return kResource;
    default: return kDomain;
  }
}

void error_line(std::ostream& err, const std::string& kind, const std::string& message, int code) {
  Json j;
  j["error"] = kind;
  j["exit_code"] = code;
  j["message"] = message;
  err << j.dump() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Numerical laboratory for maximal operators of orthonormal wavelet-type systems", "weyl-lab"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--threads", o.threads, "Worker thread cap (0 = hardware)");
  app.add_option("--seed", o.seed, "Seed (overrides WEYL_LAB_SEED)");
  app.add_flag("--dry-run", o.dry_run, "Validate and print the resolved parameters without computing");

  auto* build = app.add_subcommand("build", "Build a system file");
  build->add_option("--system", o.system_kind, "haar | franklin")->required();
  build->add_option("--n", o.n, "Number of functions N")->required();
  build->add_option("--levels", o.levels, "Grid level J")->required();
  build->add_option("--out", o.out, "Output system file")->required();

  auto* verify = app.add_subcommand("verify", "Fit the wavelet-type constants of a system");
  verify->add_option("--in", o.in, "System file")->required();
  verify->add_option("--delta", o.delta, "Decay exponent");
  verify->add_option("--alpha", o.alpha, "Hoelder exponent");
  verify->add_option("--report", o.report, "JSON report (default stdout)");

  auto* op = app.add_subcommand("op", "Apply one operator to a function");
  op->add_option("--in", o.in, "System file")->required();
  op->add_option("--f", o.f, "Function spec")->required();
  op->add_option("--op", o.op, "project|phi-block|haar-block|mq|md|square|majorant|chain")->required();
  op->add_option("--g", o.g, "Index set or @chain.json");
  op->add_option("--q", o.q, "Exponent for mq / majorant");
  op->add_option("--m", o.m, "Block or level for phi-block / haar-block");
  op->add_option("--p", o.p, "p used to pick the default majorant q");
  op->add_option("--out", o.out, "CSV output (default stdout)");

  auto* check = app.add_subcommand("check", "Estimate the constant of one lemma");
  check->add_option("--lemma", o.lemma, "y3|L21|L31|L32|L33|LP|conv|FS|CWW|CZ")->required();
  check->add_option("--system", o.system, "System file");
  check->add_option("--params", o.params, "JSON object of parameters");
  check->add_option("--report", o.report, "JSON report (default stdout)");

  auto* estimate = app.add_subcommand("estimate", "Search for lower estimates of A^p_n");
  estimate->add_option("--system", o.system, "System file")->required();
  estimate->add_option("--variant", o.variant, "sng | mon | full");
  estimate->add_option("--p", o.p, "Exponent p");
  estimate->add_option("--n", o.n_list, "Comma-separated chain lengths")->required();
  estimate->add_option("--restarts", o.restarts, "Restarts per n");
  estimate->add_option("--local-iterations", o.local_iterations, "Local-search moves per restart");
  estimate->add_option("--exhaustive-limit", o.exhaustive_limit, "Enumerate orderings up to this count");
  estimate->add_option("--generators", o.generators, "level-signs,unit-signs,enumerate-signs,indicator,step");
  estimate->add_option("--active", o.active, "Comma-separated active indices");
  estimate->add_option("--step-level", o.step_level, "Level of the step generator");
  estimate->add_option("--report", o.report, "CSV output (default stdout)");

  auto* fit = app.add_subcommand("fit", "Fit the growth exponent of estimate output");
  fit->add_option("--in", o.in, "CSV from estimate")->required();
  fit->add_option("--report", o.report, "JSON report (default stdout)");

  auto* pipeline = app.add_subcommand("pipeline", "Run the good-lambda argument on one (f, chain)");
  pipeline->add_option("--system", o.system, "System file")->required();
  pipeline->add_option("--f", o.f, "Function spec (default random:SEED)");
  pipeline->add_option("--g", o.g, "@chain.json or one index set")->required();
  pipeline->add_option("--p", o.p, "Exponent p");
  pipeline->add_option("--c", o.c, "Constant in eps_n = (c / ln n)^{1/2}");
  pipeline->add_option("--lambdas", o.lambdas, "Number of quantile levels");
  pipeline->add_option("--report", o.report, "JSON report (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    error_line(err, "usage", e.what(), kUsage);
    return kUsage;
  }

  try {
    set_max_threads(o.threads);
    resolve_seed(o);  // reject a malformed WEYL_LAB_SEED early
    if (build->parsed()) return cmd_build(o, out);
    if (verify->parsed()) return cmd_verify(o, out);
    if (op->parsed()) return cmd_op(o, out);
    if (check->parsed()) return cmd_check(o, out);
    if (estimate->parsed()) return cmd_estimate(o, out);
    if (fit->parsed()) return cmd_fit(o, out);
    if (pipeline->parsed()) return cmd_pipeline(o, out);
    throw UsageError("no subcommand");
  } catch (const UsageError& e) {
    error_line(err, "usage", e.what(), kUsage);
    return kUsage;
  } catch (const Error& e) {
    const int code = exit_code(e.kind());
    error_line(err, to_string(e.kind()), e.what(), code);
    return code;
  } catch (const std::bad_alloc&) {
    error_line(err, "resource", "out of memory", kResource);
    return kResource;
  } catch (const std::exception& e) {
    error_line(err, "format", e.what(), kFormat);
    return kFormat;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace weyl::cli
