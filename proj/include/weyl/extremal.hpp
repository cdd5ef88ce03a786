#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "weyl/operators.hpp"
#include "weyl/systems.hpp"

namespace weyl {

enum class Variant { Sng, Mon, Full };
const char* to_string(Variant v) noexcept;
Variant parse_variant(const std::string& text);

enum class GeneratorKind {
  LevelSigns,      // a_k = eps_k 2^{-n(k)/2}: one random sign per index, level-scaled
  UnitSigns,       // a_k = eps_k
  EnumerateSigns,  // every sign pattern on the active indices, one per restart
  Indicator,       // indicator of a random dyadic interval
  Step,            // random step function on a coarse dyadic level
};
const char* to_string(GeneratorKind k) noexcept;
GeneratorKind parse_generator(const std::string& text);

struct SearchConfig {
  Variant variant = Variant::Sng;
  double p = 2.0;
  std::size_t n = 1;
  std::vector<GeneratorKind> generators{GeneratorKind::LevelSigns};
  /// Indices the sign generators live on. Empty: the n indices after the special one.
  std::vector<std::size_t> active;
  std::size_t restarts = 8;
  /// Random pair swaps (sng) / coordinate trials (mon, full) per restart.
  std::size_t local_iterations = 256;
  /// Enumerate every ordering when P(m, n) is at most this.
  std::size_t exhaustive_limit = 40320;
  int step_level = 4;
  std::uint64_t seed = 42;
};

/// A generator g = sum_j coeffs[j] phi_{indices[j]}, scaled so ||g||_p = 1.
struct Generator {
  std::string id;
  std::vector<std::size_t> indices;
  std::vector<double> coeffs;
};

/// g_k = sum_j lambda[k][j] coeffs[j] phi_{indices[j]} for k = 1..n, lambda in {-1,0,1}.
/// Stored as one string per k over {'+','-','0'} aligned with generator.indices.
struct SearchWitness {
  Generator generator;
  std::vector<std::string> rows;
};

struct EstimateRecord {
  std::size_t n = 0;
  Variant variant = Variant::Sng;
  double p = 2.0;
  double best_value = 0.0;
  double ratio_sqrt = 0.0;  // best / sqrt(log2(n+1))
  double ratio_log = 0.0;   // best / log2(n+1)
  std::size_t restart = 0;  // which restart produced the witness
  std::size_t evaluated_restarts = 0;
  SearchWitness witness;
};

/// Lower estimate of A^p_n (variant-dependent) by search over the generator ensemble.
EstimateRecord estimate_A(const OrthonormalSystem& s, const SearchConfig& cfg);

/// ||max_k |g_k|||_p / ||g||_p, evaluated by one fixed procedure; search results are
/// always reported through this function, so re-evaluating a witness is exact.
double evaluate_witness(const OrthonormalSystem& s, const SearchWitness& w, double p);

/// The chain-class witnesses as index chains (for sng and mon rows with no minus signs).
IndexChain witness_chain(const SearchWitness& w);

/// Generator for restart r of `cfg` (exposed for tests and oracles).
Generator make_generator(const OrthonormalSystem& s, const SearchConfig& cfg, std::size_t restart);

struct GrowthFit {
  double slope = 0.0;      // of ln(best) against ln(log2(n+1))
  double intercept = 0.0;
  double residual = 0.0;   // root mean square
  double r_squared = 0.0;
  std::size_t points = 0;
};
/// Needs at least 4 records with distinct n; otherwise ErrorKind::Domain.
GrowthFit fit_growth(std::span<const EstimateRecord> records);
GrowthFit fit_growth(std::span<const std::size_t> n, std::span<const double> values);

struct PipelineLambdaRow {
  double lambda = 0.0;
  std::size_t pstar_cells = 0;     // |{p* > lambda}|
  std::size_t a_cells = 0;         // |{p* > lambda, P <= eps_n lambda}|
  std::size_t b_cells = 0;         // |{P > eps_n lambda}|
  std::size_t good_lhs_cells = 0;  // sum_k |{|p_k| > lambda, P <= eps_n lambda}|
  std::size_t good_rhs_cells = 0;  // sum_k |{M^d p_k > lambda/2}|
};

struct PipelineReport {
  std::size_t n = 0;
  std::size_t n_distinct = 0;
  double p = 2.0;
  double eps_n = 0.0;
  double norm_f = 0.0;
  double norm_pstar = 0.0;
  double norm_square_sup = 0.0;  // ||P||_p, P = max_k S(p_k)
  double square_ratio = 0.0;     // ||P||_p / ||f||_p
  double ratio = 0.0;            // ||p*||_p / (sqrt(log2(n_distinct+1)) ||f||_p)
  bool degenerate = false;       // f = 0
  bool inclusion_holds = true;   // {p* > lambda} within A u B at every sampled lambda
  std::vector<PipelineLambdaRow> rows;
};

/// Theorem 1.1 argument on one (f, chain): p_k = P_{G_k} f, p*, P, eps_n = (c / ln n)^{1/2}.
PipelineReport theorem1_pipeline(const CoefficientVector& a, const OrthonormalSystem& s,
                                 const IndexChain& chain, double p, double c = 1.0,
                                 std::size_t lambda_count = 16);

}  // namespace weyl
