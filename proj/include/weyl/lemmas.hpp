#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "weyl/operators.hpp"
#include "weyl/systems.hpp"

namespace weyl {

/// Where the supremum was attained. `point2` is the second spatial argument for
/// two-point inequalities (kernels), unused otherwise.
struct Witness {
  std::string input;
  double point = 0.0;
  double point2 = 0.0;
  std::map<std::string, double> params;
};

/// Empirical sup of LHS/RHS; 0/0 counts as 0 and never becomes a witness.
struct ConstantEstimate {
  double ratio_sup = 0.0;
  Witness witness;
  std::size_t samples = 0;
  int level = 0;

  /// Records lhs/rhs if it beats the current sup. Returns the ratio (0 for 0/0).
  double offer(double lhs, double rhs, const Witness& w);
  /// Folds another estimate in; ties keep the current witness.
  void merge(const ConstantEstimate& other);
};

/// x_i = (i + 1/2) / count. Independent of J, so sweeps compare like with like.
std::vector<double> sample_points(std::size_t count);

/// Standard normal coefficients on indices 2..N (a_1 = 0), reproducible from (seed, index).
CoefficientVector random_coefficients(std::size_t n_functions, std::uint64_t seed, std::uint64_t index);
/// Random step function constant on level-`coarse_level` dyadic intervals.
SampledFunction random_step_function(const DyadicGrid& grid, int coarse_level, std::uint64_t seed,
                                     std::uint64_t index);

/// Fine/coarse ratio of two sups; 1 when both vanish, infinity when only one does.
double stability_ratio(double fine, double coarse);

/// (y3): sum over block m of |phi_k(x) phi_k(t)| against 2^m xi(2^m (x-t)).
ConstantEstimate check_kernel_block(const OrthonormalSystem& s, int m, std::span<const double> points);

struct DominationPair {
  ConstantEstimate block_by_haar;  // (u59)
  ConstantEstimate haar_by_block;  // (u45)
};
/// Lemma 2.1 at block m: sum|a_k phi_k| vs M(sum a_k h_k), and M(sum a_k h_k) vs M(sum|a_k phi_k|).
DominationPair check_block_domination(const OrthonormalSystem& s, const CoefficientVector& a, int m);

struct IndicatorDecay {
  ConstantEstimate everywhere;   // (u66)
  ConstantEstimate far_field;    // (u67), x outside 2I
};
/// Lemma 3.1 for I = [a,b) (grid-aligned) and block m.
IndicatorDecay check_indicator_decay(const OrthonormalSystem& s, double a, double b, int m);

enum class InteractionBranch { Auto, HaarBlock, HaarPartial };
/// Lemma 3.2 / 3.3. HaarBlock: |Delta H_n Delta Phi_m g| vs 2^{alpha(m-n)} M(sum_{block m}|a_k phi_k|),
/// valid for n >= m. HaarPartial: |H_n Delta Phi_m g| vs 2^{(n-m)/q'} M_q(Delta Phi_m g), for m >= n.
/// Auto picks HaarBlock when n > m and HaarPartial otherwise.
ConstantEstimate check_haar_phi_interaction(const OrthonormalSystem& s, const CoefficientVector& a,
                                            int n, int m, double q,
                                            InteractionBranch branch = InteractionBranch::Auto);

/// Cache of block-level objects shared by sweeps over (n, m).
struct InteractionCache {
  const OrthonormalSystem* system = nullptr;
  const CoefficientVector* coeffs = nullptr;
  double q = 1.5;
  std::map<int, SampledFunction> block;         // Delta Phi_m g
  std::map<int, SampledFunction> block_abs_max; // M(sum |a_k phi_k|)
  std::map<int, SampledFunction> block_mq;      // M_q(Delta Phi_m g)
};
ConstantEstimate check_haar_phi_interaction(InteractionCache& cache, int n, int m,
                                            InteractionBranch branch = InteractionBranch::Auto);

struct LittlewoodPaley {
  ConstantEstimate block_square;  // (u58) LHS / ||f||_p
  ConstantEstimate square_over_random;  // (u60): ||(sum a^2 phi^2)^{1/2}||_p / random-sign average
  ConstantEstimate random_over_square;  // (u60) the other direction
};
LittlewoodPaley check_littlewood_paley(const OrthonormalSystem& s, const SampledFunction& f, double p,
                                       std::size_t sign_samples = 64, std::uint64_t seed = 42);

/// (x4): || |a| * |b| ||_2 against ||a||_2 ||b||_1. The constant is exactly 1.
ConstantEstimate check_convolution_inequality(std::span<const double> a, std::span<const double> b);
/// `trials` seeded random integer-valued pairs, lengths 1..32, entries in [-9, 9].
ConstantEstimate convolution_trials(std::size_t trials, std::uint64_t seed);

/// (u41): ||(sum M_q(g_k)^2)^{1/2}||_p against ||(sum g_k^2)^{1/2}||_p, 1 <= q < min(2,p).
ConstantEstimate check_fefferman_stein(const std::vector<SampledFunction>& family, double p, double q);

struct CzEstimate {
  ConstantEstimate size;        // (y1)
  ConstantEstimate smoothness;  // (y2)
};
/// Calderon-Zygmund bounds for K(x,t) = sum_k lambda_k phi_k(x) phi_k(t) over sampled
/// triples with x != t and |x - t| > 2|t - t'|. Requires 0 < beta < min(alpha, delta).
CzEstimate check_cz_kernel(const OrthonormalSystem& s, std::span<const double> lambda, double beta,
                           std::span<const double> points);

struct CwwRow {
  double eps = 0.0;
  double lambda = 0.0;
  double lhs = 0.0;  // |{M^d f > lambda, S f < eps lambda}|
  double rhs = 0.0;  // |{M^d f > lambda/2}|
  double ratio = 0.0;
  std::size_t lhs_cells = 0;
  std::size_t level_cells = 0;  // |{M^d f > lambda}| in cells
  std::size_t rhs_cells = 0;
};

/// One row per (eps, lambda); measures are exact cell counts times the cell width.
std::vector<CwwRow> check_cww(const SampledFunction& f, std::span<const double> eps,
                              std::span<const double> lambdas);
/// lambda at the i/count quantiles (i = 0..count-1) of M^d f.
std::vector<double> cww_quantile_lambdas(const SampledFunction& f, std::size_t count);
/// Set inclusions that must hold exactly: lhs <= |{M^d > lambda}| <= rhs per row, and
/// lhs nondecreasing in eps at fixed (input, lambda). Rows must come from one input.
bool cww_inclusions_hold(std::span<const CwwRow> rows);

struct CwwFit {
  double slope = 0.0;     // of log(pooled ratio) against 1/eps^2
  double intercept = 0.0;
  double c = 0.0;         // -slope
  double r_squared = 0.0;
  std::size_t points = 0;
};
/// Pools rows by eps (sum lhs / sum rhs over rows with rhs > 0) and regresses the log
/// of the pooled ratio on 1/eps^2 over eps with a positive pooled ratio.
CwwFit fit_cww(std::span<const CwwRow> rows);

}  // namespace weyl
