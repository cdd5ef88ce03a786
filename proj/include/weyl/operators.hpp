#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "weyl/dyadic.hpp"
#include "weyl/systems.hpp"

namespace weyl {

enum class ChainKind { Arbitrary, Monotone, SingletonIncrement };

/// G_1, ..., G_n as sorted, duplicate-free sets of 1-based indices.
struct IndexChain {
  ChainKind kind = ChainKind::Arbitrary;
  std::vector<std::vector<std::size_t>> sets;

  std::size_t length() const noexcept { return sets.size(); }
};

/// Sorts and deduplicates each set, then checks the invariants of `kind` and that
/// every index lies in 1..n_functions. Throws ErrorKind::Domain.
IndexChain make_chain(ChainKind kind, std::vector<std::vector<std::size_t>> sets,
                      std::size_t n_functions);
/// Strongest kind the sets satisfy.
ChainKind classify_chain(const std::vector<std::vector<std::size_t>>& sets);
const char* to_string(ChainKind kind) noexcept;

using CoefficientVector = std::vector<double>;

CoefficientVector coefficients(const SampledFunction& f, const OrthonormalSystem& s);

/// sum over j in G of a_j phi_j.
SampledFunction project(const CoefficientVector& a, const OrthonormalSystem& s,
                        std::span<const std::size_t> indices);
SampledFunction project(const SampledFunction& f, const OrthonormalSystem& s,
                        std::span<const std::size_t> indices);

/// Phi_n = sum_{j <= 2^n}; Delta Phi_m = sum_{2^{m-1} < j <= 2^m}.
SampledFunction phi_partial(const CoefficientVector& a, const OrthonormalSystem& s, int n);
SampledFunction phi_block(const CoefficientVector& a, const OrthonormalSystem& s, int m);
/// Indices of block m, clipped to the system size.
std::vector<std::size_t> block_indices(int m, std::size_t n_functions);
/// sum over block m of |a_k phi_k|.
SampledFunction block_abs_sum(const CoefficientVector& a, const OrthonormalSystem& s, int m);

/// T_lambda = sum_k lambda_k a_k phi_k, |lambda_k| <= 1.
SampledFunction modulate(const CoefficientVector& a, std::span<const double> lambda,
                         const OrthonormalSystem& s);

/// Calls visit(m, P_{G_m} f) for each set in order, updating by symmetric differences.
void for_each_chain_projection(const CoefficientVector& a, const OrthonormalSystem& s, const IndexChain& chain,
                               const std::function<void(std::size_t, const SampledFunction&)>& visit);

/// Pointwise max over m of |P_{G_m} f|.
SampledFunction chain_maximal(const CoefficientVector& a, const OrthonormalSystem& s,
                              const IndexChain& chain);

enum class MaximalMode { Auto, Exact, DyadicWindows };
inline constexpr int kExactMaximalLevel = 12;
const char* to_string(MaximalMode mode) noexcept;

/// M_q f(x) = sup over grid intervals I containing x of (|I|^{-1} int_I |f|^q)^{1/q}.
/// Exact mode scans every grid interval (J <= 12). Window mode takes the sup over a
/// family of dyadic-aligned windows and satisfies M_win <= M_q <= 2^{1/q} M_win.
SampledFunction hl_maximal(const SampledFunction& f, double q, MaximalMode mode = MaximalMode::Auto,
                           MaximalMode* used = nullptr);

/// sup over levels 1..J of the average of |f| over I_n(x). Level 0 is excluded.
SampledFunction dyadic_maximal(const SampledFunction& f);

/// q = min{(p+1)/2, (1 - delta/2)^{-1}, 3/2}.
double default_majorant_q(double p, double delta);

/// [sum_m (M_q(sum_{block m} |a_k phi_k|))^2]^{1/2}, with a_1 forced to 0.
/// Requires q'delta > 1 when the system carries delta.
SampledFunction block_majorant(const CoefficientVector& a, const OrthonormalSystem& s, double q);

struct SignSampler {
  std::size_t samples = 256;
  std::uint64_t seed = 42;
  /// Enumerate every sign pattern when at most this many coefficients are nonzero.
  std::size_t exact_limit = 12;
};

struct ModulatedSup {
  SampledFunction value;
  std::size_t samples = 0;
  bool exact = false;
};

/// Running pointwise max of S(T_lambda f) over sign vectors lambda.
ModulatedSup modulated_square_sup(const CoefficientVector& a, const OrthonormalSystem& s,
                                  const SignSampler& sampler = {});

}  // namespace weyl
