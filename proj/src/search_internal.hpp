#pragma once

// Search kernels behind estimate_A. Everything here works on "terms" v_j = c_j phi_j
// restricted to the bounding range of phi_j's support, so Haar-like systems with
// compact support cost O(support) per move instead of O(2^J).

#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "weyl/extremal.hpp"

namespace weyl::detail {

struct Term {
  const double* phi = nullptr;
  double coeff = 0.0;
  std::size_t lo = 0;  // support range [lo, hi) in cells
  std::size_t hi = 0;
};

/// Bounding range of the nonzero cells of f (empty range for f = 0).
std::pair<std::size_t, std::size_t> support_range(std::span<const double> f);

/// Orderings of `candidates` (positions into `terms`); the first n entries form the chain.
/// Exhaustive when P(m, n) <= cfg.exhaustive_limit, otherwise greedy insertion followed by
/// adjacent and random pair swaps (requires candidates.size() == n).
std::vector<std::size_t> search_sng(const std::vector<Term>& terms,
                                    const std::vector<std::size_t>& candidates, std::size_t n,
                                    std::size_t cells, double p, const SearchConfig& cfg,
                                    std::mt19937_64& rng);

/// Entry step per term (1..n, n+1 = never) for a nested chain; starts from `entry` and only
/// accepts strict improvements.
std::vector<std::size_t> search_mon(const std::vector<Term>& terms, std::vector<std::size_t> entry,
                                    std::size_t n, std::size_t cells, double p,
                                    const SearchConfig& cfg, std::mt19937_64& rng);

/// Lambda matrix (n rows over all terms, entries in {-1,0,1}) improved by coordinate ascent.
std::vector<std::vector<std::int8_t>> search_full(const std::vector<Term>& terms,
                                                  std::vector<std::vector<std::int8_t>> lambda,
                                                  std::size_t cells, double p,
                                                  const SearchConfig& cfg, std::mt19937_64& rng);

/// Number of n-permutations of m, saturating at cap + 1.
std::size_t partial_permutations(std::size_t m, std::size_t n, std::size_t cap);

}  // namespace weyl::detail
