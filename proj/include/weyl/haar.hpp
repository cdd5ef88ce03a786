#pragma once

#include <vector>

#include "weyl/dyadic.hpp"

namespace weyl {

/// h_k sampled on `grid`; k = 2^n + j needs n < J. h_1 = 1.
SampledFunction haar_function(std::size_t k, const DyadicGrid& grid);

/// All 2^J Haar coefficients <f, h_k>, stored at position k-1.
std::vector<double> haar_transform(const SampledFunction& f);
/// Inverse of haar_transform: sum over k of c[k-1] h_k.
SampledFunction haar_synthesis(const DyadicGrid& grid, const std::vector<double>& coeffs);

/// H_n f via the averaging identity (mean over I_n(x)).
SampledFunction haar_partial(const SampledFunction& f, int n);
/// H_n f via the coefficient sum over k <= 2^n.
SampledFunction haar_partial_coefficients(const SampledFunction& f, int n);
/// Delta H_n = H_n - H_{n-1}, n >= 1.
SampledFunction haar_block(const SampledFunction& f, int n);

/// S f = (sum_k <f,h_k>^2 h_k^2)^{1/2} over every index up to level J, k = 1 included.
SampledFunction haar_square(const SampledFunction& f);
/// Same, from precomputed coefficients (length 2^J).
SampledFunction haar_square_from_coefficients(const DyadicGrid& grid,
                                              const std::vector<double>& coeffs);

}  // namespace weyl
