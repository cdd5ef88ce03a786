#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "weyl/dyadic.hpp"

namespace weyl {

inline constexpr std::size_t kMaxSystemSize = 4096;

/// phi_1..phi_N sampled on one grid, plus the wavelet-type metadata.
struct OrthonormalSystem {
  std::string name;
  DyadicGrid grid;
  std::vector<SampledFunction> functions;  // phi_k at position k-1
  std::optional<double> delta;
  std::optional<double> alpha;
  std::optional<double> envelope_constant;
  bool first_index_special = false;

  std::size_t size() const noexcept { return functions.size(); }
  /// 1-based access.
  const SampledFunction& phi(std::size_t k) const { return functions.at(k - 1); }
};

/// xi(x) = (1 + |x|)^{-(1+delta)}, 0 < delta < 1.
double xi(double x, double delta);

struct Center {
  double t = 0.5;
  int level = 0;        // n(k); n(1) = 0 by convention
  std::int64_t j = 1;   // k = 2^n + j
};

/// t_1 = 1/2, t_k = (2j-1)/2^{n+1} for k = 2^n + j, 1 <= j <= 2^n.
Center center(std::int64_t k);

OrthonormalSystem build_haar(std::size_t n, const DyadicGrid& grid);

/// Franklin system: Gram-Schmidt of 1, x and the Faber-Schauder hats at t_2, t_3, ...
/// in the grid inner product, so orthonormality holds to rounding. Needs N <= 2^{J-4}.
OrthonormalSystem build_franklin(std::size_t n, const DyadicGrid& grid);

/// max_{j != k} |<phi_j,phi_k>| and max_k |<phi_k,phi_k> - 1| folded into one number.
double orthonormality_defect(const OrthonormalSystem& s);

/// Same functions averaged onto the grid one level coarser.
OrthonormalSystem coarsen(const OrthonormalSystem& s);

void save_system(const OrthonormalSystem& s, const std::filesystem::path& path);
OrthonormalSystem load_system(const std::filesystem::path& path);

struct ConditionOptions {
  double mean_zero_tolerance = 1e-8;
  double decay_cap = 64.0;
  double holder_cap = 64.0;
  double local_mass_cap = 8.0;
  /// Allowed ratio between constants fitted at J and at J-1 (coarsened).
  double stability_factor = 1.25;
  bool check_stability = true;
  /// Let the fit pick the index offset s in {0,1}: phi_k is measured against
  /// center t_{k-s}. Only consulted for systems with a special first index.
  bool fit_index_offset = true;
};

struct ConditionReport {
  double mean_zero_max = 0.0;
  double decay_constant = 0.0;
  double holder_constant = 0.0;
  double local_mass_radius = 0.0;
  int index_offset = 0;
  // Constants refitted on the system coarsened to J-1 (0 when not computed).
  double decay_constant_coarse = 0.0;
  double holder_constant_coarse = 0.0;
  bool mean_zero_pass = false;
  bool decay_pass = false;
  bool holder_pass = false;
  bool local_mass_pass = false;
};

ConditionReport verify_wavelet_type(const OrthonormalSystem& s, double delta, double alpha,
                                    const ConditionOptions& options = {});

}  // namespace weyl
