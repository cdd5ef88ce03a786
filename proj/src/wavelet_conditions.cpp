#include <algorithm>
#include <cmath>
#include <limits>

#include "weyl/kernels.hpp"
#include "weyl/parallel.hpp"
#include "weyl/systems.hpp"

namespace weyl {
namespace {

struct Fit {
  double decay = 0.0;
  double holder = 0.0;
};

// Reciprocal envelope 1 / (2^{n/2} xi(2^n (x - t))) at every cell midpoint.
std::vector<double> inverse_envelope(const DyadicGrid& grid, const Center& c, double delta) {
  std::vector<double> w(grid.cell_count());
  const double scale = std::ldexp(1.0, c.level);
  const double amp = std::sqrt(scale);
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = 1.0 / (amp * xi(scale * (grid.midpoint(i) - c.t), delta));
  }
  return w;
}

std::size_t first_checked(const OrthonormalSystem& s) { return s.first_index_special ? 2 : 1; }

Center center_for(std::size_t k, int offset) {
  return center(static_cast<std::int64_t>(k) - offset);
}

double decay_fit(const OrthonormalSystem& s, double delta, int offset) {
  const std::size_t k0 = first_checked(s);
  if (s.size() < k0) return 0.0;
  const auto per_k = parallel_map<double>(s.size() - k0 + 1, [&](std::size_t i) {
    const std::size_t k = k0 + i;
    const auto w = inverse_envelope(s.grid, center_for(k, offset), delta);
    return simd::max_abs_weighted(s.phi(k).values(), w);
  });
  double c = 0.0;
  for (double v : per_k) c = std::max(c, v);
  return c;
}

// Exhaustive over ordered cell pairs with |t - t'| <= 2^{-n}; the weight of a pair is
// the larger of its two reciprocal envelopes, i.e. either point may play the role of t.
double holder_fit(const OrthonormalSystem& s, double delta, double alpha, int offset) {
  const std::size_t k0 = first_checked(s);
  if (s.size() < k0) return 0.0;
  const std::size_t cells = s.grid.cell_count();
  const double h = s.grid.cell_width();
  const auto per_k = parallel_map<double>(s.size() - k0 + 1, [&](std::size_t i) {
    const std::size_t k = k0 + i;
    const Center c = center_for(k, offset);
    const auto w = inverse_envelope(s.grid, c, delta);
    const double scale = std::ldexp(1.0, c.level);
    const std::size_t reach =
        std::min(cells - 1, c.level >= s.grid.level() ? 1 : cells >> c.level);
    const double* f = s.phi(k).values().data();
    double best = 0.0;
    for (std::size_t d = 1; d <= reach; ++d) {
      const std::size_t len = cells - d;
      const double r = simd::active().max_abs_diff_weighted(f, f + d, w.data(), w.data() + d, len);
      best = std::max(best, r / std::pow(scale * static_cast<double>(d) * h, alpha));
    }
    return best;
  });
  double c = 0.0;
  for (double v : per_k) c = std::max(c, v);
  return c;
}

// Smallest grid-aligned a with int over t_k +- a 2^{-n} of phi_k^2 >= 1/2, maximized over k.
double local_mass_fit(const OrthonormalSystem& s, int offset) {
  const std::size_t k0 = first_checked(s);
  if (s.size() < k0) return 0.0;
  const std::size_t cells = s.grid.cell_count();
  const double h = s.grid.cell_width();
  const auto per_k = parallel_map<double>(s.size() - k0 + 1, [&](std::size_t i) {
    const std::size_t k = k0 + i;
    const Center c = center_for(k, offset);
    std::vector<double> prefix(cells + 1, 0.0);
    const auto f = s.phi(k).values();
    for (std::size_t x = 0; x < cells; ++x) prefix[x + 1] = prefix[x] + f[x] * f[x] * h;
    const double t_cells = c.t * static_cast<double>(cells);
    auto mass = [&](std::size_t d) {
      const double lo = std::max(0.0, std::floor(t_cells - static_cast<double>(d)));
      const double hi = std::min(static_cast<double>(cells), std::ceil(t_cells + static_cast<double>(d)));
      return prefix[static_cast<std::size_t>(hi)] - prefix[static_cast<std::size_t>(lo)];
    };
    std::size_t lo = 1, hi = cells;
    if (mass(hi) < 0.5) return std::numeric_limits<double>::infinity();
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (mass(mid) >= 0.5) hi = mid; else lo = mid + 1;
    }
    return static_cast<double>(lo) * h * std::ldexp(1.0, c.level);
  });
  double a = 0.0;
  for (double v : per_k) a = std::max(a, v);
  return a;
}

bool stable(double fine, double coarse, double factor) {
  if (fine == 0.0 && coarse == 0.0) return true;
  if (!(fine > 0.0) || !(coarse > 0.0)) return false;
  const double r = fine / coarse;
  return r <= factor && r >= 1.0 / factor;
}

}  // namespace

ConditionReport verify_wavelet_type(const OrthonormalSystem& s, double delta, double alpha,
                                    const ConditionOptions& options) {
  require(s.size() >= 1, ErrorKind::Domain, "system is empty");
  require(delta > 0.0 && delta < 1.0, ErrorKind::Domain, "delta must lie in (0,1)");
  require(alpha > 0.0 && alpha <= 1.0, ErrorKind::Domain, "alpha must lie in (0,1]");

  ConditionReport r;
  for (std::size_t k = first_checked(s); k <= s.size(); ++k) {
    r.mean_zero_max = std::max(r.mean_zero_max, std::fabs(integrate(s.phi(k))));
  }
  r.mean_zero_pass = r.mean_zero_max <= options.mean_zero_tolerance;

  r.decay_constant = decay_fit(s, delta, 0);
  if (options.fit_index_offset && s.first_index_special) {
    const double shifted = decay_fit(s, delta, 1);
    if (shifted < r.decay_constant) {
      r.decay_constant = shifted;
      r.index_offset = 1;
    }
  }
  r.holder_constant = holder_fit(s, delta, alpha, r.index_offset);
  r.local_mass_radius = local_mass_fit(s, r.index_offset);
  r.local_mass_pass = std::isfinite(r.local_mass_radius) && r.local_mass_radius <= options.local_mass_cap;

  bool decay_stable = true;
  bool holder_stable = true;
  if (options.check_stability && s.grid.level() >= 1) {
    const OrthonormalSystem coarse = coarsen(s);
    r.decay_constant_coarse = decay_fit(coarse, delta, r.index_offset);
    r.holder_constant_coarse = holder_fit(coarse, delta, alpha, r.index_offset);
    decay_stable = stable(r.decay_constant, r.decay_constant_coarse, options.stability_factor);
    holder_stable = stable(r.holder_constant, r.holder_constant_coarse, options.stability_factor);
  }
  r.decay_pass = std::isfinite(r.decay_constant) && r.decay_constant <= options.decay_cap && decay_stable;
  r.holder_pass =
      std::isfinite(r.holder_constant) && r.holder_constant <= options.holder_cap && holder_stable;
  return r;
}

}  // namespace weyl
