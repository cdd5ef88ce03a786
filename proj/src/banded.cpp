#include "weyl/banded.hpp"

#include <algorithm>
#include <cmath>

#include "weyl/error.hpp"

namespace weyl {

TridiagonalSpd::TridiagonalSpd(std::vector<double> diag, std::vector<double> off)
    : d_(std::move(diag)), l_(std::move(off)) {
  const std::size_t n = d_.size();
  require(n > 0 && l_.size() + 1 == n, ErrorKind::Shape, "tridiagonal: inconsistent band sizes");
  double scale = 0.0;
  for (double v : d_) scale = std::max(scale, std::fabs(v));
  require(scale > 0.0 && std::isfinite(scale), ErrorKind::Numeric, "tridiagonal: zero matrix");

  const double tiny = 1e-14 * scale;
  min_relative_pivot_ = d_[0] / scale;
  require(d_[0] > tiny, ErrorKind::Numeric, "tridiagonal: matrix is not positive definite");
  for (std::size_t i = 1; i < n; ++i) {
    const double e = l_[i - 1];
    l_[i - 1] = e / d_[i - 1];
    d_[i] -= l_[i - 1] * e;
    require(d_[i] > tiny, ErrorKind::Numeric, "tridiagonal: matrix is not positive definite");
    min_relative_pivot_ = std::min(min_relative_pivot_, d_[i] / scale);
  }
}

void TridiagonalSpd::solve(std::span<double> b) const {
  const std::size_t n = d_.size();
  require(b.size() == n, ErrorKind::Shape, "tridiagonal: right-hand side has wrong length");
  for (std::size_t i = 1; i < n; ++i) b[i] -= l_[i - 1] * b[i - 1];
  for (std::size_t i = 0; i < n; ++i) b[i] /= d_[i];
  for (std::size_t i = n - 1; i-- > 0;) b[i] -= l_[i] * b[i + 1];
}

}  // namespace weyl
