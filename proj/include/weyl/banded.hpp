#pragma once

#include <span>
#include <vector>

namespace weyl {

/// Symmetric positive definite tridiagonal matrix, factored once as L D L^T.
class TridiagonalSpd {
 public:
  /// diag has n entries, off has n-1 (the sub/super diagonal).
  /// Throws ErrorKind::Numeric if a pivot is not safely positive.
  TridiagonalSpd(std::vector<double> diag, std::vector<double> off);

  std::size_t size() const noexcept { return d_.size(); }
  /// Solves A x = b in place.
  void solve(std::span<double> b) const;
  /// Smallest pivot relative to the largest diagonal entry; a cheap conditioning hint.
  double min_relative_pivot() const noexcept { return min_relative_pivot_; }

 private:
  std::vector<double> d_;  // pivots of D
  std::vector<double> l_;  // subdiagonal of unit L
  double min_relative_pivot_ = 1.0;
};

}  // namespace weyl
