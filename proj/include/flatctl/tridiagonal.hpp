#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "flatctl/errors.hpp"

namespace flatctl {

/// LU factorisation (no pivoting) of a complex tridiagonal matrix, reused
/// across many right-hand sides.
class TridiagonalLU {
 public:
  using cplx = std::complex<double>;

  /// lower[i] multiplies x[i-1] in row i (lower[0] unused); upper[i]
  /// multiplies x[i+1] (upper[n-1] unused).
  TridiagonalLU(std::vector<cplx> lower, std::vector<cplx> diag, std::vector<cplx> upper)
      : lower_(std::move(lower)), upper_(std::move(upper)), pivot_(std::move(diag)) {
    const std::size_t n = pivot_.size();
    if (n == 0 || lower_.size() != n || upper_.size() != n) {
      throw DomainError("tridiagonal bands must have equal nonzero length");
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0) pivot_[i] -= lower_[i] / pivot_[i - 1] * upper_[i - 1];
      if (!(std::abs(pivot_[i]) > 0.0) || !std::isfinite(std::abs(pivot_[i]))) {
        throw NumericalError("tridiagonal factorisation broke down at row " + std::to_string(i));
      }
    }
  }

  /// Constant-band convenience constructor.
  static TridiagonalLU constant(std::size_t n, cplx lower, cplx diag, cplx upper) {
    return {std::vector<cplx>(n, lower), std::vector<cplx>(n, diag), std::vector<cplx>(n, upper)};
  }

  std::size_t size() const { return pivot_.size(); }

  /// Solves in place.
  void solve(std::span<cplx> rhs) const {
    const std::size_t n = pivot_.size();
    if (rhs.size() != n) throw DomainError("right-hand side size mismatch");
    for (std::size_t i = 1; i < n; ++i) rhs[i] -= lower_[i] / pivot_[i - 1] * rhs[i - 1];
    rhs[n - 1] /= pivot_[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - upper_[i] * rhs[i + 1]) / pivot_[i];
    for (const auto& v : rhs) {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw NumericalError("tridiagonal solve produced a non-finite value");
      }
    }
  }

 private:
  std::vector<cplx> lower_;
  std::vector<cplx> upper_;
  std::vector<cplx> pivot_;
};

}  // namespace flatctl
