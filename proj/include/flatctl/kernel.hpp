#pragma once

// Free Schrödinger kernel E(t,x) = (4 pi i t)^{-1/2} exp(i x^2 / 4t), its
// x-derivatives of arbitrary order, and the odd-symmetrized difference
// F(t,x,y) = E(t,x-y) - E(t,x+y).

#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "flatctl/errors.hpp"

namespace flatctl {

using cplx = std::complex<double>;

inline constexpr int kDefaultMaxKernelOrder = 64;

namespace detail {
inline void require_nonzero_time(double t) {
  if (t == 0.0 || !std::isfinite(t)) {
    throw DomainError("Schrödinger kernel is singular at t = 0");
  }
}
}  // namespace detail

/// E(t,x) with the principal branch of (4 pi i t)^{1/2}.
inline cplx fundamental_solution(double t, double x) {
  detail::require_nonzero_time(t);
  const double modulus = 1.0 / std::sqrt(4.0 * std::numbers::pi * std::abs(t));
  // arg(4 pi i t)^{1/2} = +pi/4 for t > 0 and -pi/4 for t < 0.
  const double branch = t > 0.0 ? -std::numbers::pi / 4.0 : std::numbers::pi / 4.0;
  return std::polar(modulus, x * x / (4.0 * t) + branch);
}

/// Polynomial p_m with d^m/dx^m exp(i x^2/4t) = p_m(x) exp(i x^2/4t) at a
/// fixed time. Only monomials with the parity of m are nonzero.
class KernelDerivPoly {
 public:
  /// p_0 == 1.
  explicit KernelDerivPoly(double t) : t_(t), coeffs_{cplx{1.0, 0.0}} {
    detail::require_nonzero_time(t);
  }

  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  double time() const { return t_; }
  const std::vector<cplx>& coeffs() const { return coeffs_; }

  /// p_{m+1} = p_m' + (i x / 2t) p_m.
  KernelDerivPoly next() const {
    const cplx a{0.0, 1.0 / (2.0 * t_)};
    const int m = order();
    KernelDerivPoly out(t_);
    out.coeffs_.assign(m + 2, cplx{});
    for (int j = 0; j <= m + 1; ++j) {
      cplx c{};
      if (j + 1 <= m) c += static_cast<double>(j + 1) * coeffs_[j + 1];
      if (j >= 1) c += a * coeffs_[j - 1];
      out.coeffs_[j] = c;
    }
    return out;
  }

  /// Horner in x^2 over the monomials of matching parity.
  cplx operator()(double x) const {
    const int m = order();
    const double x2 = x * x;
    cplx acc{};
    for (int j = m; j >= 0; j -= 2) acc = acc * x2 + coeffs_[j];
    return (m % 2 == 1) ? acc * x : acc;
  }

  double max_abs_coeff() const {
    double mx = 0.0;
    for (const auto& c : coeffs_) mx = std::max(mx, std::abs(c));
    return mx;
  }

 private:
  double t_;
  std::vector<cplx> coeffs_;
};

/// All p_0..p_M for one time, built once. Construction throws
/// CapabilityError if the coefficients leave the safe floating range.
class KernelDerivTable {
 public:
  KernelDerivTable(double t, int max_order) : t_(t) {
    detail::require_nonzero_time(t);
    if (max_order < 0) throw DomainError("negative derivative order");
    polys_.reserve(max_order + 1);
    polys_.emplace_back(t);
    for (int m = 1; m <= max_order; ++m) {
      polys_.push_back(polys_.back().next());
      const double mx = polys_.back().max_abs_coeff();
      if (!std::isfinite(mx) || mx > kCoeffCeiling) {
        throw CapabilityError("kernel derivative coefficients overflow at order " +
                              std::to_string(m) + " for t = " + std::to_string(t));
      }
    }
  }

  double time() const { return t_; }
  int max_order() const { return static_cast<int>(polys_.size()) - 1; }
  const KernelDerivPoly& poly(int m) const { return polys_.at(m); }

  /// d^m/dx^m E(t,x).
  cplx derivative(double x, int m) const {
    return polys_.at(m)(x) * fundamental_solution(t_, x);
  }

  /// d^m/dx^m F(t,x,y).
  cplx odd_derivative(double x, double y, int m) const {
    return derivative(x - y, m) - derivative(x + y, m);
  }

 private:
  static constexpr double kCoeffCeiling = 1e250;
  double t_;
  std::vector<KernelDerivPoly> polys_;
};

namespace detail {

// Per-thread cache of derivative tables keyed by time. Tables only ever grow.
inline const KernelDerivTable& cached_table(double t, int m, int max_order) {
  if (m < 0) throw DomainError("negative derivative order");
  if (m > max_order) {
    throw CapabilityError("derivative order " + std::to_string(m) +
                          " exceeds the configured maximum " +
                          std::to_string(max_order));
  }
  thread_local std::map<double, KernelDerivTable> cache;
  auto it = cache.find(t);
  if (it == cache.end() || it->second.max_order() < m) {
    if (cache.size() > 256) cache.clear();
    const int build = std::max(m, it == cache.end() ? 0 : 2 * it->second.max_order());
    KernelDerivTable table(t, std::min(build, max_order));
    it = cache.insert_or_assign(t, std::move(table)).first;
  }
  return it->second;
}

}  // namespace detail

inline cplx kernel_derivative(double t, double x, int m,
                              int max_order = kDefaultMaxKernelOrder) {
  detail::require_nonzero_time(t);
  return detail::cached_table(t, m, max_order).derivative(x, m);
}

inline cplx odd_kernel(double t, double x, double y, int m,
                       int max_order = kDefaultMaxKernelOrder) {
  detail::require_nonzero_time(t);
  return detail::cached_table(t, m, max_order).odd_derivative(x, y, m);
}

}  // namespace flatctl
