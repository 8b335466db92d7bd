#pragma once

// Truncated Taylor series ("jets") with Taylor-mode arithmetic. A jet of
// order N at `center` stores c_j = f^{(j)}(center) / j! for j = 0..N.
// Every recurrence below computes coefficient n from coefficients <= n of
// its inputs only, so a jet of lower order is an exact prefix of a jet of
// higher order built by the same chain.

#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "flatctl/errors.hpp"

namespace flatctl {

template <class T>
class Jet {
 public:
  using value_type = T;

  Jet() = default;
  Jet(double center, std::vector<T> coeffs) : center_(center), c_(std::move(coeffs)) {
    if (c_.empty()) throw DomainError("a jet needs at least one coefficient");
  }

  static Jet constant(double center, int order, T value) {
    std::vector<T> c(order + 1, T{});
    c[0] = value;
    return Jet(center, std::move(c));
  }

  /// The identity function x -> x expanded at `center`.
  static Jet variable(double center, int order) {
    std::vector<T> c(order + 1, T{});
    c[0] = T(center);
    if (order >= 1) c[1] = T(1);
    return Jet(center, std::move(c));
  }

  double center() const { return center_; }
  int order() const { return static_cast<int>(c_.size()) - 1; }
  std::span<const T> coeffs() const { return c_; }
  const T& operator[](int j) const { return c_[j]; }
  T& operator[](int j) { return c_[j]; }

  /// f^{(j)}(center) = j! c_j.
  T derivative(int j) const {
    double f = 1.0;
    for (int i = 2; i <= j; ++i) f *= i;
    return c_[j] * f;
  }

  /// Jet of x -> f(a x + b) for the inner map at the matching center: the
  /// j-th coefficient picks up a^j.
  Jet scaled(double a, double new_center) const {
    Jet out = *this;
    out.center_ = new_center;
    double p = 1.0;
    for (auto& c : out.c_) {
      c *= p;
      p *= a;
    }
    return out;
  }

  Jet truncated(int order) const {
    return Jet(center_, std::vector<T>(c_.begin(), c_.begin() + order + 1));
  }

  bool all_finite() const {
    for (const auto& c : c_) {
      if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(c)) return false;
      } else {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
      }
    }
    return true;
  }

  Jet& operator+=(const Jet& o) {
    check(o);
    for (int j = 0; j <= order(); ++j) c_[j] += o.c_[j];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    check(o);
    for (int j = 0; j <= order(); ++j) c_[j] -= o.c_[j];
    return *this;
  }
  Jet& operator*=(T s) {
    for (auto& c : c_) c *= s;
    return *this;
  }

  friend Jet operator+(Jet l, const Jet& r) { return l += r; }
  friend Jet operator-(Jet l, const Jet& r) { return l -= r; }
  friend Jet operator*(Jet l, T s) { return l *= s; }
  friend Jet operator*(T s, Jet l) { return l *= s; }
  friend Jet operator-(Jet l) { return l *= T(-1); }
  friend Jet operator+(Jet l, T s) {
    l.c_[0] += s;
    return l;
  }
  friend Jet operator-(T s, const Jet& r) {
    Jet out = -r;
    out.c_[0] += s;
    return out;
  }

  /// Cauchy product.
  friend Jet operator*(const Jet& a, const Jet& b) {
    a.check(b);
    const int n = a.order();
    std::vector<T> c(n + 1, T{});
    for (int k = 0; k <= n; ++k) {
      T acc{};
      for (int j = 0; j <= k; ++j) acc += a.c_[j] * b.c_[k - j];
      c[k] = acc;
    }
    return Jet(a.center_, std::move(c));
  }

  /// q = a / b from b q = a.
  friend Jet operator/(const Jet& a, const Jet& b) {
    a.check(b);
    if (b.c_[0] == T{}) throw DomainError("jet division by a function vanishing at the center");
    const int n = a.order();
    std::vector<T> q(n + 1, T{});
    for (int k = 0; k <= n; ++k) {
      T acc = a.c_[k];
      for (int j = 1; j <= k; ++j) acc -= b.c_[j] * q[k - j];
      q[k] = acc / b.c_[0];
    }
    return Jet(a.center_, std::move(q));
  }

 private:
  void check(const Jet& o) const {
    if (o.order() != order()) throw DomainError("jet orders differ");
  }

  double center_ = 0.0;
  std::vector<T> c_{T{}};
};

using RealJet = Jet<double>;
using ComplexJet = Jet<std::complex<double>>;

/// h = exp(f) from h' = f' h.
template <class T>
Jet<T> exp(const Jet<T>& f) {
  const int n = f.order();
  std::vector<T> h(n + 1, T{});
  h[0] = std::exp(f[0]);
  for (int k = 1; k <= n; ++k) {
    T acc{};
    for (int j = 1; j <= k; ++j) acc += static_cast<double>(j) * f[j] * h[k - j];
    h[k] = acc / static_cast<double>(k);
  }
  return Jet<T>(f.center(), std::move(h));
}

/// g = f^a for real a and a positive leading coefficient, from f g' = a f' g.
inline RealJet pow(const RealJet& f, double a) {
  if (!(f[0] > 0.0)) throw DomainError("real power of a jet needs a positive base");
  const int n = f.order();
  std::vector<double> g(n + 1, 0.0);
  g[0] = std::pow(f[0], a);
  for (int k = 1; k <= n; ++k) {
    double acc = 0.0;
    for (int j = 1; j <= k; ++j) acc += (a * j - (k - j)) * f[j] * g[k - j];
    g[k] = acc / (k * f[0]);
  }
  return RealJet(f.center(), std::move(g));
}

inline ComplexJet to_complex(const RealJet& r) {
  std::vector<std::complex<double>> c(r.coeffs().begin(), r.coeffs().end());
  return ComplexJet(r.center(), std::move(c));
}

}  // namespace flatctl
