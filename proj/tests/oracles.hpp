#pragma once

// Reference computations for the test suite. Nothing here calls into the
// library's kernel, jet, or quadrature code.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using mp = boost::multiprecision::cpp_bin_float_50;
using cplx = std::complex<double>;

struct mp_complex {
  mp re, im;
};

/// (4 pi i t)^{-1/2} e^{i x^2 / 4t} for t > 0 in 50 digits.
inline mp_complex fundamental_solution(const mp& t, const mp& x) {
  const mp pi = boost::math::constants::pi<mp>();
  const mp amp = 1 / sqrt(4 * pi * t);
  const mp phase = x * x / (4 * t) - pi / 4;
  return {amp * cos(phase), amp * sin(phase)};
}

/// Same formula in plain double arithmetic, for dense-rule oracles.
inline cplx kernel(double t, double x) {
  const double pi = boost::math::constants::pi<double>();
  return std::polar(1.0 / std::sqrt(4.0 * pi * t), x * x / (4.0 * t) - pi / 4.0);
}

inline cplx to_double(const mp_complex& z) {
  return {static_cast<double>(z.re), static_cast<double>(z.im)};
}

/// m-th x-derivative of E by central differences with one Richardson step,
/// all in 50-digit arithmetic.
inline cplx kernel_derivative_fd(double t, double x, int m, double h = 1e-4) {
  auto central = [&](const mp& step) {
    mp re = 0, im = 0;
    mp binom = 1;
    for (int j = 0; j <= m; ++j) {
      const mp offset = (mp(m) / 2 - j) * step;
      const auto e = fundamental_solution(mp(t), mp(x) + offset);
      const mp w = (j % 2 == 0 ? binom : -binom);
      re += w * e.re;
      im += w * e.im;
      binom = binom * (m - j) / (j + 1);
    }
    const mp scale = pow(step, m);
    return mp_complex{re / scale, im / scale};
  };
  const auto coarse = central(mp(h));
  const auto fine = central(mp(h) / 2);
  return {static_cast<double>((4 * fine.re - coarse.re) / 3),
          static_cast<double>((4 * fine.im - coarse.im) / 3)};
}

inline mp step_function(const mp& t, const mp& s) {
  if (t <= 0) return 1;
  if (t >= 1) return 0;
  const mp kappa = 1 / (s - 1);
  const mp a = exp(-pow(1 - t, -kappa));
  const mp b = exp(-pow(t, -kappa));
  return a / (a + b);
}

/// Composite Simpson on each interval between consecutive edges, n panels
/// per unit length (rounded up, even).
inline cplx simpson(const std::function<cplx(double)>& f, const std::vector<double>& edges,
                    int panels_per_unit) {
  cplx total{};
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double a = edges[i];
    const double b = edges[i + 1];
    int n = static_cast<int>(std::ceil((b - a) * panels_per_unit));
    if (n % 2) ++n;
    const double h = (b - a) / n;
    // Endpoints are taken from inside the interval so jumps at the edges
    // use the right one-sided value.
    std::complex<long double> acc = static_cast<std::complex<long double>>(f(std::nextafter(a, b))) +
                                    static_cast<std::complex<long double>>(f(std::nextafter(b, a)));
    for (int j = 1; j < n; ++j) {
      acc += static_cast<long double>(j % 2 ? 4 : 2) *
             static_cast<std::complex<long double>>(f(a + j * h));
    }
    total += cplx(acc * static_cast<long double>(h / 3));
  }
  return total;
}

/// The reference datum: Re = 1 on (0.5,1), Im = 1 on (0.2,0.7).
inline cplx reference_datum(double y) {
  const double re = (y > 0.5 && y < 1.0) ? 1.0 : 0.0;
  const double im = (y > 0.2 && y < 0.7) ? 1.0 : 0.0;
  return {re, im};
}

}  // namespace oracle
