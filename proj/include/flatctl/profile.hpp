#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "flatctl/errors.hpp"

namespace flatctl {

/// Complex piecewise polynomial on (0,1). Piece i lives on
/// (breakpoints[i], breakpoints[i+1]) and holds monomial coefficients in the
/// global variable x, lowest degree first.
class PiecewiseProfile {
 public:
  using cplx = std::complex<double>;

  PiecewiseProfile() : PiecewiseProfile({0.0, 1.0}, {{cplx{}}}) {}

  PiecewiseProfile(std::vector<double> breakpoints, std::vector<std::vector<cplx>> pieces)
      : bp_(std::move(breakpoints)), pieces_(std::move(pieces)) {
    if (bp_.size() < 2) throw DomainError("profile needs at least the breakpoints 0 and 1");
    if (bp_.front() != 0.0 || bp_.back() != 1.0) {
      throw DomainError("profile breakpoints must start at 0 and end at 1");
    }
    for (std::size_t i = 1; i < bp_.size(); ++i) {
      if (!(bp_[i - 1] < bp_[i])) throw DomainError("profile breakpoints must increase strictly");
    }
    if (pieces_.size() + 1 != bp_.size()) {
      throw DomainError("profile needs one piece per interval");
    }
    for (auto& p : pieces_) {
      if (p.empty()) p.push_back(cplx{});
      for (const auto& c : p) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
          throw DomainError("profile coefficients must be finite");
        }
      }
    }
  }

  static PiecewiseProfile zero() { return {}; }

  /// Constant value per interval.
  static PiecewiseProfile piecewise_constant(std::vector<double> breakpoints,
                                             const std::vector<cplx>& values) {
    std::vector<std::vector<cplx>> pieces;
    pieces.reserve(values.size());
    for (const auto& v : values) pieces.push_back({v});
    return {std::move(breakpoints), std::move(pieces)};
  }

  /// The discontinuous datum of the reference experiment: Re = 1 on (0.5,1),
  /// Im = 1 on (0.2,0.7), zero elsewhere.
  static PiecewiseProfile reference_step_datum() {
    return piecewise_constant({0.0, 0.2, 0.5, 0.7, 1.0},
                              {cplx{0, 0}, cplx{0, 1}, cplx{1, 1}, cplx{1, 0}});
  }

  const std::vector<double>& breakpoints() const { return bp_; }
  const std::vector<std::vector<cplx>>& pieces() const { return pieces_; }

  /// Breakpoints strictly inside (0,1).
  std::vector<double> interior_breakpoints() const {
    return {bp_.begin() + 1, bp_.end() - 1};
  }

  /// Support of the datum on the positive half-line.
  double support_end() const { return 1.0; }

  std::size_t piece_index(double x) const {
    auto it = std::upper_bound(bp_.begin(), bp_.end(), x);
    std::size_t i = (it == bp_.begin()) ? 0 : static_cast<std::size_t>(it - bp_.begin()) - 1;
    return std::min(i, pieces_.size() - 1);
  }

  cplx eval_piece(std::size_t i, double x) const {
    const auto& p = pieces_[i];
    cplx acc{};
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  /// Value on (0,1); zero outside. At a breakpoint the right-hand piece wins.
  cplx operator()(double x) const {
    if (x < 0.0 || x > 1.0) return {};
    return eval_piece(piece_index(x), x);
  }

  /// Pointwise value with the mean of the one-sided limits at interior
  /// breakpoints and one-sided limits at 0 and 1.
  cplx sample(double x) const {
    if (x <= 0.0) return eval_piece(0, 0.0);
    if (x >= 1.0) return eval_piece(pieces_.size() - 1, 1.0);
    auto it = std::find(bp_.begin() + 1, bp_.end() - 1, x);
    if (it != bp_.end() - 1) {
      const std::size_t i = static_cast<std::size_t>(it - bp_.begin());
      return 0.5 * (eval_piece(i - 1, x) + eval_piece(i, x));
    }
    return (*this)(x);
  }

  /// Exact L^2(0,1) norm.
  double l2_norm() const {
    double sum = 0.0;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      const auto& p = pieces_[i];
      const double a = bp_[i];
      const double b = bp_[i + 1];
      for (std::size_t j = 0; j < p.size(); ++j) {
        for (std::size_t k = 0; k < p.size(); ++k) {
          const double e = static_cast<double>(j + k + 1);
          sum += std::real(p[j] * std::conj(p[k])) * (std::pow(b, e) - std::pow(a, e)) / e;
        }
      }
    }
    return std::sqrt(std::max(sum, 0.0));
  }

  /// L^1(0,1) norm. Composite Gauss-Legendre per piece on a fine split; exact
  /// for piecewise constants and accurate to ~1e-12 for the cubic pieces used
  /// here.
  double l1_norm() const {
    static constexpr double gx[5] = {-0.906179845938664, -0.538469310105683, 0.0,
                                     0.538469310105683, 0.906179845938664};
    static constexpr double gw[5] = {0.236926885056189, 0.478628670499366,
                                     0.568888888888889, 0.478628670499366,
                                     0.236926885056189};
    double sum = 0.0;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      if (pieces_[i].size() == 1) {
        sum += std::abs(pieces_[i][0]) * (bp_[i + 1] - bp_[i]);
        continue;
      }
      constexpr int splits = 256;
      const double h = (bp_[i + 1] - bp_[i]) / splits;
      for (int k = 0; k < splits; ++k) {
        const double c = bp_[i] + (k + 0.5) * h;
        for (int q = 0; q < 5; ++q) sum += 0.5 * h * gw[q] * std::abs(eval_piece(i, c + 0.5 * h * gx[q]));
      }
    }
    return sum;
  }

  bool is_zero() const {
    for (const auto& p : pieces_) {
      for (const auto& c : p) {
        if (c != cplx{}) return false;
      }
    }
    return true;
  }

  /// Coefficients of the derivative, piece by piece.
  PiecewiseProfile derivative() const {
    std::vector<std::vector<cplx>> d;
    for (const auto& p : pieces_) {
      std::vector<cplx> q;
      for (std::size_t j = 1; j < p.size(); ++j) q.push_back(static_cast<double>(j) * p[j]);
      if (q.empty()) q.push_back(cplx{});
      d.push_back(std::move(q));
    }
    return {bp_, std::move(d)};
  }

 private:
  std::vector<double> bp_;
  std::vector<std::vector<cplx>> pieces_;
};

}  // namespace flatctl
