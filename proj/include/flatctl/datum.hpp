#pragma once

// Initial data accepted by the smoothing phase: anything callable on
// (0, support_end()) that also reports its interior discontinuities and a
// midpointed `sample`. PiecewiseProfile satisfies this directly; Profile
// wraps an arbitrary function.

#include <complex>
#include <concepts>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "flatctl/profile.hpp"

namespace flatctl {

template <class D>
concept OddDatum = requires(const D& d, double x) {
  { d(x) } -> std::convertible_to<std::complex<double>>;
  { d.sample(x) } -> std::convertible_to<std::complex<double>>;
  { d.interior_breakpoints() } -> std::convertible_to<std::vector<double>>;
  { d.support_end() } -> std::convertible_to<double>;
};

/// Type-erased datum on (0, support_end). Keeps the piecewise polynomial form
/// when there is one, so closed-form paths stay available.
class Profile {
 public:
  using cplx = std::complex<double>;
  using Fn = std::function<cplx(double)>;

  Profile() : Profile(PiecewiseProfile::zero()) {}

  Profile(PiecewiseProfile p)  // NOLINT(google-explicit-constructor)
      : fn_([p](double x) { return p(x); }),
        sampler_([p](double x) { return p.sample(x); }),
        breakpoints_(p.interior_breakpoints()),
        end_(p.support_end()),
        poly_(std::move(p)) {}

  /// Continuous function on (0, end) with the given interior breakpoints.
  Profile(Fn f, std::vector<double> interior_breakpoints = {}, double end = 1.0)
      : fn_(f), sampler_(f), breakpoints_(std::move(interior_breakpoints)), end_(end) {}

  cplx operator()(double x) const {
    if (x < 0.0 || x > end_) return {};
    return fn_(x);
  }
  cplx sample(double x) const { return sampler_(x); }
  std::vector<double> interior_breakpoints() const { return breakpoints_; }
  double support_end() const { return end_; }
  const std::optional<PiecewiseProfile>& polynomial() const { return poly_; }

 private:
  Fn fn_;
  Fn sampler_;
  std::vector<double> breakpoints_;
  double end_ = 1.0;
  std::optional<PiecewiseProfile> poly_;
};

static_assert(OddDatum<PiecewiseProfile>);
static_assert(OddDatum<Profile>);

}  // namespace flatctl
