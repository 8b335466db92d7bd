#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace flatctl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A request exceeds a configured capability (derivative order, jet order).
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
/// The best available value and its error estimate are carried along.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_re, double best_im,
                   double err_estimate)
      : Error(what), best_re_(best_re), best_im_(best_im), err_(err_estimate) {}

  double best_real() const { return best_re_; }
  double best_imag() const { return best_im_; }
  double error_estimate() const { return err_; }

 private:
  double best_re_;
  double best_im_;
  double err_;
};

/// Floating point overflow or a breakdown in a linear solve.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A file could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Configuration violates a scenario invariant. `field()` names the culprit.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

namespace detail {

/// Runs `fn`, prefixing any library error with the pipeline stage that raised
/// it. The error class is preserved.
template <class Fn>
decltype(auto) in_stage(const std::string& stage, Fn&& fn) {
  try {
    return fn();
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(stage + ": " + e.what(), e.best_real(), e.best_imag(), e.error_estimate());
  } catch (const ValidationError&) {
    throw;
  } catch (const NumericalError& e) {
    throw NumericalError(stage + ": " + e.what());
  } catch (const CapabilityError& e) {
    throw CapabilityError(stage + ": " + e.what());
  } catch (const DomainError& e) {
    throw DomainError(stage + ": " + e.what());
  }
}

}  // namespace detail

}  // namespace flatctl
