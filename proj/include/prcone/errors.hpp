#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace prcone {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A matrix expected to be positive semidefinite has an eigenvalue below the
/// tolerance band.
class NotPSD : public Error {
 public:
  NotPSD(double eigenvalue, const std::string& what)
      : Error(what), eigenvalue_(eigenvalue) {}
  double eigenvalue() const noexcept { return eigenvalue_; }

 private:
  double eigenvalue_;
};

class SingularMatrix : public Error {
 public:
  SingularMatrix(double cond, const std::string& what)
      : Error(what), cond_(cond) {}
  double cond() const noexcept { return cond_; }

 private:
  double cond_;
};

/// Re(A) fails to be positive semidefinite; carries eigmin(Re(A)).
class NotPositiveReal : public Error {
 public:
  NotPositiveReal(double eigmin, const std::string& what)
      : Error(what), eigmin_(eigmin) {}
  double eigmin() const noexcept { return eigmin_; }

 private:
  double eigmin_;
};

/// W*JW <= J fails; carries eigmax(W*JW - J).
class NotJContractive : public Error {
 public:
  NotJContractive(double excess, const std::string& what)
      : Error(what), excess_(excess) {}
  double excess() const noexcept { return excess_; }

 private:
  double excess_;
};

/// The denominator of a linear fractional transformation is not invertible.
class OutOfDomain : public Error {
 public:
  OutOfDomain(double cond, std::complex<double> point, const std::string& what)
      : Error(what), cond_(cond), point_(point) {}
  double cond() const noexcept { return cond_; }
  /// Disc point where the failure happened (0 for constant transformations).
  std::complex<double> point() const noexcept { return point_; }

 private:
  double cond_;
  std::complex<double> point_;
};

/// A quantity that must hold by construction failed its numerical check.
class InvariantViolation : public Error {
 public:
  InvariantViolation(double residual, const std::string& what)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace prcone
