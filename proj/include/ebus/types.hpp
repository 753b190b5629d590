#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace ebus {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

inline constexpr double kPi = 3.14159265358979323846;

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user input or violated precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A chain whose couplings are not the angular-momentum profile.
class UnsupportedProfile : public Error {
 public:
  using Error::Error;
};

/// Eigensolver or propagator did not converge.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// Hilbert-space dimension, bus capacity or another resource cap exceeded.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// A schedule that cannot be executed (occupied targets, empty withdrawals).
class ScheduleError : public Error {
 public:
  using Error::Error;
};

}  // namespace ebus
