#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace kdvlab {

using Complex = std::complex<double>;

inline constexpr Complex I{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

class KdvError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Bad input: wrong domain, malformed config, grid mismatch.
class DomainError : public KdvError {
public:
  using KdvError::KdvError;
};

// Numerical procedure could not deliver the requested accuracy.
class NumericalError : public KdvError {
public:
  using KdvError::KdvError;
};

// W(ic) = 0: the data set is outside the admissible class.
class ResonanceError : public KdvError {
public:
  using KdvError::KdvError;
};

// Evaluation at (or numerically on top of) a pole.
class PoleError : public KdvError {
public:
  using KdvError::KdvError;
};

// Complex number stored as mantissa * exp(log_mag).  Products of large and
// small exponentials stay finite until the final value() call.
struct LogScaled {
  Complex mantissa{1.0, 0.0};
  double log_mag = 0.0;

  static LogScaled exp_of(Complex z) {
    return {std::exp(Complex(0.0, z.imag())), z.real()};
  }
  static LogScaled of(Complex z) { return {z, 0.0}; }

  LogScaled operator*(const LogScaled& o) const {
    return {mantissa * o.mantissa, log_mag + o.log_mag};
  }
  LogScaled operator*(Complex z) const { return {mantissa * z, log_mag}; }
  LogScaled operator/(const LogScaled& o) const {
    return {mantissa / o.mantissa, log_mag - o.log_mag};
  }
  LogScaled inverse() const { return {1.0 / mantissa, -log_mag}; }

  // log|value|, -inf for an exact zero
  double log_abs() const {
    double a = std::abs(mantissa);
    return a == 0.0 ? -INFINITY : std::log(a) + log_mag;
  }
  Complex value() const {
    if (mantissa == Complex(0.0, 0.0)) return {0.0, 0.0};
    if (log_mag < -745.0 - std::log(std::abs(mantissa))) return {0.0, 0.0};
    return mantissa * std::exp(log_mag);
  }
};

}  // namespace kdvlab
