#pragma once

#include <mpfr.h>

#include <string>

#include "kempner/moments.hpp"

namespace kempner {

/// Working precision. Target digits map to bits as ceil(digits*log2(10)) + guard.
struct Precision {
  int digits = 30;
  int guard_bits = 64;

  static Precision from_bits(long bits, int guard = 64);
  long target_bits() const;
  long working_bits() const { return target_bits() + guard_bits; }
  Precision doubled() const { return {digits * 2, guard_bits}; }
};

/// Owning wrapper around mpfr_t.
class Real {
 public:
  explicit Real(mpfr_prec_t bits = 64);
  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  mpfr_ptr get() noexcept { return value_; }
  mpfr_srcptr get() const noexcept { return value_; }
  mpfr_prec_t precision() const noexcept { return mpfr_get_prec(value_); }

  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  /// Scientific notation with the requested significant digits.
  std::string to_string(int digits = 20, mpfr_rnd_t rnd = MPFR_RNDN) const;

 private:
  mpfr_t value_;
};

/// Real number enclosure [mid - rad, mid + rad]. The midpoint carries the
/// working precision; the radius is a short float rounded upward.
class Ball {
 public:
  static constexpr mpfr_prec_t kRadiusBits = 64;

  explicit Ball(mpfr_prec_t bits = 128);
  Ball(long value, mpfr_prec_t bits);
  Ball(const BigRational& value, mpfr_prec_t bits);

  /// num/den with a single rounding; the fraction need not be reduced.
  static Ball from_ratio(const BigInteger& num, const BigInteger& den, mpfr_prec_t bits);
  static Ball exact_zero(mpfr_prec_t bits) { return Ball(bits); }
  /// Wraps a midpoint just produced by a round-to-nearest MPFR call; `ternary`
  /// is that call's inexact flag.
  static Ball from_rounded(Real mid, int ternary);

  const Real& mid() const noexcept { return mid_; }
  const Real& rad() const noexcept { return rad_; }
  mpfr_prec_t precision() const noexcept { return mid_.precision(); }

  double mid_double() const { return mid_.to_double(); }
  double rad_double() const;

  /// Widen the radius by a nonnegative amount (rounded up).
  Ball& add_error(const Real& err);
  Ball& add_error(double err);
  Ball& add_error(const BigRational& err);

  Ball operator-() const;
  Ball& operator+=(const Ball& other);
  Ball& operator-=(const Ball& other);
  Ball& operator*=(const Ball& other);
  Ball& operator/=(const Ball& other);
  friend Ball operator+(Ball a, const Ball& b) { return a += b; }
  friend Ball operator-(Ball a, const Ball& b) { return a -= b; }
  friend Ball operator*(Ball a, const Ball& b) { return a *= b; }
  friend Ball operator/(Ball a, const Ball& b) { return a /= b; }

  Ball& mul_rational(const BigRational& q);
  Ball& mul_si(long k);
  Ball& div_si(long k);

  /// mid - rad rounded down, mid + rad rounded up.
  Real lower() const;
  Real upper() const;

  bool is_exact() const { return mpfr_zero_p(rad_.get()) != 0; }
  bool is_zero() const { return is_exact() && mpfr_zero_p(mid_.get()) != 0; }
  bool contains(const Ball& other) const;
  bool contains(double x) const;
  bool contains(const BigRational& q) const;
  bool overlaps(const Ball& other) const;
  /// Entire enclosure lies strictly below the other one.
  bool certainly_less(const Ball& other) const;
  bool certainly_positive() const;
  bool certainly_negative() const;

  std::string to_string(int digits = 20) const;

 private:
  friend Ball ball_log(const Ball& x);
  void add_rounding_error(int ternary);

  Real mid_;
  Real rad_;
};

Ball ball_log(const Ball& x);

/// Upper bound on a nonnegative rational, rounded up to a short float.
Real upper_real(const BigRational& q);

}  // namespace kempner
