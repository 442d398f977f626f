#include "kempner/ball.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <utility>
#include <vector>

#include "kempner/errors.hpp"

namespace kempner {

Precision Precision::from_bits(long bits, int guard) {
  Precision p;
  p.digits = static_cast<int>(std::ceil(static_cast<double>(bits) / std::log2(10.0)));
  if (p.digits < 1) p.digits = 1;
  p.guard_bits = guard;
  return p;
}

long Precision::target_bits() const {
  return static_cast<long>(std::ceil(digits * std::log2(10.0)));
}

// ---------------------------------------------------------------- Real

Real::Real(mpfr_prec_t bits) {
  mpfr_init2(value_, bits);
  mpfr_set_zero(value_, 1);
}

Real::Real(const Real& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept : Real(other.precision()) { mpfr_swap(value_, other.value_); }

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

Real::~Real() { mpfr_clear(value_); }

std::string Real::to_string(int digits, mpfr_rnd_t rnd) const {
  if (mpfr_zero_p(value_)) return "0";
  std::vector<char> buffer(static_cast<std::size_t>(digits) + 32);
  mpfr_snprintf(buffer.data(), buffer.size(), "%.*R*e", digits - 1, rnd, value_);
  return buffer.data();
}

// ---------------------------------------------------------------- Ball

Ball::Ball(mpfr_prec_t bits) : mid_(bits), rad_(kRadiusBits) {}

Ball::Ball(long value, mpfr_prec_t bits) : Ball(bits) {
  add_rounding_error(mpfr_set_si(mid_.get(), value, MPFR_RNDN));
}

Ball::Ball(const BigRational& value, mpfr_prec_t bits) : Ball(bits) {
  add_rounding_error(mpfr_set_q(mid_.get(), value.get_mpq_t(), MPFR_RNDN));
}

Ball Ball::from_ratio(const BigInteger& num, const BigInteger& den, mpfr_prec_t bits) {
  if (sgn(den) == 0) throw DomainError("ball division by zero");
  const auto exact_bits = static_cast<mpfr_prec_t>(std::max<std::size_t>(mpz_sizeinbase(num.get_mpz_t(), 2), 2));
  Real n(exact_bits);
  mpfr_set_z(n.get(), num.get_mpz_t(), MPFR_RNDN);
  Ball out(bits);
  out.add_rounding_error(mpfr_div_z(out.mid_.get(), n.get(), den.get_mpz_t(), MPFR_RNDN));
  return out;
}

Ball Ball::from_rounded(Real mid, int ternary) {
  Ball out(mid.precision());
  out.mid_ = std::move(mid);
  out.add_rounding_error(ternary);
  return out;
}

double Ball::rad_double() const { return mpfr_get_d(rad_.get(), MPFR_RNDU); }

void Ball::add_rounding_error(int ternary) {
  if (ternary == 0 || mpfr_zero_p(mid_.get())) return;
  // Round-to-nearest error is at most half an ulp; charge a full ulp.
  Real ulp(kRadiusBits);
  mpfr_set_ui_2exp(ulp.get(), 1, mpfr_get_exp(mid_.get()) - mid_.precision(), MPFR_RNDU);
  mpfr_add(rad_.get(), rad_.get(), ulp.get(), MPFR_RNDU);
}

Ball& Ball::add_error(const Real& err) {
  Real magnitude(kRadiusBits);
  mpfr_abs(magnitude.get(), err.get(), MPFR_RNDU);
  mpfr_add(rad_.get(), rad_.get(), magnitude.get(), MPFR_RNDU);
  return *this;
}

Ball& Ball::add_error(double err) {
  mpfr_add_d(rad_.get(), rad_.get(), std::fabs(err), MPFR_RNDU);
  return *this;
}

Ball& Ball::add_error(const BigRational& err) { return add_error(upper_real(abs(err))); }

Ball Ball::operator-() const {
  Ball out(*this);
  mpfr_neg(out.mid_.get(), out.mid_.get(), MPFR_RNDN);
  return out;
}

Ball& Ball::operator+=(const Ball& other) {
  mpfr_add(rad_.get(), rad_.get(), other.rad_.get(), MPFR_RNDU);
  add_rounding_error(mpfr_add(mid_.get(), mid_.get(), other.mid_.get(), MPFR_RNDN));
  return *this;
}

Ball& Ball::operator-=(const Ball& other) {
  mpfr_add(rad_.get(), rad_.get(), other.rad_.get(), MPFR_RNDU);
  add_rounding_error(mpfr_sub(mid_.get(), mid_.get(), other.mid_.get(), MPFR_RNDN));
  return *this;
}

Ball& Ball::operator*=(const Ball& other) {
  // |xy - x'y'| <= |x'| ry + |y'| rx + rx ry.
  Real a(kRadiusBits), b(kRadiusBits), cross(kRadiusBits);
  mpfr_abs(a.get(), mid_.get(), MPFR_RNDU);
  mpfr_abs(b.get(), other.mid_.get(), MPFR_RNDU);
  mpfr_mul(a.get(), a.get(), other.rad_.get(), MPFR_RNDU);
  mpfr_mul(b.get(), b.get(), rad_.get(), MPFR_RNDU);
  mpfr_mul(cross.get(), rad_.get(), other.rad_.get(), MPFR_RNDU);
  mpfr_add(a.get(), a.get(), b.get(), MPFR_RNDU);
  mpfr_add(rad_.get(), a.get(), cross.get(), MPFR_RNDU);
  add_rounding_error(mpfr_mul(mid_.get(), mid_.get(), other.mid_.get(), MPFR_RNDN));
  return *this;
}

Ball& Ball::operator/=(const Ball& other) {
  // |x/y - x'/y'| <= (rx + |x'/y'| ry) / (|y'| - ry).
  Real gap(kRadiusBits);
  mpfr_abs(gap.get(), other.mid_.get(), MPFR_RNDD);
  mpfr_sub(gap.get(), gap.get(), other.rad_.get(), MPFR_RNDD);
  if (mpfr_sgn(gap.get()) <= 0) throw DomainError("ball division by an enclosure of zero");

  const int ternary = mpfr_div(mid_.get(), mid_.get(), other.mid_.get(), MPFR_RNDN);
  Real quotient(kRadiusBits), numer(kRadiusBits);
  mpfr_abs(quotient.get(), mid_.get(), MPFR_RNDU);
  mpfr_mul(numer.get(), quotient.get(), other.rad_.get(), MPFR_RNDU);
  mpfr_add(numer.get(), numer.get(), rad_.get(), MPFR_RNDU);
  mpfr_div(rad_.get(), numer.get(), gap.get(), MPFR_RNDU);
  if (ternary != 0 && !mpfr_zero_p(other.rad_.get())) {
    // Account for |x'/y'| exceeding the rounded quotient by up to an ulp.
    Real slack(kRadiusBits);
    mpfr_set_ui_2exp(slack.get(), 1, mpfr_get_exp(mid_.get()) - mid_.precision(), MPFR_RNDU);
    mpfr_mul(slack.get(), slack.get(), other.rad_.get(), MPFR_RNDU);
    mpfr_div(slack.get(), slack.get(), gap.get(), MPFR_RNDU);
    mpfr_add(rad_.get(), rad_.get(), slack.get(), MPFR_RNDU);
  }
  add_rounding_error(ternary);
  return *this;
}

Ball& Ball::mul_rational(const BigRational& q) { return *this *= Ball(q, precision()); }

Ball& Ball::mul_si(long k) {
  mpfr_mul_ui(rad_.get(), rad_.get(), static_cast<unsigned long>(std::labs(k)), MPFR_RNDU);
  add_rounding_error(mpfr_mul_si(mid_.get(), mid_.get(), k, MPFR_RNDN));
  return *this;
}

Ball& Ball::div_si(long k) {
  if (k == 0) throw DomainError("ball division by zero");
  mpfr_div_ui(rad_.get(), rad_.get(), static_cast<unsigned long>(std::labs(k)), MPFR_RNDU);
  add_rounding_error(mpfr_div_si(mid_.get(), mid_.get(), k, MPFR_RNDN));
  return *this;
}

Real Ball::lower() const {
  Real out(precision() + kRadiusBits);
  mpfr_sub(out.get(), mid_.get(), rad_.get(), MPFR_RNDD);
  return out;
}

Real Ball::upper() const {
  Real out(precision() + kRadiusBits);
  mpfr_add(out.get(), mid_.get(), rad_.get(), MPFR_RNDU);
  return out;
}

bool Ball::contains(const Ball& other) const {
  return mpfr_lessequal_p(lower().get(), other.lower().get()) &&
         mpfr_lessequal_p(other.upper().get(), upper().get());
}

bool Ball::contains(double x) const {
  return mpfr_cmp_d(lower().get(), x) <= 0 && mpfr_cmp_d(upper().get(), x) >= 0;
}

bool Ball::contains(const BigRational& q) const {
  return mpfr_cmp_q(lower().get(), q.get_mpq_t()) <= 0 &&
         mpfr_cmp_q(upper().get(), q.get_mpq_t()) >= 0;
}

bool Ball::overlaps(const Ball& other) const {
  return mpfr_lessequal_p(lower().get(), other.upper().get()) &&
         mpfr_lessequal_p(other.lower().get(), upper().get());
}

bool Ball::certainly_less(const Ball& other) const {
  return mpfr_less_p(upper().get(), other.lower().get());
}

bool Ball::certainly_positive() const { return mpfr_sgn(lower().get()) > 0; }
bool Ball::certainly_negative() const { return mpfr_sgn(upper().get()) < 0; }

std::string Ball::to_string(int digits) const {
  return mid_.to_string(digits) + " +/- " + rad_.to_string(3, MPFR_RNDU);
}

Ball ball_log(const Ball& x) {
  const Real low = x.lower();
  if (mpfr_sgn(low.get()) <= 0) throw DomainError("log of an enclosure reaching nonpositive values");
  Ball out(x.precision());
  // |log y - log x'| <= |y - x'| / min(y, x').
  Real err(Ball::kRadiusBits);
  mpfr_div(err.get(), x.rad().get(), low.get(), MPFR_RNDU);
  out.add_error(err);
  out.add_rounding_error(mpfr_log(out.mid_.get(), x.mid_.get(), MPFR_RNDN));
  return out;
}

Real upper_real(const BigRational& q) {
  Real out(Ball::kRadiusBits);
  mpfr_set_q(out.get(), q.get_mpq_t(), MPFR_RNDU);
  return out;
}

}  // namespace kempner
