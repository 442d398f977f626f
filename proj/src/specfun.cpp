#include "kempner/specfun.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <utility>
#include <vector>

#include "kempner/errors.hpp"

namespace kempner {

namespace {

std::mutex bernoulli_mutex;
std::vector<BigRational> bernoulli_cache{BigRational(1), BigRational(-1, 2)};

// ln(|B_{2j}| / (2j)!) estimate, good enough to pick truncation orders.
double log_bernoulli_over_factorial(double two_j) {
  return std::log(2.0) - two_j * std::log(2.0 * std::numbers::pi);
}

BigRational rational_pow(const BigRational& x, unsigned long k) {
  BigInteger num, den;
  mpz_pow_ui(num.get_mpz_t(), x.get_num_mpz_t(), k);
  mpz_pow_ui(den.get_mpz_t(), x.get_den_mpz_t(), k);
  BigRational out(num, den);
  out.canonicalize();
  return out;
}

// k^{-s} as a ball.
Ball inverse_power(unsigned long k, long s, mpfr_prec_t bits) {
  Real power(bits);
  const int ternary = mpfr_ui_pow_ui(power.get(), k, static_cast<unsigned long>(s), MPFR_RNDN);
  return Ball(1L, bits) / Ball::from_rounded(std::move(power), ternary);
}

std::mutex zeta_mutex;
std::map<std::pair<long, long>, Ball> zeta_cache;

Ball zeta_direct(long n, unsigned long terms, mpfr_prec_t bits) {
  Ball sum(1L, bits);
  for (unsigned long k = terms; k >= 2; --k) sum += inverse_power(k, n, bits);
  // sum_{k > N} k^{-n} <= N^{1-n} / (n-1).
  Real tail(Ball::kRadiusBits);
  mpfr_ui_pow_ui(tail.get(), terms, static_cast<unsigned long>(n - 1), MPFR_RNDD);
  mpfr_ui_div(tail.get(), 1, tail.get(), MPFR_RNDU);
  mpfr_div_ui(tail.get(), tail.get(), static_cast<unsigned long>(n - 1), MPFR_RNDU);
  sum.add_error(tail);
  return sum;
}

// zeta(s) = sum_{k<N} k^{-s} + N^{-s} (N/(s-1) + 1/2 + sum_{j=1}^{J} c_j) + R,
//   c_j = B_{2j}/(2j)! * s(s+1)...(s+2j-2) / N^{2j-1},
//   |R| <= |B_{2J}|/(2J)! * s(s+1)...(s+2J-2) * N^{1-s-2J} = |c_J| N^{-s}.
Ball zeta_euler_maclaurin(long s, mpfr_prec_t bits) {
  const double target_log = -static_cast<double>(bits + 2) * std::log(2.0);
  unsigned long cutoff = static_cast<unsigned long>(std::ceil(0.12 * static_cast<double>(bits))) + 8;
  unsigned long order = 0;
  for (;;) {
    const double log_n = std::log(static_cast<double>(cutoff));
    bool found = false;
    double previous = INFINITY;
    for (unsigned long j = 1; j < 4 * cutoff + 16; ++j) {
      const double two_j = 2.0 * static_cast<double>(j);
      const double log_poch = std::lgamma(static_cast<double>(s) + two_j - 1.0) -
                              std::lgamma(static_cast<double>(s));
      const double estimate = log_bernoulli_over_factorial(two_j) + log_poch +
                              (1.0 - static_cast<double>(s) - two_j) * log_n;
      if (estimate < target_log - 4.0) {
        order = j;
        found = true;
        break;
      }
      if (estimate > previous) break;
      previous = estimate;
    }
    if (found) break;
    cutoff *= 2;
  }

  // The remainder after the J-th correction is bounded by the J-th term itself.
  const BigRational n_cut = static_cast<unsigned long>(cutoff);
  BigRational bracket = n_cut / BigRational(s - 1) + BigRational(1, 2);
  BigInteger poch = s;  // s(s+1)...(s+2j-2)
  BigInteger factorial = 2;
  BigRational n_pow = n_cut;  // N^{2j-1}
  BigRational remainder;
  for (unsigned long j = 1; j <= order; ++j) {
    const BigRational term = bernoulli(2 * j) / BigRational(factorial) * BigRational(poch) / n_pow;
    bracket += term;
    remainder = abs(term);
    poch *= (s + 2 * static_cast<long>(j) - 1) * (s + 2 * static_cast<long>(j));
    factorial *= (2 * j + 1) * (2 * j + 2);
    n_pow *= n_cut * n_cut;
  }

  Ball head(BigRational(0), bits);
  for (unsigned long k = cutoff - 1; k >= 1; --k) head += inverse_power(k, s, bits);
  Ball tail = inverse_power(cutoff, s, bits);
  const Real tail_upper = tail.upper();
  tail.mul_rational(bracket);
  Real err(Ball::kRadiusBits);
  mpfr_mul(err.get(), upper_real(remainder).get(), tail_upper.get(), MPFR_RNDU);
  head += tail;
  head.add_error(err);
  return head;
}

std::mutex digamma_mutex;
// B_{2j}/(2j) at a given working precision; snapshots are immutable once published.
std::map<long, std::shared_ptr<const std::vector<Ball>>> digamma_coefficients;

std::shared_ptr<const std::vector<Ball>> digamma_series_coefficients(long bits, std::size_t count) {
  std::lock_guard lock(digamma_mutex);
  auto& slot = digamma_coefficients[bits];
  if (slot && slot->size() > count) return slot;
  auto coeffs = slot ? std::make_shared<std::vector<Ball>>(*slot)
                     : std::make_shared<std::vector<Ball>>();
  while (coeffs->size() <= count) {
    const std::size_t j = coeffs->size();
    if (j == 0) {
      coeffs->emplace_back(BigRational(0), bits);
    } else {
      coeffs->emplace_back(bernoulli(2 * j) / BigRational(static_cast<unsigned long>(2 * j)), bits);
    }
  }
  slot = coeffs;
  return slot;
}

}  // namespace

BigRational bernoulli(std::size_t n) {
  if (n > 1 && n % 2 == 1) return 0;
  std::lock_guard lock(bernoulli_mutex);
  // B_m = -1/(m+1) sum_{k<m} C(m+1, k) B_k.
  while (bernoulli_cache.size() <= n) {
    const std::size_t m = bernoulli_cache.size();
    if (m % 2 == 1) {
      bernoulli_cache.emplace_back(0);
      continue;
    }
    BigRational sum = 0;
    BigInteger binom = 1;  // C(m+1, k)
    for (std::size_t k = 0; k < m; ++k) {
      if (k == 1 || k % 2 == 0) sum += BigRational(binom) * bernoulli_cache[k];
      binom *= static_cast<unsigned long>(m + 1 - k);
      binom /= static_cast<unsigned long>(k + 1);
    }
    bernoulli_cache.push_back(-sum / BigRational(static_cast<unsigned long>(m + 1)));
  }
  return bernoulli_cache[n];
}

Ball hp_log(const BigRational& x, const Precision& prec) {
  if (x <= 0) throw DomainError("log of a nonpositive number");
  return ball_log(Ball(x, prec.working_bits()));
}

Ball hp_zeta(long n, const Precision& prec) {
  if (n < 2) throw DomainError("zeta(n) needs n >= 2, got " + std::to_string(n));
  const long bits = prec.working_bits();
  {
    std::lock_guard lock(zeta_mutex);
    auto it = zeta_cache.find({n, bits});
    if (it != zeta_cache.end()) return it->second;
  }
  Ball value(bits);
  bool direct = false;
  if (n > 16) {
    // N^{1-n}/(n-1) <= 2^-bits.
    const double log2_terms = static_cast<double>(bits + 2) / static_cast<double>(n - 1);
    if (log2_terms < std::log2(10000.0)) {
      const auto terms = static_cast<unsigned long>(std::ceil(std::exp2(log2_terms))) + 1;
      value = zeta_direct(n, terms, bits);
      direct = true;
    }
  }
  if (!direct) value = zeta_euler_maclaurin(n, bits);
  std::lock_guard lock(zeta_mutex);
  zeta_cache.emplace(std::pair{n, bits}, value);
  return value;
}

double digamma_shift_threshold(long bits) {
  return std::max(10.0, 0.125 * static_cast<double>(bits) + 2.0);
}

Ball hp_digamma(const BigRational& x, const Precision& prec) {
  if (x <= 0) throw DomainError("digamma needs a positive argument, got " + to_string(x));
  const long bits = prec.working_bits();

  // psi(x) = psi(x + k) - sum_{j<k} 1/(x + j).
  const double threshold = digamma_shift_threshold(bits);
  const double x_approx = x.get_d();
  const long shift = x_approx >= threshold ? 0 : static_cast<long>(std::ceil(threshold - x_approx));
  BigRational reciprocal_sum = 0;
  for (long j = 0; j < shift; ++j) reciprocal_sum += 1 / (x + j);
  const BigRational y = x + shift;

  // psi(y) = log y - 1/(2y) - sum_{j=1}^{J} B_{2j}/(2j y^{2j}) + R,
  // |R| <= |B_{2J+2}| / ((2J+2) y^{2J+2}).
  const double target_log = -static_cast<double>(bits + 2) * std::log(2.0);
  const double log_y = std::log(y.get_d());
  std::size_t terms = 1;
  for (;; ++terms) {
    const double two_j = 2.0 * static_cast<double>(terms + 1);
    const double estimate = log_bernoulli_over_factorial(two_j) + std::lgamma(two_j + 1.0) -
                            std::log(two_j) - two_j * log_y;
    if (estimate < target_log - 4.0) break;
    if (terms > 4 * static_cast<std::size_t>(threshold) + 64) {
      throw DomainError("digamma asymptotic series failed to close");
    }
  }
  const auto coeffs_ptr = digamma_series_coefficients(bits, terms);
  const std::vector<Ball>& coeffs = *coeffs_ptr;

  const Ball y_ball(y, bits);
  Ball inv_y2 = Ball(1L, bits) / (y_ball * y_ball);
  Ball series = coeffs[terms];
  for (std::size_t j = terms - 1; j >= 1; --j) {
    series *= inv_y2;
    series += coeffs[j];
  }
  series *= inv_y2;

  const BigRational remainder = abs(bernoulli(2 * terms + 2)) /
                                BigRational(static_cast<unsigned long>(2 * terms + 2)) /
                                rational_pow(y, 2 * terms + 2);

  Ball out = ball_log(y_ball);
  out -= Ball(1 / (2 * y), bits);
  out -= series;
  out -= Ball(reciprocal_sum, bits);
  out.add_error(remainder);
  return out;
}

Ball hp_digamma_rational(const BigInteger& p, const BigInteger& q, const Precision& prec) {
  if (p <= 0 || q <= 0) throw DomainError("digamma needs p, q >= 1");
  BigRational x(p, q);
  x.canonicalize();
  return hp_digamma(x, prec);
}

}  // namespace kempner
