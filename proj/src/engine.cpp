#include "kempner/engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kempner/errors.hpp"
#include "kempner/specfun.hpp"

namespace kempner {

const char* to_string(Method method) {
  switch (method) {
    case Method::series:
      return "series";
    case Method::oracle:
      return "oracle";
    case Method::via_U:
      return "via_U";
  }
  return "series";
}

namespace {

const BigRational kZeta2Upper(33, 20);

double log2_rational(const BigRational& q) {
  if (q <= 0) return -INFINITY;
  long exp_num = 0, exp_den = 0;
  const double m_num = mpz_get_d_2exp(&exp_num, q.get_num_mpz_t());
  const double m_den = mpz_get_d_2exp(&exp_den, q.get_den_mpz_t());
  return std::log2(m_num) - std::log2(m_den) + static_cast<double>(exp_num - exp_den);
}

BigRational rational_power(const BigRational& x, unsigned long k) {
  BigInteger num, den;
  mpz_pow_ui(num.get_mpz_t(), x.get_num_mpz_t(), k);
  mpz_pow_ui(den.get_mpz_t(), x.get_den_mpz_t(), k);
  return make_ratio(num, den);
}

// Dominant geometric ratio of the series: max(F)/b, or 1/b when F = {0}.
double series_ratio(const ProblemSpec& spec) {
  const int top = spec.shifts().back();
  return static_cast<double>(std::max(top, 1)) / spec.base();
}

double log2_series_tail(const ProblemSpec& spec, double terms) {
  const double b = spec.base();
  double best = -INFINITY;
  std::vector<double> logs;
  for (int d : spec.shifts()) {
    const double value = d >= 1 ? (terms + 1) * std::log2(d / b) - std::log2(b - d)
                                : -(terms + 1) * std::log2(b) - std::log2(b - 1);
    logs.push_back(value);
    best = std::max(best, value);
  }
  double sum = 0;
  for (double value : logs) sum += std::exp2(value - best);
  return std::log2(33.0 / 20.0) + std::log2(b / spec.excluded_count()) + best + std::log2(sum);
}

long bits_for(const BigRational& tol, std::size_t terms, double magnitude, int guard) {
  const double tol_bits = -log2_rational(tol);
  const double extra = std::log2(static_cast<double>(terms) + 2.0) + std::log2(std::max(magnitude, 1.0));
  return static_cast<long>(std::ceil(std::max(tol_bits, 1.0) + extra)) + 8 + guard;
}

Precision precision_for_bits(long bits, int guard) {
  return Precision::from_bits(bits - guard, guard);
}

bool radius_within(const Ball& value, const BigRational& tol) {
  return mpfr_cmp_q(value.rad().get(), tol.get_mpq_t()) <= 0;
}

BigRational stieltjes_tail(const ProblemSpec& spec, long long n, std::size_t terms) {
  // (b/p) / ((n+1)^{M+1} n)
  BigInteger power;
  mpz_ui_pow_ui(power.get_mpz_t(), static_cast<unsigned long>(n + 1), terms + 1);
  return make_ratio(spec.base(), BigInteger(spec.excluded_count()) * power * BigInteger(static_cast<long>(n)));
}

BigRational stieltjes_sum(const MomentTable& table, long long n, std::size_t terms) {
  // Horner in 1/(n+1): sum_{m=0}^{M} v_m / (n+1)^{m+1}.
  const BigRational inv = make_ratio(1, static_cast<long>(n + 1));
  BigRational acc = 0;
  for (std::size_t m = terms + 1; m-- > 0;) {
    acc += table[m];
    acc *= inv;
  }
  return acc;
}

void check_term_cap(std::size_t terms, const SeriesOptions& options, double ratio, const char* what) {
  if (terms > options.term_cap) {
    throw ConvergenceTooSlow(std::string(what) + " needs " + std::to_string(terms) +
                                 " terms, above the cap of " + std::to_string(options.term_cap) +
                                 " (dominant ratio " + std::to_string(ratio) + ")",
                             terms, ratio);
  }
}

}  // namespace

BigRational tolerance_from_digits(int digits) {
  BigInteger power;
  mpz_ui_pow_ui(power.get_mpz_t(), 10, static_cast<unsigned long>(std::max(digits, 0)));
  return make_ratio(1, power);
}

BigRational series_tail_bound(const ProblemSpec& spec, std::size_t terms) {
  const int b = spec.base();
  BigRational bracket = 0;
  for (int d : spec.shifts()) {
    if (d >= 1) {
      bracket += rational_power(make_ratio(d, b), terms + 1) / BigRational(b - d);
    } else {
      bracket += rational_power(make_ratio(1, b), terms + 1) / BigRational(b - 1);
    }
  }
  return kZeta2Upper * make_ratio(b, spec.excluded_count()) * bracket;
}

std::size_t series_terms_needed(const ProblemSpec& spec, const BigRational& tail_tolerance) {
  if (tail_tolerance <= 0) throw DomainError("tolerance must be positive");
  const double target = log2_rational(tail_tolerance);
  std::size_t lo = 1, hi = 1;
  while (log2_series_tail(spec, static_cast<double>(hi)) > target) {
    lo = hi;
    hi *= 2;
    if (hi > (std::size_t{1} << 40)) return hi;
  }
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (log2_series_tail(spec, static_cast<double>(mid)) > target) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  // Settle rounding in the double estimate against the exact bound.
  std::size_t terms = lo;
  if (terms <= 100000) {
    while (terms > 1 && series_tail_bound(spec, terms - 1) <= tail_tolerance) --terms;
    while (series_tail_bound(spec, terms) > tail_tolerance) ++terms;
  }
  return terms;
}

KempnerResult kempner_series(const ProblemSpec& spec, const BigRational& tol, const SeriesOptions& options) {
  if (tol <= 0) throw DomainError("tolerance must be positive");
  KempnerResult result{spec, Ball::exact_zero(64), 0, Real(Ball::kRadiusBits), Method::series};
  if (spec.is_degenerate() && options.degenerate_shortcut) return result;

  const BigRational tail_tol = tol / 2;
  const std::size_t terms = series_terms_needed(spec, tail_tol);
  const double ratio = series_ratio(spec);
  if (ratio > 1.0 - 1.0 / 64.0 && !options.allow_slow) {
    throw SlowRunRefused("series converges with ratio " + std::to_string(ratio) + " and needs about " +
                             std::to_string(terms) + " terms; pass --allow-slow to run it",
                         terms, ratio);
  }
  check_term_cap(terms, options, ratio, "series");

  const int b = spec.base();
  const BigRational mass = make_ratio(b, spec.excluded_count());
  // coeff_m = sum_{d in F} v_m(d) / b^{m+1}, kept unreduced over the
  // shared denominator D_m b^{m+1}.
  std::vector<BigInteger> numer(terms + 1, 0);
  std::vector<BigInteger> denom;
  for (int d : spec.shifts()) {
    ScaledMoments raw = scaled_moments(spec, d, terms);
    for (std::size_t m = 1; m <= terms; ++m) numer[m] += raw.numerators[m];
    denom = std::move(raw.denominators);
  }
  {
    BigInteger b_pow = b;
    for (std::size_t m = 1; m <= terms; ++m) {
      b_pow *= b;
      denom[m] *= b_pow;
    }
  }
  const BigRational tail = series_tail_bound(spec, terms);

  long bits = bits_for(tol, terms, mass.get_d() * std::log(b), options.guard_bits);
  for (int attempt = 0; attempt < 2; ++attempt) {
    const Precision prec = precision_for_bits(bits, options.guard_bits);
    Ball sum = Ball::exact_zero(prec.working_bits());
    for (std::size_t m = 1; m <= terms; ++m) {
      if (sgn(numer[m]) == 0) continue;
      Ball term = hp_zeta(static_cast<long>(m) + 1, prec);
      term *= Ball::from_ratio(numer[m], denom[m], prec.working_bits());
      sum += term;
    }
    Ball value = hp_log(BigRational(b), prec);
    value.mul_rational(mass);
    value -= sum;
    value.add_error(tail);
    if (radius_within(value, tol)) {
      result.value = std::move(value);
      result.terms_used = terms;
      result.tail_bound = upper_real(tail);
      return result;
    }
    bits += 64 + bits / 2;
  }
  throw ToleranceUnreachable("series radius exceeds the tolerance after raising precision");
}

KempnerResult kempner_series(const ProblemSpec& spec, double tol, const SeriesOptions& options) {
  if (!(tol > 0)) throw DomainError("tolerance must be positive");
  return kempner_series(spec, BigRational(tol), options);
}

KempnerBounds kempner_bounds(const ProblemSpec& spec, const Precision& prec) {
  const int b = spec.base();
  const int p = spec.excluded_count();
  const Ball psi_one = hp_digamma(BigRational(1), prec);
  Ball base = hp_log(BigRational(b), prec);
  base.mul_rational(make_ratio(b, p));

  KempnerBounds out{spec, {}, base, base};
  for (int a : spec.shifted_excluded()) {
    Ball lo = hp_digamma(make_ratio(a, b), prec) - psi_one;
    Ball hi = hp_digamma(make_ratio(a + 1, b), prec) - psi_one;
    lo.div_si(p);
    hi.div_si(p);
    out.lo_total += lo;
    out.hi_total += hi;
    out.digits.push_back({a, std::move(lo), std::move(hi)});
  }
  return out;
}

std::size_t stieltjes_terms_needed(const ProblemSpec& spec, long long n, const BigRational& tail_tolerance) {
  if (n < 1) throw DomainError("U(n) needs n >= 1");
  if (tail_tolerance <= 0) throw DomainError("tolerance must be positive");
  const double target = log2_rational(tail_tolerance);
  const double head = std::log2(static_cast<double>(spec.base()) / spec.excluded_count()) -
                      std::log2(static_cast<double>(n));
  const double per_term = std::log2(static_cast<double>(n) + 1.0);
  auto terms = static_cast<std::size_t>(std::max(0.0, std::ceil((head - target) / per_term - 1.0)));
  while (terms > 0 && stieltjes_tail(spec, n, terms - 1) <= tail_tolerance) --terms;
  while (stieltjes_tail(spec, n, terms) > tail_tolerance) ++terms;
  return terms;
}

Ball stieltjes_U(const ProblemSpec& spec, long long n, const BigRational& tol, const SeriesOptions& options) {
  if (tol <= 0) throw DomainError("tolerance must be positive");
  const std::size_t terms = stieltjes_terms_needed(spec, n, tol / 2);
  check_term_cap(terms, options, 1.0 / static_cast<double>(n + 1), "U(n) expansion");
  const MomentTable table = moment_table(spec, 1, terms);
  const long bits = bits_for(tol, terms, 1.0, options.guard_bits);
  Ball value(stieltjes_sum(table, n, terms), bits);
  value.add_error(stieltjes_tail(spec, n, terms));
  return value;
}

Ball stieltjes_U(const ProblemSpec& spec, long long n, double tol, const SeriesOptions& options) {
  if (!(tol > 0)) throw DomainError("tolerance must be positive");
  return stieltjes_U(spec, n, BigRational(tol), options);
}

KempnerResult kempner_via_U(const ProblemSpec& spec, const BigRational& tol, const SeriesOptions& options) {
  if (tol <= 0) throw DomainError("tolerance must be positive");
  KempnerResult result{spec, Ball::exact_zero(64), 0, Real(Ball::kRadiusBits), Method::via_U};
  std::vector<int> digits;
  for (int a : spec.admissible()) {
    if (a > 0) digits.push_back(a);
  }
  if (digits.empty()) return result;

  const BigRational each = tol / static_cast<long>(digits.size());
  // The smallest digit needs the most terms; one table serves every digit.
  const std::size_t max_terms = stieltjes_terms_needed(spec, digits.front(), each / 2);
  check_term_cap(max_terms, options, 1.0 / (digits.front() + 1.0), "U(n) expansion");
  const MomentTable table = moment_table(spec, 1, max_terms);
  const long bits = bits_for(tol, max_terms, spec.base(), options.guard_bits);

  Ball sum = Ball::exact_zero(bits);
  BigRational tail_total = 0;
  for (int a : digits) {
    const std::size_t terms = stieltjes_terms_needed(spec, a, each / 2);
    const BigRational tail = stieltjes_tail(spec, a, terms);
    Ball value(stieltjes_sum(table, a, terms), bits);
    value.add_error(tail);
    tail_total += tail;
    sum += value;
  }
  if (!radius_within(sum, tol)) throw ToleranceUnreachable("U-sum radius exceeds the tolerance");
  result.value = std::move(sum);
  result.terms_used = max_terms;
  result.tail_bound = upper_real(tail_total);
  return result;
}

KempnerResult kempner_via_U(const ProblemSpec& spec, double tol, const SeriesOptions& options) {
  if (!(tol > 0)) throw DomainError("tolerance must be positive");
  return kempner_via_U(spec, BigRational(tol), options);
}

}  // namespace kempner
