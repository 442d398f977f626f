#include "kempner/asymptotics.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "kempner/errors.hpp"
#include "kempner/specfun.hpp"

namespace kempner {

namespace {

void check_base(int base) {
  if (base < 2) throw InvalidBase(base);
}

// b log b at the working precision of `prec`.
Ball b_log_b(int base, const Precision& prec) {
  Ball out = hp_log(BigRational(base), prec);
  out.mul_si(base);
  return out;
}

BigRational power_ratio(long num, int base, unsigned exponent) {
  BigInteger den;
  mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(base), exponent);
  return make_ratio(num, den);
}

}  // namespace

const char* to_string(ExpansionFamily family) {
  switch (family) {
    case ExpansionFamily::zero_excluded: return "zero-excluded";
    case ExpansionFamily::top_excluded: return "top-excluded";
    case ExpansionFamily::single_digit: return "single-d";
  }
  return "?";
}

ExpansionResult expansion_zero_excluded(int base, const Precision& prec) {
  check_base(base);
  Ball z2 = hp_zeta(2, prec);
  Ball z3 = hp_zeta(3, prec);
  z2.mul_rational(make_ratio(1, 2L * base));
  z3.mul_rational(make_ratio(1, 3L * base * base));
  ExpansionResult out;
  out.base = base;
  out.family = ExpansionFamily::zero_excluded;
  out.partial = b_log_b(base, prec) + z2 - z3;
  out.remainder_order = 3;
  return out;
}

ExpansionResult expansion_top_excluded(int base, const Precision& prec) {
  check_base(base);
  const Ball z2 = hp_zeta(2, prec);
  Ball first = z2;
  first.mul_rational(make_ratio(1, 2L * base));
  Ball second = z2;
  second.mul_si(3);
  second += hp_zeta(3, prec);
  second.mul_rational(make_ratio(1, 3L * base * base));
  ExpansionResult out;
  out.base = base;
  out.family = ExpansionFamily::top_excluded;
  out.partial = b_log_b(base, prec) - first - second;
  out.remainder_order = 3;
  return out;
}

ExpansionResult expansion_single_digit(int base, int digit, const Precision& prec) {
  check_base(base);
  if (digit < 1 || digit >= base) throw DigitOutOfRange(digit, base);
  Ball log_term = hp_log(make_ratio(digit + 1, digit), prec);
  log_term.mul_si(base);
  Ball correction = hp_zeta(2, prec);
  correction -= Ball(make_ratio(1, static_cast<long>(digit) * digit), prec.working_bits());
  correction.mul_rational(make_ratio(2L * digit + 1, 2L * base));
  ExpansionResult out;
  out.base = base;
  out.family = ExpansionFamily::single_digit;
  out.partial = b_log_b(base, prec) - log_term + correction;
  out.remainder_order = 2;
  out.digit = digit;
  return out;
}

ProblemSpec expansion_problem(const ExpansionResult& expansion) {
  switch (expansion.family) {
    case ExpansionFamily::zero_excluded: return make_problem(expansion.base, {0});
    case ExpansionFamily::top_excluded: return make_problem(expansion.base, {expansion.base - 1});
    case ExpansionFamily::single_digit: return make_problem(expansion.base, {expansion.digit});
  }
  throw DomainError("unknown expansion family");
}

Bracket zero_excluded_bracket(int base, const Precision& prec) {
  check_base(base);
  const MomentTable v = moment_table(make_problem(base, {0}), 0, 3);
  // u_m = (-1)^m v_m(0)
  const BigRational u1 = -v[1], u2 = v[2], u3 = -v[3];
  Ball t1 = hp_zeta(2, prec);
  t1.mul_rational(u1 * power_ratio(1, base, 2));
  Ball t2 = hp_zeta(3, prec);
  t2.mul_rational(u2 * power_ratio(1, base, 3));
  Ball t3 = hp_zeta(4, prec);
  t3.mul_rational(u3 * power_ratio(1, base, 4));
  Bracket out;
  out.lower = b_log_b(base, prec) + t1 - t2;
  out.upper = out.lower + t3;
  return out;
}

DecayFit fit_decay_order(const std::vector<DecaySample>& samples) {
  if (samples.size() < 3) throw DomainError("decay fit needs at least 3 samples");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const DecaySample& s = samples[i];
    if (!(s.base > 0)) throw DomainError("sample base must be positive");
    if (i > 0 && !(s.base > samples[i - 1].base)) throw DomainError("sample bases must increase");
    if (!(std::fabs(s.defect) >= 10.0 * s.radius) || s.defect == 0.0) {
      std::ostringstream msg;
      msg << "defect " << s.defect << " at b=" << s.base << " is within 10x its radius " << s.radius;
      throw InconclusiveOrder(msg.str());
    }
  }
  const double n = static_cast<double>(samples.size());
  double sx = 0, sy = 0;
  std::vector<double> xs, ys;
  for (const auto& s : samples) {
    xs.push_back(std::log(s.base));
    ys.push_back(std::log(std::fabs(s.defect)));
    sx += xs.back();
    sy += ys.back();
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  DecayFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    fit.residuals.push_back(r);
    fit.max_abs_residual = std::max(fit.max_abs_residual, std::fabs(r));
  }
  fit.decaying = fit.slope < -0.5;
  return fit;
}

DecaySample expansion_defect(const ExpansionResult& expansion, const BigRational& tol,
                             const SeriesOptions& options) {
  const KempnerResult k = kempner_series(expansion_problem(expansion), tol, options);
  const Ball defect = k.value - expansion.partial;
  return {static_cast<double>(expansion.base), defect.mid_double(), defect.rad_double()};
}

std::string decay_samples_csv(const std::vector<DecaySample>& samples) {
  std::ostringstream out;
  out << "b,defect,radius\n";
  out << std::setprecision(17);
  for (const auto& s : samples) {
    out << static_cast<long long>(s.base) << ',' << s.defect << ',' << s.radius << '\n';
  }
  return out.str();
}

}  // namespace kempner
