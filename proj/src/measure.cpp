#include "kempner/measure.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "kempner/errors.hpp"
#include "kempner/specfun.hpp"

namespace kempner {

namespace {

constexpr std::uint64_t kKeyLimit = std::uint64_t{1} << 62;

// Largest L with b^L < 2^62.
int max_representable_length(int base) {
  int length = 0;
  std::uint64_t power = 1;
  while (power <= kKeyLimit / static_cast<std::uint64_t>(base)) {
    power *= static_cast<std::uint64_t>(base);
    ++length;
  }
  return length;
}

// N^L, saturating just above `limit`.
std::uint64_t saturating_power(std::uint64_t base, int exponent, std::uint64_t limit) {
  std::uint64_t out = 1;
  for (int i = 0; i < exponent; ++i) {
    if (base != 0 && out > limit / base) return limit + 1;
    out *= base;
  }
  return out;
}

BigRational geometric_tail(const ProblemSpec& spec, int max_length) {
  const int n = spec.admissible_count();
  const int b = spec.base();
  if (n == 0) return 0;
  // sum_{l > L} (N/b)^l = (N/b)^{L+1} / (1 - N/b).
  BigInteger num, den;
  mpz_ui_pow_ui(num.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(max_length + 1));
  mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(b), static_cast<unsigned long>(max_length));
  den *= b - n;
  BigRational out(num, den);
  out.canonicalize();
  return out;
}

}  // namespace

BigRational TruncatedMeasure::point(std::size_t i) const {
  BigInteger den;
  mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(spec_.base()), atoms_[i].length);
  BigRational out(BigInteger(static_cast<unsigned long>(atoms_[i].numerator)), den);
  out.canonicalize();
  return out;
}

BigRational TruncatedMeasure::weight(std::size_t i) const {
  BigRational out(BigInteger(static_cast<unsigned long>(atoms_[i].weight)), weight_denominator_);
  out.canonicalize();
  return out;
}

BigRational TruncatedMeasure::total_weight() const {
  BigInteger sum = 0;
  for (const Atom& atom : atoms_) sum += static_cast<unsigned long>(atom.weight);
  BigRational out(sum, weight_denominator_);
  out.canonicalize();
  return out;
}

std::string TruncatedMeasure::atoms_csv() const {
  std::ostringstream out;
  out << "point,weight\n";
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    out << to_string(point(i)) << ',' << to_string(weight(i)) << '\n';
  }
  return out.str();
}

TruncatedMeasure build_truncated_measure(const ProblemSpec& spec, int max_length,
                                         std::uint64_t atom_budget) {
  if (max_length < 0) throw DomainError("truncation length must be nonnegative");
  const auto n_adm = static_cast<std::uint64_t>(spec.admissible_count());
  const std::uint64_t count = saturating_power(n_adm, max_length, atom_budget);
  if (count > atom_budget) {
    throw BudgetExceeded(saturating_power(n_adm, max_length, std::numeric_limits<std::uint64_t>::max() - 1),
                         atom_budget);
  }
  if (max_length > max_representable_length(spec.base())) {
    throw DomainError("truncation length " + std::to_string(max_length) +
                      " overflows exact atom keys for base " + std::to_string(spec.base()));
  }

  TruncatedMeasure tm;
  tm.spec_ = spec;
  tm.max_length_ = max_length;
  tm.tail_mass_ = geometric_tail(spec, max_length);
  mpz_ui_pow_ui(tm.weight_denominator_.get_mpz_t(), static_cast<unsigned long>(spec.base()),
                static_cast<unsigned long>(max_length));

  const auto b = static_cast<std::uint64_t>(spec.base());
  const bool zero_admissible = spec.admits(0);
  // b^{L-l} for each l.
  std::vector<std::uint64_t> scale(static_cast<std::size_t>(max_length) + 1, 1);
  for (int l = max_length - 1; l >= 0; --l) scale[l] = scale[l + 1] * b;
  // Merged weight of a canonical string of length l: sum_{k=l}^{L} b^{L-k}.
  std::vector<std::uint64_t> merged(scale.size(), 0);
  for (int l = max_length; l >= 0; --l) {
    merged[l] = scale[l] + (l < max_length ? merged[l + 1] : 0);
  }

  // Level-by-level enumeration; each string of length l+1 appends one digit
  // on the right (n -> n b + a). A string is canonical when its last digit
  // is nonzero; the others coincide with a shorter canonical string.
  tm.atoms_.push_back({0, 0, zero_admissible ? merged[0] : scale[0]});
  std::vector<std::uint64_t> level{0}, next;
  for (int l = 1; l <= max_length; ++l) {
    next.clear();
    next.reserve(level.size() * n_adm);
    for (std::uint64_t n : level) {
      for (int a : spec.admissible()) {
        const std::uint64_t extended = n * b + static_cast<std::uint64_t>(a);
        next.push_back(extended);
        if (a != 0) {
          tm.atoms_.push_back({extended, static_cast<std::uint32_t>(l),
                               zero_admissible ? merged[l] : scale[l]});
        }
      }
    }
    level.swap(next);
  }
  return tm;
}

int choose_truncation_length(const ProblemSpec& spec, double tail_tolerance,
                             std::uint64_t atom_budget) {
  const int cap = max_representable_length(spec.base());
  const int n = spec.admissible_count();
  int best = 0;
  for (int l = 0; l <= cap; ++l) {
    if (saturating_power(static_cast<std::uint64_t>(n), l, atom_budget) > atom_budget) break;
    best = l;
    if (geometric_tail(spec, l).get_d() < tail_tolerance) break;
  }
  return best;
}

OracleMoment oracle_moment(const TruncatedMeasure& measure, long long shift, unsigned m) {
  if (shift < 0) throw DomainError("moment shift must be nonnegative");
  const ProblemSpec& spec = measure.spec();
  const unsigned long b = static_cast<unsigned long>(spec.base());
  const auto big_l = static_cast<unsigned long>(measure.max_length());
  const BigInteger d = static_cast<long>(shift);

  // weight * (d - n/b^l)^m = W (d b^l - n)^m b^{(L-l) m} / b^{L + L m}.
  BigInteger sum = 0, base_term, term, scale;
  for (const auto& atom : measure.atoms()) {
    BigInteger b_l;
    mpz_ui_pow_ui(b_l.get_mpz_t(), b, atom.length);
    base_term = d * b_l - BigInteger(static_cast<unsigned long>(atom.numerator));
    mpz_pow_ui(term.get_mpz_t(), base_term.get_mpz_t(), m);
    mpz_ui_pow_ui(scale.get_mpz_t(), b, (big_l - atom.length) * m);
    term *= scale;
    term *= static_cast<unsigned long>(atom.weight);
    sum += term;
  }
  BigInteger den;
  mpz_ui_pow_ui(den.get_mpz_t(), b, big_l + big_l * m);
  OracleMoment out;
  out.value = BigRational(sum, den);
  out.value.canonicalize();

  // |d - x|^m <= d^m on [0, 1) for d >= 1, and <= 1 for d = 0.
  BigInteger d_pow = 1;
  if (shift >= 1) mpz_pow_ui(d_pow.get_mpz_t(), d.get_mpz_t(), m);
  out.error_bound = measure.tail_mass() * BigRational(d_pow);
  return out;
}

OracleValue oracle_K_loglike(const TruncatedMeasure& measure, const Precision& prec) {
  const ProblemSpec& spec = measure.spec();
  const long bits = prec.working_bits();
  const auto b = static_cast<std::uint64_t>(spec.base());

  // sum W b^l / n over atoms with n b >= b^l, then divide by b^L.
  Ball sum = Ball::exact_zero(bits);
  for (const auto& atom : measure.atoms()) {
    if (atom.length == 0) continue;  // point 0
    BigInteger b_l;
    mpz_ui_pow_ui(b_l.get_mpz_t(), static_cast<unsigned long>(b), atom.length);
    const BigInteger n(static_cast<unsigned long>(atom.numerator));
    if (n * static_cast<unsigned long>(b) < b_l) continue;
    const BigInteger w(static_cast<unsigned long>(atom.weight));
    sum += Ball(make_ratio(w * b_l, n), bits);
  }
  sum.mul_rational(BigRational(1) / BigRational(measure.weight_denominator()));

  OracleValue out{std::move(sum), measure.tail_mass() * spec.base()};
  out.value.add_error(out.error_bound);
  return out;
}

OracleValue oracle_theorem_main(const TruncatedMeasure& measure, const Precision& prec) {
  const ProblemSpec& spec = measure.spec();
  const long bits = prec.working_bits();
  const unsigned long b = static_cast<unsigned long>(spec.base());
  const int p = spec.excluded_count();

  Ball integral = Ball::exact_zero(bits);
  for (const auto& atom : measure.atoms()) {
    BigInteger b_l, b_l1;
    mpz_ui_pow_ui(b_l.get_mpz_t(), b, atom.length);
    b_l1 = b_l * b;
    Ball inner = Ball::exact_zero(bits);
    for (int a : spec.shifted_excluded()) {
      // (a + n/b^l)/b = (a b^l + n) / b^{l+1}.
      const BigInteger num = BigInteger(a) * b_l + BigInteger(static_cast<unsigned long>(atom.numerator));
      inner += hp_digamma_rational(num, b_l1, prec);
    }
    inner.mul_rational(make_ratio(BigInteger(static_cast<unsigned long>(atom.weight)),
                                  measure.weight_denominator()));
    integral += inner;
  }
  // Subtract psi(1) once per unit of weight and excluded digit.
  Ball psi_one = hp_digamma(BigRational(1), prec);
  psi_one.mul_rational(measure.total_weight() * static_cast<long>(spec.shifted_excluded().size()));
  integral -= psi_one;
  integral.div_si(static_cast<long>(b));

  Ball value = hp_log(BigRational(spec.base()), prec);
  value.mul_rational(make_ratio(spec.base(), p));
  value += integral;

  OracleValue out{std::move(value),
                  measure.tail_mass() * spec.base() * static_cast<long>(spec.shifted_excluded().size())};
  out.value.add_error(out.error_bound);
  return out;
}

}  // namespace kempner
