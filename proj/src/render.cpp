#include "kempner/render.hpp"

#include <mpfr.h>

#include <cmath>
#include <json.hpp>
#include <sstream>

namespace kempner {

namespace {

BigRational to_rational(const Real& r) {
  BigRational q;
  mpfr_get_q(q.get_mpq_t(), r.get());
  return q;
}

BigInteger floor_scaled(const BigRational& x, long j) {
  // floor(x / 10^j)
  BigInteger p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(j < 0 ? -j : j));
  BigInteger num = x.get_num(), den = x.get_den();
  if (j >= 0) {
    den *= p;
  } else {
    num *= p;
  }
  BigInteger out;
  mpz_fdiv_q(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return out;
}

// floor(log10 x) for x > 0.
long decimal_exponent(const BigRational& x) {
  long e = static_cast<long>(std::floor(std::log10(x.get_d())));
  while (floor_scaled(x, e) == 0) --e;
  while (floor_scaled(x, e + 1) != 0) ++e;
  return e;
}

std::string place(const BigInteger& q, long j) {
  std::string digits = q.get_str();
  if (j == 0) return digits;
  if (j > 0) {
    // Uncertain integer digits: scientific form so no placeholder zeros appear.
    const long exponent = j + static_cast<long>(digits.size()) - 1;
    std::string out = digits.substr(0, 1);
    if (digits.size() > 1) out += "." + digits.substr(1);
    return out + "e" + std::to_string(exponent);
  }
  const auto frac = static_cast<std::size_t>(-j);
  if (digits.size() <= frac) digits.insert(0, frac - digits.size() + 1, '0');
  digits.insert(digits.size() - frac, ".");
  return digits;
}

// lo >= 0 and hi > 0.
std::string positive_decimal(const BigRational& lo, const BigRational& hi, int max_digits) {
  const long top = decimal_exponent(hi);
  long best = top + 1;
  for (long j = top; j > top - max_digits; --j) {
    if (floor_scaled(lo, j) != floor_scaled(hi, j)) break;
    best = j;
  }
  const BigInteger q = floor_scaled(lo, best);
  if (q == 0) return "0";
  return place(q, best);
}

}  // namespace

std::string certified_decimal(const Ball& x, int max_digits) {
  if (max_digits < 1) max_digits = 1;
  const BigRational lo = to_rational(x.lower());
  const BigRational hi = to_rational(x.upper());
  if (sgn(lo) > 0 || (sgn(lo) == 0 && sgn(hi) > 0)) return positive_decimal(lo, hi, max_digits);
  if (sgn(hi) < 0 || (sgn(hi) == 0 && sgn(lo) < 0)) {
    const std::string s = positive_decimal(-hi, -lo, max_digits);
    return s == "0" ? s : "-" + s;
  }
  return "0";
}

int significant_digits(const std::string& decimal) {
  int count = 0;
  bool leading = true;
  for (char c : decimal) {
    if (c == 'e') break;
    if (c < '0' || c > '9') continue;
    if (leading && c == '0') continue;
    leading = false;
    ++count;
  }
  return count;
}

std::string radius_string(const Ball& x, int digits) {
  if (x.is_exact()) return "0";
  return x.rad().to_string(digits, MPFR_RNDU);
}

std::string result_json(const KempnerResult& result, int max_digits) {
  nlohmann::ordered_json j;
  j["b"] = result.spec.base();
  j["E"] = result.spec.excluded();
  j["value"] = certified_decimal(result.value, max_digits);
  j["radius"] = radius_string(result.value);
  j["terms"] = result.terms_used;
  j["method"] = to_string(result.method);
  return j.dump();
}

std::string result_csv_row(const KempnerResult& result, int max_digits) {
  std::ostringstream out;
  out << result.spec.base() << ',';
  const auto& e = result.spec.excluded();
  for (std::size_t i = 0; i < e.size(); ++i) out << (i ? ";" : "") << e[i];
  out << ',' << certified_decimal(result.value, max_digits) << ',' << radius_string(result.value) << ','
      << result.terms_used << ',' << to_string(result.method);
  return out.str();
}

}  // namespace kempner
