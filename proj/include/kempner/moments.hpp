#pragma once

#include <gmpxx.h>

#include <string>
#include <utility>
#include <vector>

#include "kempner/problem.hpp"

namespace kempner {

/// Exact rational, always canonical (positive denominator, lowest terms).
using BigRational = mpq_class;
using BigInteger = mpz_class;

/// num/den in lowest terms.
inline BigRational make_ratio(const BigInteger& num, const BigInteger& den) {
  BigRational q(num, den);
  q.canonicalize();
  return q;
}

/// "num/den" (or just "num" when the denominator is 1).
std::string to_string(const BigRational& q);
BigRational parse_rational(const std::string& text);

enum class MomentMethod { primary, alternate, special };

const char* to_string(MomentMethod method);

/// Exact shifted moments v_0(d) .. v_M(d), where v_m(d) is the integral of
/// (d - x)^m against the digit measure of the problem.
struct MomentTable {
  ProblemSpec spec;
  long long shift = 0;
  std::vector<BigRational> values;
  MomentMethod method = MomentMethod::primary;

  std::size_t max_order() const { return values.empty() ? 0 : values.size() - 1; }
  const BigRational& operator[](std::size_t m) const { return values[m]; }
};

/// Unreduced moments v_m(d) = numerators[m] / denominators[m]. The
/// denominators prod_{k<=m} (b^{k+1} - N) depend only on b and N, so tables
/// for different shifts of one problem share them.
struct ScaledMoments {
  std::vector<BigInteger> numerators;
  std::vector<BigInteger> denominators;
};
ScaledMoments scaled_moments(const ProblemSpec& spec, long long shift, std::size_t max_order);

/// Recurrence summing over the admissible digits:
///   (b^{m+1} - N) v_m = b^{m+1} d^m + sum_j C(m,j) P_j v_{m-j},
///   P_j = sum_{a in A} (bd - a - d)^j.
MomentTable moment_table(const ProblemSpec& spec, long long shift, std::size_t max_order);

/// Independent recurrence summing over the excluded digits, from the
/// generating-function identity (carries an extra factor m+1).
MomentTable moment_table_alt(const ProblemSpec& spec, long long shift, std::size_t max_order);

/// c_m = v_m(1) for E = {b-1}, from the single-excluded-digit relations
///   sum_{j=1}^{m} C(m,j) (b^{m+1-j} - b^j + 1) c_{m-j} = b((b+1)^m - b^m).
MomentTable special_c_table(int base, std::size_t max_order);

/// The printed closed forms of the two lowest normalized moments.
/// For E = {0}: (u_1/b^2, u_2/b^3). For E = {b-1}: (v_1/b^2, v_2/b^3).
/// Throws UnsupportedExcludedSet for any other E.
std::pair<BigRational, BigRational> closed_form_low_moments(const ProblemSpec& spec);

/// {"b":..,"E":[..],"d":..,"values":["num/den",..],"method":".."}
std::string moment_table_json(const MomentTable& table);

}  // namespace kempner
