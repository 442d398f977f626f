#include "kempner/moments.hpp"

#include <json.hpp>

#include "kempner/errors.hpp"

namespace kempner {

std::string to_string(const BigRational& q) { return q.get_str(); }

BigRational parse_rational(const std::string& text) {
  BigRational q;
  if (q.set_str(text, 10) != 0) throw DomainError("not a rational: " + text);
  if (q.get_den() == 0) throw DomainError("zero denominator: " + text);
  q.canonicalize();
  return q;
}

const char* to_string(MomentMethod method) {
  switch (method) {
    case MomentMethod::primary:
      return "primary";
    case MomentMethod::alternate:
      return "alternate";
    case MomentMethod::special:
      return "special";
  }
  return "primary";
}

namespace {

BigInteger ipow(const BigInteger& base, unsigned long exponent) {
  BigInteger out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
  return out;
}

// Row n of Pascal's triangle, updated in place to row n+1.
void next_binomial_row(std::vector<BigInteger>& row) {
  row.emplace_back(1);
  for (std::size_t k = row.size() - 2; k > 0; --k) row[k] += row[k - 1];
}

void check_shift(long long shift) {
  if (shift < 0) throw DomainError("moment shift must be nonnegative");
}

}  // namespace

// Both recurrences keep integer numerators w_m over the unreduced common
// denominator D_m = prod_{k<=m} f_k, where f_k is the leading coefficient of
// the k-th relation. The sum over earlier terms is accumulated Horner-style:
//   acc_i = acc_{i-1} f_i + c_i w_i   gives   sum_i c_i w_i prod_{k=i+1}^{m-1} f_k,
// i.e. the sum scaled by D_{m-1}. No gcd is taken until the final reduction.

ScaledMoments scaled_moments(const ProblemSpec& spec, long long shift, std::size_t max_order) {
  check_shift(shift);
  const BigInteger b = spec.base();
  const BigInteger n_adm = spec.admissible_count();
  const BigInteger d = static_cast<long>(shift);

  // Power sums P_j = sum_{a in A} (bd - a - d)^j, j = 0..M.
  std::vector<BigInteger> power_sums(max_order + 1, 0);
  {
    std::vector<BigInteger> bases, powers;
    for (int a : spec.admissible()) {
      bases.push_back(b * d - a - d);
      powers.emplace_back(1);
    }
    for (std::size_t j = 0; j <= max_order; ++j) {
      for (std::size_t i = 0; i < bases.size(); ++i) {
        if (j > 0) powers[i] *= bases[i];
        power_sums[j] += powers[i];
      }
    }
  }

  std::vector<BigInteger> lead(max_order + 1);  // f_k = b^{k+1} - N
  std::vector<BigInteger> numer(max_order + 1);  // w_k
  BigInteger b_pow = b;                         // b^{m+1}
  BigInteger d_pow = 1;                         // d^m
  lead[0] = b - n_adm;
  numer[0] = b;
  BigInteger denom = lead[0];  // D_m

  ScaledMoments out;
  out.denominators.reserve(max_order + 1);
  out.denominators.push_back(denom);

  std::vector<BigInteger> binom{1};  // row m of C(m, .)
  BigInteger acc, term;
  for (std::size_t m = 1; m <= max_order; ++m) {
    next_binomial_row(binom);
    b_pow *= b;
    d_pow *= d;
    lead[m] = b_pow - n_adm;

    acc = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (i > 0) acc *= lead[i];
      term = binom[m - i] * power_sums[m - i];
      term *= numer[i];
      acc += term;
    }
    numer[m] = b_pow * d_pow * denom + acc;
    denom *= lead[m];
    out.denominators.push_back(denom);
  }
  out.numerators = std::move(numer);
  return out;
}

MomentTable moment_table(const ProblemSpec& spec, long long shift, std::size_t max_order) {
  ScaledMoments raw = scaled_moments(spec, shift, max_order);
  MomentTable table{spec, shift, {}, MomentMethod::primary};
  table.values.reserve(max_order + 1);
  for (std::size_t m = 0; m <= max_order; ++m) {
    table.values.push_back(make_ratio(raw.numerators[m], raw.denominators[m]));
  }
  return table;
}

MomentTable moment_table_alt(const ProblemSpec& spec, long long shift, std::size_t max_order) {
  check_shift(shift);
  const BigInteger b = spec.base();
  const BigInteger n_adm = spec.admissible_count();
  const BigInteger d = static_cast<long>(shift);

  // H_j = -(bd+1-d)^{j+1} + ((b-1)(d-1))^{j+1}
  //       + sum_{a in E} ((bd-a-d+1)^{j+1} - (bd-a-d)^{j+1}),
  // so that the bracket of the j-th term is b^{m+1-j} + H_j.
  std::vector<BigInteger> h(max_order + 1, 0);
  {
    const BigInteger lead_base = b * d + 1 - d;
    const BigInteger corner_base = (b - 1) * (d - 1);
    BigInteger lead_pow = lead_base, corner_pow = corner_base;
    std::vector<BigInteger> upper, lower, upper_pow, lower_pow;
    for (int a : spec.excluded()) {
      upper.push_back(b * d - a - d + 1);
      lower.push_back(b * d - a - d);
    }
    upper_pow = upper;
    lower_pow = lower;
    for (std::size_t j = 1; j <= max_order; ++j) {
      lead_pow *= lead_base;
      corner_pow *= corner_base;
      for (std::size_t i = 0; i < upper.size(); ++i) {
        upper_pow[i] *= upper[i];
        lower_pow[i] *= lower[i];
      }
      BigInteger value = corner_pow - lead_pow;
      for (std::size_t i = 0; i < upper.size(); ++i) value += upper_pow[i] - lower_pow[i];
      h[j] = std::move(value);
    }
  }

  std::vector<BigInteger> b_powers(max_order + 2);
  b_powers[0] = 1;
  for (std::size_t k = 1; k < b_powers.size(); ++k) b_powers[k] = b_powers[k - 1] * b;

  std::vector<BigInteger> lead(max_order + 1);  // (m+1)(b^{m+1} - N)
  std::vector<BigInteger> numer(max_order + 1);
  lead[0] = b - n_adm;
  numer[0] = b;
  BigInteger denom = lead[0];

  MomentTable table{spec, shift, {}, MomentMethod::alternate};
  table.values.reserve(max_order + 1);
  table.values.emplace_back(numer[0], denom);
  table.values.back().canonicalize();

  const BigInteger db = d * b;
  BigInteger rhs_hi = db + 1, rhs_lo = db;  // (db+1)^{m+1}, (db)^{m+1}
  std::vector<BigInteger> binom{1, 1};      // row m+1 of C(m+1, .)
  BigInteger acc, term, rhs;
  for (std::size_t m = 1; m <= max_order; ++m) {
    next_binomial_row(binom);
    rhs_hi *= db + 1;
    rhs_lo *= db;
    lead[m] = BigInteger(static_cast<unsigned long>(m + 1)) * (b_powers[m + 1] - n_adm);

    acc = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (i > 0) acc *= lead[i];
      const std::size_t j = m - i;
      term = b_powers[m + 1 - j] + h[j];
      term *= binom[j + 1];
      term *= numer[i];
      acc += term;
    }
    rhs = b * (rhs_hi - rhs_lo);
    numer[m] = rhs * denom - acc;
    denom *= lead[m];

    table.values.emplace_back(numer[m], denom);
    table.values.back().canonicalize();
  }
  return table;
}

MomentTable special_c_table(int base, std::size_t max_order) {
  if (base < 2) throw InvalidBase(base);
  const BigInteger b = base;
  MomentTable table{make_problem(base, {base - 1}), 1, {}, MomentMethod::special};
  auto& c = table.values;
  c.reserve(max_order + 1);

  std::vector<BigInteger> binom{1};
  // The m-th relation has leading term m (b^m - b + 1) c_{m-1}.
  for (std::size_t m = 1; m <= max_order + 1; ++m) {
    next_binomial_row(binom);
    BigRational rhs = BigRational(b * (ipow(b + 1, m) - ipow(b, m)));
    for (std::size_t j = 2; j <= m; ++j) {
      const BigInteger coeff = binom[j] * (ipow(b, m + 1 - j) - ipow(b, j) + 1);
      rhs -= BigRational(coeff) * c[m - j];
    }
    const BigInteger lead = binom[1] * (ipow(b, m) - b + 1);
    c.push_back(rhs / BigRational(lead));
  }
  return table;
}

std::pair<BigRational, BigRational> closed_form_low_moments(const ProblemSpec& spec) {
  const int base = spec.base();
  const bool zero_excluded = spec.excluded() == std::vector<int>{0};
  const bool top_excluded = spec.excluded() == std::vector<int>{base - 1};
  if (!zero_excluded && !top_excluded) {
    throw UnsupportedExcludedSet("closed forms exist only for E = {0} or E = {b-1}, got " +
                                 spec.excluded_string());
  }
  const BigRational b = base;
  const BigRational q2 = b * b - b + 1;
  const BigRational q3 = b * b * b - b + 1;
  const BigRational one = 1;
  if (zero_excluded) {
    BigRational first = one / (2 * b) - one / (2 * b * q2);
    BigRational second = one / (3 * b * b) - (5 * b * b - 5 * b + 2) / (6 * b * b * q2 * q3);
    return {first, second};
  }
  BigRational first = one / (2 * b) + (2 * b - 1) / (2 * b * q2);
  BigRational second = one / (3 * b * b) +
                       (6 * b * b * b * b - 5 * b * b + 5 * b - 2) / (6 * b * b * q2 * q3);
  return {first, second};
}

std::string moment_table_json(const MomentTable& table) {
  nlohmann::json out;
  out["b"] = table.spec.base();
  out["E"] = table.spec.excluded();
  out["d"] = table.shift;
  auto& values = out["values"] = nlohmann::json::array();
  for (const auto& v : table.values) values.push_back(to_string(v));
  out["method"] = to_string(table.method);
  return out.dump();
}

}  // namespace kempner
