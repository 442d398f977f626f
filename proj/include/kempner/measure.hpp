#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kempner/ball.hpp"
#include "kempner/moments.hpp"
#include "kempner/problem.hpp"

namespace kempner {

inline constexpr std::uint64_t kDefaultAtomBudget = 10'000'000;

/// Finite truncation of the digit measure: every admissible string of length
/// at most L contributes weight b^-len at the point n(X)/b^len. Strings that
/// differ only by trailing zeros land on the same point and are merged.
class TruncatedMeasure {
 public:
  struct Atom {
    std::uint64_t numerator;  ///< point = numerator / b^length, b does not divide numerator
    std::uint32_t length;
    std::uint64_t weight;     ///< weight = weight / b^L
  };

  const ProblemSpec& spec() const noexcept { return spec_; }
  int max_length() const noexcept { return max_length_; }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }

  BigRational point(std::size_t i) const;
  BigRational weight(std::size_t i) const;
  BigRational total_weight() const;
  /// Exact mass of all strings longer than L.
  const BigRational& tail_mass() const noexcept { return tail_mass_; }
  /// b^L, the common denominator of all weights.
  const BigInteger& weight_denominator() const noexcept { return weight_denominator_; }

  /// "point,weight" rows with exact rationals, for debugging.
  std::string atoms_csv() const;

 private:
  friend TruncatedMeasure build_truncated_measure(const ProblemSpec&, int, std::uint64_t);

  ProblemSpec spec_;
  int max_length_ = 0;
  std::vector<Atom> atoms_;
  BigRational tail_mass_;
  BigInteger weight_denominator_;
};

/// Throws BudgetExceeded when N^L exceeds `atom_budget`, DomainError when
/// b^L does not fit the exact 64-bit atom keys.
TruncatedMeasure build_truncated_measure(const ProblemSpec& spec, int max_length,
                                         std::uint64_t atom_budget = kDefaultAtomBudget);

/// Smallest L whose tail mass is below `tail_tolerance`, capped at the largest
/// L the budget and key width allow.
int choose_truncation_length(const ProblemSpec& spec, double tail_tolerance,
                             std::uint64_t atom_budget = kDefaultAtomBudget);

struct OracleMoment {
  BigRational value;
  BigRational error_bound;
};

/// Direct sum of weight * (d - point)^m over the atoms; the true moment is
/// within error_bound of value.
OracleMoment oracle_moment(const TruncatedMeasure& measure, long long shift, unsigned m);

struct OracleValue {
  Ball value;               ///< radius includes error_bound
  BigRational error_bound;  ///< truncation error alone
};

/// Sum of weight/point over atoms with point >= 1/b.
OracleValue oracle_K_loglike(const TruncatedMeasure& measure, const Precision& prec);

/// (b/p) log b + (1/b) sum_atoms weight sum_{a in E1} (psi((a + point)/b) - psi(1)).
OracleValue oracle_theorem_main(const TruncatedMeasure& measure, const Precision& prec);

}  // namespace kempner
