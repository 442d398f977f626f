#pragma once

#include <initializer_list>
#include <string>
#include <vector>

namespace kempner {

/// A Kempner problem instance: base b and excluded digits E, with the index
/// sets derived from them. Immutable once built; digit sets are ascending.
class ProblemSpec {
 public:
  int base() const noexcept { return base_; }
  const std::vector<int>& excluded() const noexcept { return excluded_; }
  const std::vector<int>& admissible() const noexcept { return admissible_; }
  /// E with digit 0 replaced by b.
  const std::vector<int>& shifted_excluded() const noexcept { return e1_; }
  /// {b - a : a in E1}; the shifts indexing the zeta series.
  const std::vector<int>& shifts() const noexcept { return shifts_; }

  /// N = #A.
  int admissible_count() const noexcept { return static_cast<int>(admissible_.size()); }
  /// p = #E.
  int excluded_count() const noexcept { return static_cast<int>(excluded_.size()); }

  bool excludes(int digit) const;
  bool admits(int digit) const { return !excludes(digit); }

  /// True when A is empty or {0}: the sum is empty and K = 0.
  bool is_degenerate() const noexcept;

  /// E rendered as "{0,9}".
  std::string excluded_string() const;

  friend bool operator==(const ProblemSpec&, const ProblemSpec&) = default;

 private:
  friend ProblemSpec make_problem(long long b, std::vector<long long> excluded);

  int base_ = 0;
  std::vector<int> excluded_;
  std::vector<int> admissible_;
  std::vector<int> e1_;
  std::vector<int> shifts_;
};

/// Builds a problem; throws InvalidBase, EmptyExcludedSet or DigitOutOfRange.
/// Duplicate digits are collapsed.
ProblemSpec make_problem(long long b, std::vector<long long> excluded);

inline ProblemSpec make_problem(long long b, std::initializer_list<long long> excluded) {
  return make_problem(b, std::vector<long long>(excluded));
}

/// All excluded sets of the given cardinality for base b, in lexicographic order.
std::vector<ProblemSpec> all_problems_with_cardinality(int b, int cardinality);

}  // namespace kempner
