#include "kempner/problem.hpp"

#include <algorithm>
#include <sstream>

#include "kempner/errors.hpp"

namespace kempner {

ProblemSpec make_problem(long long b, std::vector<long long> excluded) {
  if (b < 2) throw InvalidBase(b);
  if (excluded.empty()) throw EmptyExcludedSet();
  for (long long digit : excluded) {
    if (digit < 0 || digit >= b) throw DigitOutOfRange(digit, b);
  }
  std::sort(excluded.begin(), excluded.end());
  excluded.erase(std::unique(excluded.begin(), excluded.end()), excluded.end());

  ProblemSpec spec;
  spec.base_ = static_cast<int>(b);
  for (long long digit : excluded) spec.excluded_.push_back(static_cast<int>(digit));

  std::vector<bool> is_excluded(static_cast<std::size_t>(b), false);
  for (int digit : spec.excluded_) is_excluded[digit] = true;
  for (int digit = 0; digit < spec.base_; ++digit) {
    if (!is_excluded[digit]) spec.admissible_.push_back(digit);
  }

  for (int digit : spec.excluded_) spec.e1_.push_back(digit == 0 ? spec.base_ : digit);
  std::sort(spec.e1_.begin(), spec.e1_.end());
  for (int a : spec.e1_) spec.shifts_.push_back(spec.base_ - a);
  std::sort(spec.shifts_.begin(), spec.shifts_.end());
  return spec;
}

bool ProblemSpec::excludes(int digit) const {
  return std::binary_search(excluded_.begin(), excluded_.end(), digit);
}

bool ProblemSpec::is_degenerate() const noexcept {
  return admissible_.empty() || (admissible_.size() == 1 && admissible_.front() == 0);
}

std::string ProblemSpec::excluded_string() const {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < excluded_.size(); ++i) {
    if (i) out << ',';
    out << excluded_[i];
  }
  out << '}';
  return out.str();
}

std::vector<ProblemSpec> all_problems_with_cardinality(int b, int cardinality) {
  std::vector<ProblemSpec> out;
  if (cardinality < 1 || cardinality > b) return out;
  // Lexicographic combinations via a selection mask.
  std::vector<bool> mask(static_cast<std::size_t>(b), false);
  std::fill(mask.begin(), mask.begin() + cardinality, true);
  do {
    std::vector<long long> digits;
    for (int i = 0; i < b; ++i) {
      if (mask[i]) digits.push_back(i);
    }
    out.push_back(make_problem(b, std::move(digits)));
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return out;
}

}  // namespace kempner
