#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace kempner {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid problem instance: base, excluded set, or digit out of range.
class InvalidProblem : public Error {
 public:
  using Error::Error;
};

class InvalidBase : public InvalidProblem {
 public:
  explicit InvalidBase(long long b)
      : InvalidProblem("base must be at least 2, got " + std::to_string(b)) {}
};

class EmptyExcludedSet : public InvalidProblem {
 public:
  EmptyExcludedSet() : InvalidProblem("excluded digit set must not be empty") {}
};

class DigitOutOfRange : public InvalidProblem {
 public:
  DigitOutOfRange(long long digit, long long b)
      : InvalidProblem("digit " + std::to_string(digit) + " is outside 0.." +
                       std::to_string(b - 1)) {}
};

/// Operation not defined for this excluded set (closed forms need {0} or {b-1}).
class UnsupportedExcludedSet : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of a special function or operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Truncated measure would enumerate more atoms than allowed.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::uint64_t count, std::uint64_t budget)
      : Error("truncated measure needs N^L = " + std::to_string(count) +
              " atoms, budget is " + std::to_string(budget)),
        count_(count) {}
  std::uint64_t count() const noexcept { return count_; }

 private:
  std::uint64_t count_;
};

/// The series needs more terms than the configured cap.
class ConvergenceTooSlow : public Error {
 public:
  ConvergenceTooSlow(const std::string& what, std::size_t required_terms, double ratio)
      : Error(what), required_terms_(required_terms), ratio_(ratio) {}
  std::size_t required_terms() const noexcept { return required_terms_; }
  double ratio() const noexcept { return ratio_; }

 private:
  std::size_t required_terms_;
  double ratio_;
};

/// Slow run refused because the caller did not opt in.
class SlowRunRefused : public ConvergenceTooSlow {
 public:
  using ConvergenceTooSlow::ConvergenceTooSlow;
};

/// Final radius misses the requested tolerance even after raising precision.
class ToleranceUnreachable : public Error {
 public:
  using Error::Error;
};

/// Decay fit samples do not rise above rounding noise.
class InconclusiveOrder : public Error {
 public:
  using Error::Error;
};

}  // namespace kempner
