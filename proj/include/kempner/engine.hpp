#pragma once

#include <cstddef>
#include <vector>

#include "kempner/ball.hpp"
#include "kempner/moments.hpp"
#include "kempner/problem.hpp"

namespace kempner {

inline constexpr std::size_t kDefaultTermCap = 20000;

enum class Method { series, oracle, via_U };
const char* to_string(Method method);

struct SeriesOptions {
  std::size_t term_cap = kDefaultTermCap;
  /// Needed when max(F)/b > 1 - 1/64.
  bool allow_slow = false;
  /// Return exactly 0 when A is empty or {0} instead of summing the series.
  bool degenerate_shortcut = true;
  int guard_bits = 64;
};

struct KempnerResult {
  ProblemSpec spec;
  Ball value;
  std::size_t terms_used = 0;
  Real tail_bound{Ball::kRadiusBits};  ///< already included in value.rad()
  Method method = Method::series;
};

/// 10^-digits.
BigRational tolerance_from_digits(int digits);

/// Series tail bound after M terms:
///   zeta(2) (b/p) [ sum_{d in F, d>=1} (d/b)^{M+1}/(b-d) + [0 in F] b^{-M-1}/(b-1) ],
/// with zeta(2) replaced by the rational upper bound 33/20.
BigRational series_tail_bound(const ProblemSpec& spec, std::size_t terms);

/// Smallest M >= 1 with series_tail_bound <= tail_tolerance (no cap applied).
std::size_t series_terms_needed(const ProblemSpec& spec, const BigRational& tail_tolerance);

/// K(b,E) = (b/p) log b - sum_{m>=1} zeta(m+1) sum_{d in F} v_m(d) / b^{m+1}.
/// The returned radius is at most `tol`.
KempnerResult kempner_series(const ProblemSpec& spec, const BigRational& tol,
                             const SeriesOptions& options = {});
KempnerResult kempner_series(const ProblemSpec& spec, double tol, const SeriesOptions& options = {});

struct DigitBound {
  int digit;  ///< element of E1
  Ball lo;    ///< (psi(a/b) - psi(1)) / p
  Ball hi;    ///< (psi((a+1)/b) - psi(1)) / p
};

struct KempnerBounds {
  ProblemSpec spec;
  std::vector<DigitBound> digits;
  Ball lo_total;  ///< (b/p) log b + sum lo
  Ball hi_total;  ///< (b/p) log b + sum hi
};

/// lo_total <= K(b,E) < hi_total.
KempnerBounds kempner_bounds(const ProblemSpec& spec, const Precision& prec = {});

/// U(n) = integral of 1/(n+x) against the measure, expanded about x = 1:
///   U(n) = sum_m v_m(1) / (n+1)^{m+1},  tail <= (b/p) / ((n+1)^{M+1} n).
Ball stieltjes_U(const ProblemSpec& spec, long long n, const BigRational& tol,
                 const SeriesOptions& options = {});
Ball stieltjes_U(const ProblemSpec& spec, long long n, double tol, const SeriesOptions& options = {});

/// Terms needed for the U(n) expansion to reach `tail_tolerance`.
std::size_t stieltjes_terms_needed(const ProblemSpec& spec, long long n,
                                   const BigRational& tail_tolerance);

/// K(b,E) as the sum of U(a) over the positive admissible digits.
KempnerResult kempner_via_U(const ProblemSpec& spec, const BigRational& tol,
                            const SeriesOptions& options = {});
KempnerResult kempner_via_U(const ProblemSpec& spec, double tol, const SeriesOptions& options = {});

}  // namespace kempner
