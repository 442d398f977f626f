#pragma once

#include <string>
#include <vector>

#include "kempner/ball.hpp"
#include "kempner/engine.hpp"

namespace kempner {

enum class ExpansionFamily { zero_excluded, top_excluded, single_digit };
const char* to_string(ExpansionFamily family);

struct ExpansionResult {
  int base = 0;
  ExpansionFamily family = ExpansionFamily::zero_excluded;
  Ball partial;
  int remainder_order = 0;  ///< claimed k in O(b^-k)
  int digit = 0;            ///< excluded digit, single_digit family only
};

/// b log b + zeta(2)/(2b) - zeta(3)/(3b^2), remainder O(b^-3).
ExpansionResult expansion_zero_excluded(int base, const Precision& prec = {});

/// b log b - zeta(2)/(2b) - (3 zeta(2) + zeta(3))/(3b^2), remainder O(b^-3).
ExpansionResult expansion_top_excluded(int base, const Precision& prec = {});

/// Single excluded digit d >= 1:
///   b log b - b log(1 + 1/d) + (d + 1/2)(zeta(2) - d^-2)/b, remainder O(b^-2).
ExpansionResult expansion_single_digit(int base, int digit, const Precision& prec = {});

/// The problem whose Kempner sum the expansion approximates.
ProblemSpec expansion_problem(const ExpansionResult& expansion);

/// Two-sided bracket of K(b,{0}) from the alternating zeta series truncated
/// after m = 2 and m = 3:
///   b log b + zeta(2) u_1/b^2 - zeta(3) u_2/b^3 < K < same + zeta(4) u_3/b^4.
struct Bracket {
  Ball lower;
  Ball upper;
};
Bracket zero_excluded_bracket(int base, const Precision& prec = {});

struct DecaySample {
  double base;
  double defect;
  double radius;
};

struct DecayFit {
  double slope = 0;
  double intercept = 0;
  std::vector<double> residuals;
  double max_abs_residual = 0;
  /// Slope is clearly negative (below -0.5); constant or growing defects are flagged.
  bool decaying = false;
};

/// Least-squares slope of log|defect| against log b. Needs at least three
/// samples with increasing b; every |defect| must exceed ten times its radius,
/// otherwise InconclusiveOrder is thrown.
DecayFit fit_decay_order(const std::vector<DecaySample>& samples);

/// defect = K(b, E) - partial, with K from the zeta series at `tol`.
DecaySample expansion_defect(const ExpansionResult& expansion, const BigRational& tol,
                             const SeriesOptions& options = {});

/// "b,defect,radius" rows.
std::string decay_samples_csv(const std::vector<DecaySample>& samples);

}  // namespace kempner
