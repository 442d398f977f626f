#pragma once

// Shared helpers for the test binaries: a seeded generator of random
// problems and MPFR-backed reference values.

#include <mpfr.h>

#include <algorithm>
#include <random>
#include <vector>

#include "kempner/ball.hpp"
#include "kempner/problem.hpp"

namespace kempner::testing {

inline ProblemSpec random_problem(std::mt19937_64& rng, int min_base, int max_base) {
  std::uniform_int_distribution<int> base_dist(min_base, max_base);
  const int b = base_dist(rng);
  std::uniform_int_distribution<int> size_dist(1, b);
  const int size = size_dist(rng);
  std::vector<long long> digits(b);
  for (int i = 0; i < b; ++i) digits[i] = i;
  std::shuffle(digits.begin(), digits.end(), rng);
  digits.resize(size);
  return make_problem(b, digits);
}

/// |mid - ref| <= rad + 2 ulp(ref).
inline bool agrees(const Ball& x, const Real& ref) {
  const mpfr_prec_t bits = std::max(x.precision(), ref.precision()) + 64;
  Real diff(bits);
  mpfr_sub(diff.get(), x.mid().get(), ref.get(), MPFR_RNDN);
  mpfr_abs(diff.get(), diff.get(), MPFR_RNDN);
  Real slack(bits);
  if (mpfr_zero_p(ref.get())) {
    mpfr_set_ui(slack.get(), 0, MPFR_RNDN);
  } else {
    mpfr_set_ui_2exp(slack.get(), 1, mpfr_get_exp(ref.get()) - ref.precision() + 2, MPFR_RNDU);
  }
  // rounding of diff itself
  mpfr_mul_2si(slack.get(), slack.get(), 1, MPFR_RNDU);
  mpfr_add(slack.get(), slack.get(), x.rad().get(), MPFR_RNDU);
  return mpfr_cmp(diff.get(), slack.get()) <= 0;
}

inline Real mpfr_zeta_ref(unsigned long n, mpfr_prec_t bits) {
  Real out(bits);
  mpfr_zeta_ui(out.get(), n, MPFR_RNDN);
  return out;
}

inline Real mpfr_digamma_ref(long p, long q, mpfr_prec_t bits) {
  // The argument is rounded 64 bits finer than the result.
  Real out(bits), x(bits + 64);
  mpfr_set_si(x.get(), p, MPFR_RNDN);
  mpfr_div_si(x.get(), x.get(), q, MPFR_RNDN);
  mpfr_digamma(out.get(), x.get(), MPFR_RNDN);
  return out;
}

inline Real mpfr_log_ref(long p, long q, mpfr_prec_t bits) {
  Real x(bits + 64), out(bits);
  mpfr_set_si(x.get(), p, MPFR_RNDN);
  mpfr_div_si(x.get(), x.get(), q, MPFR_RNDN);
  mpfr_log(out.get(), x.get(), MPFR_RNDN);
  return out;
}

}  // namespace kempner::testing
