#pragma once

#include "kempner/ball.hpp"
#include "kempner/moments.hpp"

namespace kempner {

/// Exact Bernoulli number B_n (B_1 = -1/2). Thread-safe, memoized.
BigRational bernoulli(std::size_t n);

/// Enclosure of log x for rational x > 0, radius at most 2^-target_bits.
Ball hp_log(const BigRational& x, const Precision& prec);

/// Enclosure of zeta(n), n >= 2. Euler-Maclaurin with an explicit remainder
/// bound for small n, direct summation plus integral tail for large n.
/// Results are cached per (n, working bits).
Ball hp_zeta(long n, const Precision& prec);

/// Enclosure of psi(p/q) for integers p, q >= 1 (or a positive rational).
Ball hp_digamma_rational(const BigInteger& p, const BigInteger& q, const Precision& prec);
Ball hp_digamma(const BigRational& x, const Precision& prec);

/// Tuning knobs for digamma, exposed for tests. The argument is shifted up to
/// at least `shift_threshold(bits)` before the asymptotic series is applied.
double digamma_shift_threshold(long bits);

}  // namespace kempner
