// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Tolerances are fixed below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "kempner/asymptotics.hpp"
#include "kempner/engine.hpp"
#include "kempner/errors.hpp"
#include "kempner/measure.hpp"
#include "kempner/moments.hpp"
#include "kempner/specfun.hpp"
#include "support.hpp"

using namespace kempner;

namespace {

constexpr double kPaperTol = 1e-12;
constexpr double kPaperTolShort = 1e-10;
constexpr double kSweepTol = 1e-10;      // series tolerance for property sweeps
constexpr double kDegenerateTol = 1e-12;
constexpr double kSlopeTarget = -3.0;
constexpr double kSlopeWindow = 0.3;
constexpr int kSpecialDigits = 40;

BigRational q(long n, long d) { return make_ratio(n, d); }

struct Failure {
  std::string detail;
};

void require(bool ok, const std::string& detail) {
  if (!ok) throw Failure{detail};
}

// Series values shared between criteria.
std::map<std::pair<int, std::vector<int>>, Ball> cache;

const Ball& series_value(const ProblemSpec& s) {
  const auto key = std::make_pair(s.base(), s.excluded());
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, kempner_series(s, kSweepTol).value).first;
  return it->second;
}

Ball ceiling(const ProblemSpec& s, const Precision& prec) {
  Ball c = hp_log(BigRational(s.base()), prec);
  c.mul_rational(q(s.base(), s.excluded_count()));
  return c;
}

std::string show(const ProblemSpec& s) { return "b=" + std::to_string(s.base()) + " E=" + s.excluded_string(); }

void criterion1() {
  struct Case {
    ProblemSpec spec;
    double value;
    double tol;
  };
  const std::vector<Case> cases = {
      {make_problem(10, {0, 9}), 11.490785103824471, kPaperTol},
      {make_problem(10, {0, 8, 9}), 7.543171528424965, kPaperTol},
      {make_problem(10, {0, 7, 8, 9}), 5.501015712594091, kPaperTol},
      {make_problem(10, {8, 9}), 11.2915816168, kPaperTolShort},
      {make_problem(2, {0}), 1.60669515241529, kPaperTolShort},
  };
  for (const auto& c : cases) {
    const Ball k = kempner_series(c.spec, c.tol / 100).value;
    const double err = std::fabs(k.mid_double() - c.value) + k.rad_double();
    std::ostringstream msg;
    msg << show(c.spec) << " off by " << err;
    require(err <= c.tol, msg.str());
  }
  require(kempner_series(make_problem(2, {1}), kPaperTol).value.is_zero(), "K(2,{1}) is not exactly 0");
}

void criterion2() {
  std::mt19937_64 rng(20240601);
  for (int trial = 0; trial < 200; ++trial) {
    const ProblemSpec s = testing::random_problem(rng, 2, 16);
    const auto& f = s.shifts();
    const int d = f[std::uniform_int_distribution<std::size_t>(0, f.size() - 1)(rng)];
    require(moment_table(s, d, 40).values == moment_table_alt(s, d, 40).values,
            show(s) + " d=" + std::to_string(d));
  }
  for (int b = 2; b <= 12; ++b) {
    require(special_c_table(b, 50).values == moment_table(make_problem(b, {b - 1}), 1, 50).values,
            "special relation b=" + std::to_string(b));
  }
}

void criterion3() {
  for (int b = 2; b <= 50; ++b) {
    const BigRational b2 = BigRational(b) * b, b3 = b2 * b;
    const ProblemSpec z = make_problem(b, {0});
    const MomentTable u = moment_table(z, 0, 2);
    const auto cz = closed_form_low_moments(z);
    require(cz.first == -u[1] / b2 && cz.second == u[2] / b3, "E={0} b=" + std::to_string(b));
    const ProblemSpec t = make_problem(b, {b - 1});
    const MomentTable v = moment_table(t, 1, 2);
    const auto ct = closed_form_low_moments(t);
    require(ct.first == v[1] / b2 && ct.second == v[2] / b3, "E={b-1} b=" + std::to_string(b));
  }
}

void criterion4() {
  std::mt19937_64 rng(4);
  const Precision prec{20};
  for (int trial = 0; trial < 50; ++trial) {
    const ProblemSpec s = testing::random_problem(rng, 2, 10);
    const int d = std::uniform_int_distribution<int>(0, 3)(rng);
    const unsigned m = std::uniform_int_distribution<unsigned>(0, 6)(rng);
    const TruncatedMeasure big = build_truncated_measure(s, choose_truncation_length(s, 1e-12, 200000), 200000);
    const OracleMoment om = oracle_moment(big, d, m);
    const BigRational exact = moment_table(s, d, m)[m];
    require(abs(om.value - exact) <= om.error_bound, show(s) + " moment d=" + std::to_string(d));

    const TruncatedMeasure small = build_truncated_measure(s, choose_truncation_length(s, 1e-12, 4000), 4000);
    const Ball k = kempner_series(s, kSweepTol).value;
    require(oracle_K_loglike(small, prec).value.overlaps(k), show(s) + " log-like oracle");
    require(oracle_theorem_main(small, prec).value.overlaps(k), show(s) + " digamma oracle");
  }
}

void criterion5() {
  const Precision prec{30};
  for (int b = 2; b <= 12; ++b) {
    for (int d = 0; d < b; ++d) {
      const ProblemSpec s = make_problem(b, {d});
      const Ball& k = series_value(s);
      const KempnerBounds kb = kempner_bounds(s, prec);
      require(k.certainly_less(kb.hi_total), show(s) + " not below hi");
      if (s.is_degenerate()) {
        require(mpfr_cmp(kb.lo_total.lower().get(), k.upper().get()) <= 0, show(s) + " below lo");
      } else {
        require(kb.lo_total.certainly_less(k), show(s) + " not above lo");
      }
      if (d == 0) {
        require(ceiling(s, prec).certainly_less(k), show(s) + " not above b log b");
      } else {
        require(k.certainly_less(ceiling(s, prec)), show(s) + " not below b log b");
        if (d > 1) require(series_value(make_problem(b, {d - 1})).certainly_less(k), show(s) + " not increasing");
      }
    }
  }
  for (int b = 2; b <= 8; ++b) {
    for (int p = 1; p <= b; ++p) {
      for (const ProblemSpec& s : all_problems_with_cardinality(b, p)) {
        if (s.excluded() == std::vector<int>{0}) continue;
        require(series_value(s).certainly_less(ceiling(s, prec)), show(s) + " not below (b/p) log b");
      }
    }
  }
}

void criterion6() {
  for (int b = 3; b <= 8; ++b) {
    for (int p = 1; p < b; ++p) {
      std::vector<long long> expected{0};
      for (int k = 1; k < p; ++k) expected.push_back(b - k);
      const ProblemSpec target = make_problem(b, expected);
      const Ball& best = series_value(target);
      for (const ProblemSpec& s : all_problems_with_cardinality(b, p)) {
        if (s == target) continue;
        require(series_value(s).certainly_less(best), show(s) + " not below " + target.excluded_string());
      }
    }
  }
}

void criterion7() {
  const std::vector<int> bases{50, 100, 200, 400};
  for (auto make : {expansion_zero_excluded, expansion_top_excluded}) {
    std::vector<DecaySample> samples;
    for (int b : bases) {
      const BigRational tol = q(1, 1000000000) / (1000L * b * b);
      samples.push_back(expansion_defect(make(b, Precision{}), tol, {}));
    }
    const DecayFit fit = fit_decay_order(samples);
    std::ostringstream msg;
    msg << to_string(make(2, Precision{}).family) << " slope " << fit.slope;
    require(std::fabs(fit.slope - kSlopeTarget) <= kSlopeWindow, msg.str());
  }
  std::vector<int> bracket_bases = bases;
  for (int b = 2; b <= 12; ++b) bracket_bases.push_back(b);
  for (int b : bracket_bases) {
    const Bracket br = zero_excluded_bracket(b, Precision{});
    const Ball k = kempner_series(make_problem(b, {0}), 1e-25).value;
    require(br.lower.certainly_less(k) && k.certainly_less(br.upper), "bracket at b=" + std::to_string(b));
  }
}

void criterion8() {
  const Precision prec{kSpecialDigits};
  const double tol = std::pow(10.0, -(kSpecialDigits - 2));
  const Ball psi1 = hp_digamma(BigRational(1), prec);
  for (int b = 2; b <= 64; ++b) {
    Ball lhs = Ball::exact_zero(prec.working_bits());
    for (int a = 1; a <= b; ++a) lhs += hp_digamma(q(a, b), prec);
    lhs.div_si(b);
    const Ball rhs = psi1 - hp_log(BigRational(b), prec);
    require(lhs.overlaps(rhs), "digamma b-plication at b=" + std::to_string(b));
  }
  Ball two_log2 = hp_log(BigRational(2), prec);
  two_log2.mul_si(2);
  const Ball half = hp_digamma(q(1, 2), prec) - psi1 + two_log2;
  require(std::fabs(half.mid_double()) + half.rad_double() <= tol, "psi(1/2) - psi(1) + 2 log 2");
  const Ball three_halves = two_log2 + hp_digamma(q(3, 2), prec) - psi1 - Ball(2L, prec.working_bits());
  require(std::fabs(three_halves.mid_double()) + three_halves.rad_double() <= tol, "2 log 2 + psi(3/2) - psi(1)");

  Real pi(prec.working_bits() + 64), pi2(pi.precision()), pi4(pi.precision());
  mpfr_const_pi(pi.get(), MPFR_RNDN);
  mpfr_sqr(pi2.get(), pi.get(), MPFR_RNDN);
  mpfr_div_ui(pi2.get(), pi2.get(), 6, MPFR_RNDN);
  mpfr_pow_ui(pi4.get(), pi.get(), 4, MPFR_RNDN);
  mpfr_div_ui(pi4.get(), pi4.get(), 90, MPFR_RNDN);
  require(testing::agrees(hp_zeta(2, prec), pi2), "zeta(2)");
  require(testing::agrees(hp_zeta(4, prec), pi4), "zeta(4)");
}

void criterion9() {
  const BigRational tol = q(1, 1000000000) / 1000000000;
  for (const ProblemSpec& s : {make_problem(10, {9}), make_problem(10, {0, 9}), make_problem(3, {1})}) {
    for (long long n = 1; n <= 20; ++n) {
      Ball rhs(q(1, static_cast<long>(n)), 256);
      for (int a : s.admissible()) rhs += stieltjes_U(s, n * s.base() + a, tol);
      require(stieltjes_U(s, n, tol).overlaps(rhs), show(s) + " n=" + std::to_string(n));
    }
    require(kempner_via_U(s, 1e-12).value.overlaps(kempner_series(s, 1e-12).value), show(s) + " U-sum");
  }
}

void criterion10() {
  SeriesOptions raw;
  raw.degenerate_shortcut = false;
  for (int b = 2; b <= 8; ++b) {
    std::vector<long long> all, positive;
    for (int a = 0; a < b; ++a) all.push_back(a);
    for (int a = 1; a < b; ++a) positive.push_back(a);
    for (const auto& e : {all, positive}) {
      const ProblemSpec s = make_problem(b, e);
      require(kempner_series(s, kDegenerateTol).value.is_zero(), show(s) + " not exactly 0");
      const Ball v = kempner_series(s, kDegenerateTol / 10, raw).value;
      require(v.contains(BigRational(0)) && std::fabs(v.mid_double()) + v.rad_double() <= kDegenerateTol,
              show(s) + " series does not telescope to 0");
    }
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void()>>> criteria = {
      {"published constants", criterion1},
      {"recurrences agree", criterion2},
      {"closed forms", criterion3},
      {"truncated measure containment", criterion4},
      {"bounds and ceilings", criterion5},
      {"maximizer", criterion6},
      {"asymptotic order", criterion7},
      {"special function identities", criterion8},
      {"U identity", criterion9},
      {"degenerate exactness", criterion10},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    std::string status = "PASS", detail;
    try {
      criteria[i].second();
    } catch (const Failure& f) {
      status = "FAIL";
      detail = f.detail;
    } catch (const std::exception& e) {
      status = "FAIL";
      detail = std::string("error: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (status == "FAIL") ++failures;
    std::printf("%s criterion %zu: %s (%.1fs)%s%s\n", status.c_str(), i + 1, criteria[i].first.c_str(), secs,
                detail.empty() ? "" : ": ", detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
