#include <doctest.h>

#include <cmath>

#include "kempner/engine.hpp"
#include "kempner/errors.hpp"
#include "kempner/specfun.hpp"
#include "support.hpp"

using namespace kempner;

static BigRational q(long n, long d) { return make_ratio(n, d); }

static bool near(const Ball& x, double expected, double tol) {
  return std::fabs(x.mid_double() - expected) <= tol + x.rad_double();
}

TEST_CASE("published sums") {
  CHECK(near(kempner_series(make_problem(10, {0, 9}), 1e-14).value, 11.490785103824471, 1e-12));
  CHECK(near(kempner_series(make_problem(10, {0, 8, 9}), 1e-14).value, 7.543171528424965, 1e-12));
  CHECK(near(kempner_series(make_problem(10, {0, 7, 8, 9}), 1e-14).value, 5.501015712594091, 1e-12));
  CHECK(near(kempner_series(make_problem(10, {8, 9}), 1e-12).value, 11.2915816168, 1e-10));
  CHECK(near(kempner_series(make_problem(2, {0}), 1e-12).value, 1.60669515241529, 1e-10));
}

TEST_CASE("single excluded digit in base 10 to twenty digits") {
  // Reference values of Baillie, frozen at 22 significant digits.
  const std::vector<std::pair<long long, const char*>> cases = {
      {0, "2310344790942054161603/100000000000000000000"},
      {1, "1617696952812344426657/100000000000000000000"},
      {2, "1925735653280807222453/100000000000000000000"},
      {9, "2292067661926415034816/100000000000000000000"},
  };
  const BigRational half_ulp = q(1, 2) / BigRational(BigInteger("100000000000000000000"));
  for (const auto& [digit, text] : cases) {
    Ball k = kempner_series(make_problem(10, {digit}), q(1, 1000000) / BigRational(BigInteger("1000000000000000000")))
                 .value;
    k.add_error(half_ulp * 2);
    CHECK_MESSAGE(k.contains(parse_rational(text)), "digit " << digit);
  }
}

TEST_CASE("degenerate problems are exactly zero") {
  for (int b = 2; b <= 9; ++b) {
    std::vector<long long> all, positive;
    for (int a = 0; a < b; ++a) all.push_back(a);
    for (int a = 1; a < b; ++a) positive.push_back(a);
    for (const auto& e : {all, positive}) {
      const KempnerResult r = kempner_series(make_problem(b, e), 1e-12);
      CHECK(r.value.is_zero());
      CHECK(r.terms_used == 0);
    }
  }
}

TEST_CASE("degenerate series sums to zero without the shortcut") {
  SeriesOptions opts;
  opts.degenerate_shortcut = false;
  for (int b = 2; b <= 6; ++b) {
    std::vector<long long> positive;
    for (int a = 1; a < b; ++a) positive.push_back(a);
    const KempnerResult r = kempner_series(make_problem(b, positive), 1e-15, opts);
    CHECK(r.value.contains(BigRational(0)));
    CHECK(std::fabs(r.value.mid_double()) < 1e-14);
  }
}

TEST_CASE("radius meets the tolerance") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 25; ++trial) {
    const ProblemSpec s = testing::random_problem(rng, 2, 9);
    for (double tol : {1e-6, 1e-15}) {
      const KempnerResult r = kempner_series(s, tol);
      CHECK(r.value.rad_double() <= tol);
      CHECK(r.method == Method::series);
      if (!s.is_degenerate()) CHECK(mpfr_cmp(r.tail_bound.get(), r.value.rad().get()) <= 0);
    }
  }
}

TEST_CASE("tail bound shrinks and term count is minimal") {
  const ProblemSpec s = make_problem(10, {1, 5});
  for (std::size_t m = 1; m < 60; ++m) CHECK(series_tail_bound(s, m + 1) < series_tail_bound(s, m));
  const BigRational tol = q(1, 1000000000);
  const std::size_t m = series_terms_needed(s, tol);
  CHECK(series_tail_bound(s, m) <= tol);
  CHECK(series_tail_bound(s, m - 1) > tol);
}

TEST_CASE("slow series need an explicit opt-in") {
  const ProblemSpec s = make_problem(100, {1});
  try {
    kempner_series(s, 1e-6);
    FAIL("expected a refusal");
  } catch (const SlowRunRefused& e) {
    CHECK(std::string(e.what()).find("--allow-slow") != std::string::npos);
    CHECK(e.ratio() == doctest::Approx(0.99));
    CHECK(e.required_terms() > 1000);
  }
}

TEST_CASE("term cap") {
  SeriesOptions opts;
  opts.term_cap = 10;
  CHECK_THROWS_AS(kempner_series(make_problem(10, {1}), 1e-10, opts), ConvergenceTooSlow);
  CHECK_THROWS_AS(kempner_series(make_problem(10, {9}), 0.0), DomainError);
  CHECK_THROWS_AS(kempner_series(make_problem(10, {9}), -1.0), DomainError);
}

TEST_CASE("digamma bounds enclose the sum") {
  for (int b = 2; b <= 9; ++b) {
    for (int d = 0; d < b; ++d) {
      const ProblemSpec s = make_problem(b, {d});
      const KempnerBounds kb = kempner_bounds(s, Precision{30});
      const Ball k = kempner_series(s, 1e-12).value;
      CHECK(kb.digits.size() == 1);
      CHECK(k.certainly_less(kb.hi_total));
      if (s.is_degenerate()) {
        CHECK(kb.lo_total.overlaps(k));
      } else {
        CHECK(kb.lo_total.certainly_less(k));
      }
    }
  }
}

TEST_CASE("bounds for b=10, E={0}") {
  const Precision prec{30};
  const KempnerBounds kb = kempner_bounds(make_problem(10, {0}), prec);
  Ball ten_log_ten = hp_log(BigRational(10), prec);
  ten_log_ten.mul_si(10);
  CHECK(kb.lo_total.overlaps(ten_log_ten));
  Ball cap = hp_zeta(2, prec);
  cap.mul_rational(q(1, 10));
  CHECK(kb.hi_total.certainly_less(ten_log_ten + cap));
  CHECK(kb.digits[0].digit == 10);
}

TEST_CASE("all digits excluded: bounds collapse to zero") {
  const KempnerBounds kb = kempner_bounds(make_problem(5, {0, 1, 2, 3, 4}), Precision{30});
  CHECK(kb.lo_total.contains(BigRational(0)));
  CHECK(kb.lo_total.rad_double() < 1e-30);
}

TEST_CASE("U(n) behaves like mass/n") {
  const ProblemSpec s = make_problem(10, {9});
  double previous = 0;
  for (long long n : {10LL, 100LL, 1000LL, 100000LL}) {
    Ball u = stieltjes_U(s, n, 1e-20);
    u.mul_si(static_cast<long>(n));
    CHECK(u.mid_double() > previous);
    CHECK(u.mid_double() < 10.0);
    previous = u.mid_double();
  }
  CHECK(previous == doctest::Approx(10.0).epsilon(1e-3));
  CHECK_THROWS_AS(stieltjes_U(s, 0, 1e-10), DomainError);
}

TEST_CASE("U identity and U-sum") {
  for (const ProblemSpec& s : {make_problem(10, {9}), make_problem(3, {0}), make_problem(7, {2, 4})}) {
    const BigRational tol = q(1, 1000000000) / 1000000;
    for (long long n = 1; n <= 6; ++n) {
      Ball rhs(q(1, static_cast<long>(n)), 128);
      for (int a : s.admissible()) rhs += stieltjes_U(s, n * s.base() + a, tol);
      CHECK(stieltjes_U(s, n, tol).overlaps(rhs));
    }
    const KempnerResult u = kempner_via_U(s, 1e-12);
    CHECK(u.method == Method::via_U);
    CHECK(u.value.overlaps(kempner_series(s, 1e-12).value));
    CHECK(u.value.rad_double() <= 1e-12);
  }
  CHECK(kempner_via_U(make_problem(2, {1}), 1e-9).value.is_zero());
}

TEST_CASE("method names") {
  CHECK(std::string(to_string(Method::series)) == "series");
  CHECK(std::string(to_string(Method::via_U)) == "via_U");
  CHECK(std::string(to_string(Method::oracle)) == "oracle");
  CHECK(tolerance_from_digits(3) == q(1, 1000));
}
