#include <doctest.h>

#include <json.hpp>

#include "kempner/errors.hpp"
#include "kempner/moments.hpp"
#include "support.hpp"

using namespace kempner;

static BigRational q(long n, long d) { return make_ratio(n, d); }

TEST_CASE("total mass is b/p") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const ProblemSpec s = testing::random_problem(rng, 2, 16);
    for (int d : s.shifts()) CHECK(moment_table(s, d, 0)[0] == q(s.base(), s.excluded_count()));
  }
}

TEST_CASE("hand-computed moments for b=2, E={0}") {
  // Atoms at 1 - 2^-l with weight 2^-l, l >= 0.
  const MomentTable t = moment_table(make_problem(2, {0}), 0, 2);
  CHECK(t[0] == 2);
  CHECK(t[1] == q(-2, 3));
  CHECK(t[2] == q(10, 21));
}

TEST_CASE("first complementary moment for b=10, E={9}") {
  // c_1 = (b^3 + b^2) / (2 (b^2 - b + 1))
  CHECK(moment_table(make_problem(10, {9}), 1, 1)[1] == q(550, 91));
  CHECK(special_c_table(10, 1)[1] == q(550, 91));
}

TEST_CASE("A empty: point mass at 0") {
  const MomentTable t = moment_table(make_problem(4, {0, 1, 2, 3}), 3, 6);
  BigRational p = 1;
  for (std::size_t m = 0; m <= 6; ++m, p *= 3) CHECK(t[m] == p);
}

TEST_CASE("both recurrences agree on random problems") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 60; ++trial) {
    const ProblemSpec s = testing::random_problem(rng, 2, 12);
    for (int d : s.shifts()) {
      const auto a = moment_table(s, d, 25);
      const auto b = moment_table_alt(s, d, 25);
      CHECK(a.values == b.values);
      CHECK(b.method == MomentMethod::alternate);
    }
  }
}

TEST_CASE("scaled moments reduce to the table values") {
  const ProblemSpec s = make_problem(7, {0, 3});
  const auto raw = scaled_moments(s, 4, 12);
  const auto t = moment_table(s, 4, 12);
  for (std::size_t m = 0; m <= 12; ++m) CHECK(make_ratio(raw.numerators[m], raw.denominators[m]) == t[m]);
  CHECK(scaled_moments(s, 0, 12).denominators == raw.denominators);
}

TEST_CASE("single excluded top digit relation") {
  for (int b = 2; b <= 9; ++b) {
    CHECK(special_c_table(b, 20).values == moment_table(make_problem(b, {b - 1}), 1, 20).values);
  }
}

TEST_CASE("closed forms of the two lowest moments") {
  for (int b = 2; b <= 30; ++b) {
    const ProblemSpec z = make_problem(b, {0});
    const MomentTable u = moment_table(z, 0, 2);
    const BigRational b2 = BigRational(b) * b, b3 = b2 * b;
    const auto cz = closed_form_low_moments(z);
    CHECK(cz.first == -u[1] / b2);
    CHECK(cz.second == u[2] / b3);

    const ProblemSpec t = make_problem(b, {b - 1});
    const MomentTable v = moment_table(t, 1, 2);
    const auto ct = closed_form_low_moments(t);
    CHECK(ct.first == v[1] / b2);
    CHECK(ct.second == v[2] / b3);
  }
  CHECK_THROWS_AS(closed_form_low_moments(make_problem(10, {3})), UnsupportedExcludedSet);
}

TEST_CASE("nonnegative shifts give positive moments bounded by mass d^m") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    const ProblemSpec s = testing::random_problem(rng, 2, 12);
    const BigRational mass = q(s.base(), s.excluded_count());
    for (int d = 1; d <= 3; ++d) {
      const MomentTable t = moment_table(s, d, 15);
      BigRational bound = mass;
      for (std::size_t m = 0; m <= 15; ++m, bound *= d) {
        CHECK(t[m] >= 0);
        CHECK(t[m] <= bound);
      }
    }
  }
}

TEST_CASE("rational text round trip") {
  CHECK(to_string(q(550, 91)) == "550/91");
  CHECK(to_string(q(-4, 2)) == "-2");
  CHECK(parse_rational("10/21") == q(10, 21));
  CHECK(parse_rational("6/4") == q(3, 2));
  CHECK_THROWS_AS(parse_rational("abc"), DomainError);
  CHECK_THROWS_AS(parse_rational("1/0"), DomainError);
}

TEST_CASE("table JSON") {
  const MomentTable t = moment_table(make_problem(10, {9}), 1, 3);
  const auto j = nlohmann::json::parse(moment_table_json(t));
  CHECK(j["b"] == 10);
  CHECK(j["E"] == std::vector<int>{9});
  CHECK(j["d"] == 1);
  CHECK(j["method"] == "primary");
  REQUIRE(j["values"].size() == 4);
  for (std::size_t m = 0; m <= 3; ++m) CHECK(parse_rational(j["values"][m].get<std::string>()) == t[m]);
}

TEST_CASE("negative shift is rejected") {
  CHECK_THROWS_AS(moment_table(make_problem(10, {9}), -1, 3), DomainError);
  CHECK_THROWS_AS(moment_table_alt(make_problem(10, {9}), -1, 3), DomainError);
}

TEST_CASE("printed low moments at b=10") {
  CHECK(closed_form_low_moments(make_problem(10, {0})).first == q(9, 182));
  CHECK(closed_form_low_moments(make_problem(10, {9})).first == q(11, 182));
}

static std::vector<BigRational> zero_excluded_u(int b, std::size_t order) {
  const MomentTable t = moment_table(make_problem(b, {0}), 0, order);
  std::vector<BigRational> u(t.values);
  for (std::size_t m = 1; m < u.size(); m += 2) u[m] = -u[m];
  return u;
}

TEST_CASE("u_m decreases and (m+1) u_m lies in (1, b)") {
  for (int b = 2; b <= 16; ++b) {
    const auto u = zero_excluded_u(b, 40);
    for (std::size_t m = 1; m < u.size(); ++m) {
      CHECK(u[m] < u[m - 1]);
      const BigRational scaled = u[m] * static_cast<long>(m + 1);
      CHECK(scaled > 1);
      CHECK(scaled < b);
    }
  }
}

TEST_CASE("u_m / b tends to 1/(m+1) as b grows") {
  for (std::size_t m = 1; m <= 6; ++m) {
    BigRational prev = 1;
    for (int b : {10, 100, 1000}) {
      const BigRational gap = abs(BigRational(zero_excluded_u(b, m)[m] / b - q(1, static_cast<long>(m + 1))));
      CHECK(gap < prev);
      prev = gap;
    }
    CHECK(prev.get_d() < 2e-3);
  }
}

TEST_CASE("moment floor from the atom at the origin") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const ProblemSpec s = testing::random_problem(rng, 2, 12);
    if (s.is_degenerate()) continue;
    const BigRational origin = s.excludes(0) ? BigRational(1) : q(s.base(), s.base() - 1);
    for (int d = 1; d <= 3; ++d) {
      const MomentTable t = moment_table(s, d, 12);
      BigRational floor = origin;
      for (std::size_t m = 0; m <= 12; ++m, floor *= d) CHECK(t[m] >= floor);
    }
  }
}
