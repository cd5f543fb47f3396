#include <doctest.h>

#include <cmath>
#include <limits>

#include "hrtlab/error.hpp"
#include "hrtlab/exact.hpp"

using namespace hrtlab;

TEST_CASE("rationals are kept in lowest terms with a positive denominator") {
  Rational r(6, -4);
  CHECK(r.num() == -3);
  CHECK(r.den() == 2);
  CHECK(r.str() == "-3/2");
  CHECK(Rational(4, 2).str() == "2");
  CHECK(Rational(0, -7).den() == 1);
  CHECK_THROWS_AS(Rational(1, 0), Error);
}

TEST_CASE("rational arithmetic") {
  const Rational a(1, 2), b(1, 3);
  CHECK(a + b == Rational(5, 6));
  CHECK(a - b == Rational(1, 6));
  CHECK(a * b == Rational(1, 6));
  CHECK(a / b == Rational(3, 2));
  CHECK(-a == Rational(-1, 2));
  CHECK(b < a);
  CHECK_THROWS_AS(a / Rational(0), Error);
}

TEST_CASE("rational overflow is reported, not wrapped") {
  const Rational big(std::numeric_limits<std::int64_t>::max() / 2 + 1);
  try {
    (void)(big * Rational(4));
    FAIL("expected overflow");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Overflow);
  }
  CHECK(checked_lcm(4, 6) == 12);
  CHECK_THROWS_AS(checked_lcm(std::int64_t{1} << 40, (std::int64_t{1} << 40) - 1), Error);
}

TEST_CASE("parse_rational") {
  CHECK(parse_rational("3/9") == Rational(1, 3));
  CHECK(parse_rational("-7") == Rational(-7));
  CHECK_THROWS_AS(parse_rational("1/"), Error);
  CHECK_THROWS_AS(parse_rational("x"), Error);
}

TEST_CASE("best rational approximation finds convergents and semiconvergents") {
  CHECK(best_rational_approximation(std::numbers::pi_v<long double>, 7) == Rational(22, 7));
  CHECK(best_rational_approximation(std::numbers::pi_v<long double>, 113) == Rational(355, 113));
  CHECK(best_rational_approximation(0.25L, 64) == Rational(1, 4));
  CHECK(best_rational_approximation(-1.5L, 10) == Rational(-3, 2));
  // 1/3 < 0.34 < 1/2; with denominators up to 3 the best is 1/3.
  CHECK(best_rational_approximation(0.34L, 3) == Rational(1, 3));
}

TEST_CASE("square-free split") {
  CHECK(squarefree_split(12) == std::pair<std::int64_t, std::int64_t>{2, 3});
  CHECK(squarefree_split(18) == std::pair<std::int64_t, std::int64_t>{3, 2});
  CHECK(squarefree_split(49) == std::pair<std::int64_t, std::int64_t>{7, 1});
  CHECK(squarefree_split(1) == std::pair<std::int64_t, std::int64_t>{1, 1});
}

TEST_CASE("quadratic surds canonicalise square factors") {
  const QuadSurd s8 = QuadSurd::sqrt_of(8);
  CHECK(s8.radicand() == 2);
  CHECK(s8.surd_coefficient() == Rational(2));
  CHECK(QuadSurd::sqrt_of(9).is_integer());
  CHECK(QuadSurd::sqrt_of(9).rational_part() == Rational(3));
  CHECK(QuadSurd::sqrt_of(0).is_zero());
  CHECK_THROWS_AS(QuadSurd::sqrt_of(-2), Error);
}

TEST_CASE("surd field operations stay inside one field") {
  const QuadSurd r2 = QuadSurd::sqrt_of(2);
  const auto sq = mul(r2, r2);
  REQUIRE(sq);
  CHECK(*sq == QuadSurd(Rational(2)));
  const auto sum = add(QuadSurd(Rational(1)), r2);
  REQUIRE(sum);
  CHECK(sum->str() == "1 + sqrt(2)");
  CHECK(QuadSurd(Rational(1, 2), Rational(-3, 4), 5).str() == "1/2 - 3/4*sqrt(5)");
  CHECK(QuadSurd(Rational(0), Rational(-1), 2).str() == "-sqrt(2)");
  CHECK_FALSE(add(r2, QuadSurd::sqrt_of(3)).has_value());
  const auto diff = sub(*sum, r2);
  REQUIRE(diff);
  CHECK(diff->is_integer());
  CHECK(std::fabs(sum->to_double() - (1.0 + std::sqrt(2.0))) < 1e-15);
}

TEST_CASE("parse_real: exact grammar") {
  auto r = parse_real("-sqrt(2)/3");
  REQUIRE(r.is_exact());
  CHECK(r.exact()->surd_coefficient() == Rational(-1, 3));
  CHECK(std::fabs(r.value() + std::sqrt(2.0) / 3.0) < 1e-16);

  r = parse_real("1/2 + 3/4*sqrt(2)");
  REQUIRE(r.is_exact());
  CHECK(r.exact()->rational_part() == Rational(1, 2));
  CHECK(r.exact()->surd_coefficient() == Rational(3, 4));

  r = parse_real("sqrt(2)-1");
  REQUIRE(r.is_exact());
  CHECK(r.exact()->rational_part() == Rational(-1));

  r = parse_real("7");
  REQUIRE(r.is_exact());
  CHECK(r.exact()->is_integer());

  CHECK(parse_real("1+2*sqrt(2)").exact()->surd_coefficient() == Rational(2));
}

TEST_CASE("surd text round-trips through the parser") {
  for (const char* text : {"1/2 - 3/4*sqrt(5)", "-sqrt(2)", "7/3", "sqrt(3)", "-2 + 5*sqrt(6)"}) {
    CAPTURE(text);
    const auto r = parse_real(text);
    REQUIRE(r.is_exact());
    CHECK(*parse_real(r.str()).exact() == *r.exact());
  }
}

TEST_CASE("parse_real: decimals are inexact") {
  const auto r = parse_real("1.41421356");
  CHECK_FALSE(r.is_exact());
  CHECK(r.value() == doctest::Approx(1.41421356));
  CHECK_FALSE(parse_real("1e-3").is_exact());
}

TEST_CASE("parse_real: malformed input and mixed radicands are rejected") {
  for (const char* bad : {"", "sqrt(", "1/0", "sqrt(2)+sqrt(3)", "abc", "2**3", "sqrt(-1)"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_real(bad), Error);
  }
}

TEST_CASE("same_value compares the stored representation") {
  CHECK(same_value(parse_real("1/2"), parse_real("2/4")));
  // Mixed exact/float pairs fall back to the doubles.
  CHECK(same_value(parse_real("1/2"), Real(0.5)));
  CHECK_FALSE(same_value(parse_real("1/3"), Real(0.5)));
  CHECK(same_value(Real(0.5), Real(0.5)));
}
