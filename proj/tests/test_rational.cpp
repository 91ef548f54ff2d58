// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <limits>
#include <stdexcept>

#include "fhsplit/rational.hpp"

using fhsplit::Rational;

TEST_CASE("rational keeps lowest terms")
{
    Rational r(171, 100);
    CHECK(r.numerator() == 171);
    CHECK(r.denominator() == 100);
    CHECK(Rational(2048, 1200) == Rational(128, 75));
    CHECK(Rational(0, 7) == Rational(0));
    CHECK(Rational(6, 3).is_integer());
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
}

TEST_CASE("rational parse")
{
    CHECK(Rational::parse("3") == Rational(3));
    CHECK(Rational::parse("1.71") == Rational(171, 100));
    CHECK(Rational::parse("2048/1200") == Rational(128, 75));
    CHECK(Rational::parse("0.5") == Rational(1, 2));
    CHECK(Rational::parse(".25") == Rational(1, 4));
    CHECK(Rational::parse("2.") == Rational(2));
    CHECK_THROWS_AS(Rational::parse(""), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse("-1"), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse("1.2.3"), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse("abc"), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse("1/0"), std::domain_error);
    CHECK_THROWS_AS(Rational::parse("1.0000000000000000001"), std::invalid_argument);
}

TEST_CASE("rational arithmetic and ordering")
{
    CHECK(Rational(1, 2) * Rational(2, 3) == Rational(1, 3));
    CHECK(Rational(1, 2) / Rational(1, 4) == Rational(2));
    CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(7, 5) > Rational(4, 3));
    CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
    const auto big = std::numeric_limits<std::uint64_t>::max();
    CHECK_THROWS_AS(Rational(big) * Rational(2), std::overflow_error);
    // Intermediate products above 64 bits are fine if the result fits.
    CHECK(Rational(big, 3) * Rational(3, big) == Rational(1));
}

TEST_CASE("round half up")
{
    CHECK(Rational(5, 2).round_half_up() == 3);
    CHECK(Rational(7, 3).round_half_up() == 2);
    CHECK(Rational(25).round_half_up(10) == 3);
    CHECK(Rational(24).round_half_up(10) == 2);
    CHECK(Rational(0).round_half_up() == 0);
    CHECK(Rational(15, 100).round_half_up() == 0);
}

TEST_CASE("to_string")
{
    CHECK(Rational(3).to_string() == "3");
    CHECK(Rational(171, 100).to_string() == "171/100");
}
