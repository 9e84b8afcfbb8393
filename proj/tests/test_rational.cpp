#include "doctest.h"

#include <random>

#include "detwalk/rational.hpp"

using detwalk::Rational;

TEST_CASE("parse yields lowest terms with positive denominator") {
    CHECK(Rational::parse("2/4") == Rational(1, 2));
    CHECK(Rational::parse("3/-6").str() == "-1/2");
    CHECK(Rational::parse(" -7 ").str() == "-7");
    CHECK(Rational::parse("+3/9").denominator() == 3);
    CHECK(Rational::parse("0/5").str() == "0");
}

TEST_CASE("parse rejects floats and malformed literals") {
    for (const char* bad : {"0.5", "1e3", "1/2/3", "", "/2", "1/", "abc", "1 / 0", "nan"})
        CHECK_THROWS_AS(Rational::parse(bad), std::invalid_argument);
}

TEST_CASE("arithmetic is exact") {
    const Rational third(1, 3);
    CHECK(third + third + third == Rational(1));
    CHECK(Rational(3, 4) - Rational(1, 4) == Rational(1, 2));
    CHECK(Rational(2, 3) * Rational(3, 4) == Rational(1, 2));
    CHECK(Rational(1, 2) / Rational(1, 4) == Rational(2));
    CHECK(Rational(-2, 3).abs() == Rational(2, 3));
    CHECK(Rational(-2, 3).inverse() == Rational(-3, 2));
    CHECK_THROWS(Rational(1) / Rational(0));
    CHECK_THROWS(Rational(1, 0));
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-1, 2) < Rational(0));
}

TEST_CASE("decimal rendering uses 12 significant digits") {
    CHECK(Rational(1, 3).decimal(12) == "0.333333333333");
    CHECK(Rational(4, 3).decimal(12) == "1.33333333333");
    CHECK(Rational(1, 4).decimal(12) == "0.25");
}

TEST_CASE("field identities hold on random rationals") {
    std::mt19937_64 g(7);
    std::uniform_int_distribution<long> num(-1000, 1000), den(1, 1000);
    for (int k = 0; k < 500; ++k) {
        const Rational a(num(g), den(g)), b(num(g), den(g)), c(num(g), den(g));
        CHECK((a + b) - b == a);
        CHECK(a * (b + c) == a * b + a * c);
        if (!b.is_zero()) CHECK((a / b) * b == a);
        CHECK(Rational::parse(a.str()) == a);
        CHECK(a.denominator() > 0);
    }
}
