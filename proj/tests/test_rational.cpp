#include <doctest.h>

#include "lipiso/rational.hpp"

using namespace lipiso;

TEST_CASE("parse_rational accepts integers, decimals, fractions and exponents") {
    CHECK(parse_rational("3") == 3);
    CHECK(parse_rational("-2") == -2);
    CHECK(parse_rational("1.25") == Rational(5, 4));
    CHECK(parse_rational("7/4") == Rational(7, 4));
    CHECK(parse_rational("1e-3") == Rational(1, 1000));
    CHECK(parse_rational(" 0.5 ") == Rational(1, 2));
    CHECK(parse_rational("-3/6") == Rational(-1, 2));
}

TEST_CASE("parse_rational rejects garbage") {
    CHECK_THROWS_AS(parse_rational(""), ParseError);
    CHECK_THROWS_AS(parse_rational("abc"), ParseError);
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("1..2"), ParseError);
}

TEST_CASE("to_string is lowest terms") {
    CHECK(to_string(Rational(6, 4)) == "3/2");
    CHECK(to_string(Rational(4, 2)) == "2");
    CHECK(to_string(Rational(-1, 3)) == "-1/3");
}

TEST_CASE("exact_power finds rational roots only") {
    CHECK(exact_power(Rational{4}, Rational(1, 2)) == Rational{2});
    CHECK(exact_power(Rational(8, 27), Rational(2, 3)) == Rational(4, 9));
    CHECK_FALSE(exact_power(Rational{2}, Rational(1, 2)).has_value());
    CHECK(exact_power(Rational{0}, Rational(1, 3)) == Rational{0});
}

TEST_CASE("power comparisons are exact") {
    const PowerValue sqrt2{Rational{2}, Rational(1, 2)};
    CHECK(compare(sqrt2, Rational(7, 5)).order > 0);
    CHECK(compare(sqrt2, Rational(3, 2)).order < 0);
    CHECK(compare(PowerValue{Rational{4}, Rational(1, 2)}, Rational{2}).order == 0);
    // 2^(1/2) vs 3^(1/3): 8 vs 9 after raising to the 6th power.
    CHECK(compare(sqrt2, PowerValue{Rational{3}, Rational(1, 3)}).order < 0);
    CHECK(compare(sqrt2, Rational{-1}).order > 0);
}

TEST_CASE("compare_sum decides a against c + b") {
    const PowerValue sqrt2{Rational{2}, Rational(1, 2)};
    const PowerValue sqrt8{Rational{8}, Rational(1, 2)};
    // sqrt8 = 2 sqrt2 > 1 + sqrt2.
    CHECK(compare_sum(sqrt8, Rational{1}, sqrt2).order > 0);
    // Exact on the left: 3 vs 1 + sqrt2 (about 2.414).
    CHECK(compare_sum(PowerValue::of(Rational{3}), Rational{1}, sqrt2).order > 0);
    CHECK(compare_sum(PowerValue::of(Rational{2}), Rational{1}, sqrt2).order < 0);
    // Equal irrational sides with c = 0 stay exact.
    CHECK(compare_sum(sqrt2, Rational{0}, sqrt2).order == 0);
    CHECK(compare_sum(PowerValue::of(Rational{3}), Rational{1}, PowerValue::of(Rational{2})).order == 0);
}

TEST_CASE("approximate stays within the published bound") {
    const PowerValue sqrt2{Rational{2}, Rational(1, 2)};
    const RationalApprox a = approximate(sqrt2);
    CHECK_FALSE(a.exact);
    const Rational err = a.value * a.value - 2;
    // |x^2 - 2| = |x - sqrt2| (x + sqrt2) < 3 * bound.
    CHECK((err < 0 ? Rational{-err} : err) < 3 * approximation_bound());
    CHECK(approximate(PowerValue{Rational{9}, Rational(1, 2)}).exact);
}
