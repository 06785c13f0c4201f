#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "specpoint/parser.hpp"

using namespace specpoint;
using namespace specpoint::cli;
using poly::BivarPoly;
using poly::Rational;

namespace {

BivarPoly bp(std::initializer_list<std::tuple<long, int, int>> terms) {
    BivarPoly f;
    for (const auto& [c, i, j] : terms) f = f + BivarPoly::term(Rational(c), i, j);
    return f;
}

}  // namespace

TEST_CASE("grammar examples") {
    CHECK(parse_poly("X*Y - 1").to_bivar() == bp({{1, 1, 1}, {-1, 0, 0}}));
    CHECK(parse_poly("X + Y^2 - 1727").to_bivar() == bp({{1, 1, 0}, {1, 0, 2}, {-1727, 0, 0}}));
    BivarPoly half_y = parse_poly("X + (1/2)*Y").to_bivar();
    CHECK(half_y.coeff(0, 1) == Rational(1, 2));
    CHECK(half_y.coeff(1, 0) == 1);
    CHECK(parse_poly(" X \n * Y ").to_bivar() == bp({{1, 1, 1}}));
    CHECK(parse_poly("1 / 2").to_bivar() == BivarPoly::constant(Rational(1, 2)));
    CHECK(parse_poly("0").to_bivar().is_zero());
    CHECK(parse_poly("(X + 1)^3").to_bivar() ==
          bp({{1, 3, 0}, {3, 2, 0}, {3, 1, 0}, {1, 0, 0}}));
    // Leading unary minus.
    CHECK(parse_poly("-X + 1").to_bivar() == bp({{-1, 1, 0}, {1, 0, 0}}));
    CHECK(parse_poly("-(X*Y)").to_bivar() == bp({{-1, 1, 1}}));
}

TEST_CASE("syntax errors carry positions") {
    CHECK_THROWS_AS(parse_poly("2X"), ParseError);
    CHECK_THROWS_AS(parse_poly("X Y"), ParseError);
    CHECK_THROWS_AS(parse_poly("X + Z"), ParseError);
    CHECK_THROWS_AS(parse_poly("x"), ParseError);
    CHECK_THROWS_AS(parse_poly("(X"), ParseError);
    CHECK_THROWS_AS(parse_poly("X +"), ParseError);
    CHECK_THROWS_AS(parse_poly("^2"), ParseError);
    CHECK_THROWS_AS(parse_poly("X^-2"), ParseError);
    CHECK_THROWS_AS(parse_poly("X^9999999999"), ParseError);
    CHECK_THROWS_AS(parse_poly("X^999999"), ParseError);
    CHECK_THROWS_AS(parse_poly("1/0"), ParseError);
    CHECK_THROWS_AS(parse_poly(""), ParseError);
    CHECK_THROWS_AS(parse_poly("X)"), ParseError);
    try {
        parse_poly("X +\nQ");
        FAIL("expected error");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
        CHECK(e.col == 1);
    }
}

TEST_CASE("T-coefficient handling") {
    ParsedPoly p = parse_poly("X + T*Y");
    CHECK(p.uses_t());
    CHECK_THROWS(p.to_bivar());
    poly::KBivarPoly k = p.to_kbivar();
    CHECK(k.deg_x() == 1);
    CHECK(k.deg_y() == 1);
    CHECK(parse_poly("T^2 - 2").to_unipoly_t() ==
          poly::UniPoly({Rational(-2), Rational(0), Rational(1)}));
    CHECK_THROWS(parse_poly("X + Y").to_unipoly_t());
}

TEST_CASE("parse-print round trip") {
    std::mt19937_64 rng(99);
    for (int t = 0; t < 200; ++t) {
        BivarPoly f;
        int terms = 1 + static_cast<int>(rng() % 6);
        for (int i = 0; i < terms; ++i) {
            long num = static_cast<long>(rng() % 41) - 20;
            long den = 1 + static_cast<long>(rng() % 6);
            Rational c(num, den);
            c.canonicalize();
            f = f + BivarPoly::term(c, static_cast<int>(rng() % 5), static_cast<int>(rng() % 5));
        }
        std::string s = f.str();
        BivarPoly g = parse_poly(s).to_bivar();
        CHECK(g == f);
        CHECK(g.str() == s);
    }
}
