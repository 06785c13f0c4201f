#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "specpoint/arith.hpp"
#include "specpoint/ball.hpp"
#include "specpoint/poly.hpp"

using namespace specpoint::poly;
using specpoint::ball::BallComplex;
using specpoint::ball::BallReal;

namespace {

UniPoly up(std::initializer_list<long> asc) {
    std::vector<Rational> v;
    for (long c : asc) v.emplace_back(c);
    return UniPoly(std::move(v));
}

// X^i Y^j monomial helper
BivarPoly bp(std::initializer_list<std::tuple<long, int, int>> terms) {
    BivarPoly f;
    for (const auto& [c, i, j] : terms) f = f + BivarPoly::term(Rational(c), i, j);
    return f;
}

}  // namespace

TEST_CASE("unipoly arithmetic basics") {
    UniPoly a = up({-1, 0, 1});  // X^2 - 1
    UniPoly b = up({-1, 1});     // X - 1
    auto [q, r] = UniPoly::divrem(a, b);
    CHECK(q == up({1, 1}));
    CHECK(r.is_zero());
    CHECK((b * q) == a);
    CHECK_THROWS(UniPoly::divexact(up({1, 0, 1}), b));
    CHECK(a.derivative() == up({0, 2}));
    CHECK(up({2, 4}).primitive_integer() == up({1, 2}));
    CHECK(up({0}).is_zero());
}

TEST_CASE("gcd_uni examples") {
    CHECK(gcd_uni(up({-1, 0, 1}), up({-1, 1})) == up({-1, 1}));
    UniPoly f = up({-1728, 1});
    CHECK(gcd_uni(f * f, f) == f);
    CHECK(gcd_uni(cyclotomic(8), cyclotomic(4)) == up({1}));
    CHECK_THROWS(gcd_uni(UniPoly(), UniPoly()));
}

TEST_CASE("gcd divides both arguments exactly") {
    std::mt19937_64 rng(33);
    for (int t = 0; t < 100; ++t) {
        auto rnd = [&](int deg) {
            std::vector<Rational> v;
            for (int i = 0; i <= deg; ++i) v.emplace_back(static_cast<long>(rng() % 19) - 9);
            return UniPoly(std::move(v));
        };
        UniPoly c = rnd(2), a = rnd(3) * c, b = rnd(3) * c;
        if (a.is_zero() || b.is_zero()) continue;
        UniPoly g = gcd_uni(a, b);
        CHECK(UniPoly::divrem(a, g).second.is_zero());
        CHECK(UniPoly::divrem(b, g).second.is_zero());
        if (c.degree() >= 1) CHECK(g.degree() >= c.degree());
    }
}

TEST_CASE("cyclotomic polynomials") {
    CHECK(cyclotomic(1) == up({-1, 1}));
    CHECK(cyclotomic(8) == up({1, 0, 0, 0, 1}));
    CHECK(cyclotomic(12) == up({1, 0, -1, 0, 1}));
    // Moebius-product oracle: prod over d | N of Phi_d equals Y^N - 1.
    for (std::uint64_t n = 1; n <= 200; ++n) {
        UniPoly prod = UniPoly::constant(Rational(1));
        for (std::uint64_t d = 1; d <= n; ++d) {
            if (n % d == 0) prod = prod * cyclotomic(d);
        }
        UniPoly expect = UniPoly::monomial(Rational(1), static_cast<int>(n)) - up({1});
        CHECK(prod == expect);
        CHECK(cyclotomic(n).degree() == static_cast<int>(specpoint::arith::phi(n)));
    }
}

TEST_CASE("content_in_x / content_in_y") {
    // (X-1)(Y-1)
    BivarPoly f = bp({{1, 1, 1}, {-1, 1, 0}, {-1, 0, 1}, {1, 0, 0}});
    CHECK(content_in_x(f) == up({-1, 1}));
    BivarPoly g = bp({{1, 1, 1}, {-1, 0, 0}});  // XY - 1
    CHECK(content_in_x(g) == up({1}));
    BivarPoly h = bp({{1, 2, 0}, {1, 1, 2}});  // X^2 + X Y^2
    CHECK(content_in_x(h) == up({0, 1}));
    CHECK(content_in_y(f) == up({-1, 1}));
    CHECK_THROWS(content_in_x(BivarPoly::zero()));
}

TEST_CASE("resultant_y examples") {
    // F = Y - X, B = Y^2 + 1 -> X^2 + 1 (up to sign)
    BivarPoly f1 = bp({{1, 0, 1}, {-1, 1, 0}});
    UniPoly r1 = resultant_y(f1, up({1, 0, 1}));
    CHECK((r1 == up({1, 0, 1}) || r1 == -up({1, 0, 1})));

    // F = X + Y^2 - 1727, B = Phi_4 -> (X - 1728)^2
    BivarPoly f2 = bp({{1, 1, 0}, {1, 0, 2}, {-1727, 0, 0}});
    UniPoly r2 = resultant_y(f2, cyclotomic(4));
    UniPoly expect2 = up({-1728, 1}) * up({-1728, 1});
    CHECK((r2 == expect2 || r2 == -expect2));

    // F = XY - 1, B = Y - 1 -> X - 1 (up to sign)
    BivarPoly f3 = bp({{1, 1, 1}, {-1, 0, 0}});
    UniPoly r3 = resultant_y(f3, up({-1, 1}));
    CHECK((r3 == up({-1, 1}) || r3 == -up({-1, 1})));

    CHECK_THROWS(resultant_y(BivarPoly::zero(), UniPoly()));
}

TEST_CASE("resultant against numeric product over roots of unity") {
    std::mt19937_64 rng(4242);
    const mpfr_prec_t prec = 128;
    for (int trial = 0; trial < 40; ++trial) {
        BivarPoly f;
        int dx = 1 + static_cast<int>(rng() % 3);
        int dy = 1 + static_cast<int>(rng() % 3);
        for (int i = 0; i <= dx; ++i)
            for (int j = 0; j <= dy; ++j)
                f = f + BivarPoly::term(Rational(static_cast<long>(rng() % 19) - 9), i, j);
        if (f.is_zero() || f.deg_y() < 1) continue;
        std::uint64_t n = 1 + rng() % 12;
        UniPoly phi_n = cyclotomic(n);
        UniPoly res = resultant_y(f, phi_n);
        for (int pt = 0; pt < 3; ++pt) {
            mpq_class x0(static_cast<long>(rng() % 21) - 10, static_cast<long>(rng() % 9) + 1);
            x0.canonicalize();
            Rational exact = res.eval(x0);
            // prod over primitive n-th roots of unity of F(x0, lambda_k)
            BallComplex prod = BallComplex::from_si(1, 0, prec);
            BallComplex x0b = BallComplex::from_mpq(x0, 0, prec);
            BallReal two_pi = specpoint::ball::mul_si(BallReal::pi(prec), 2);
            for (std::uint64_t k = 1; k <= n; ++k) {
                if (std::gcd(k, n) != 1) continue;
                BallReal theta = specpoint::ball::div(
                    specpoint::ball::mul_si(two_pi, static_cast<long>(k)),
                    BallReal::from_si(static_cast<long>(n), prec));
                BallComplex lam(specpoint::ball::cos_ball(theta), specpoint::ball::sin_ball(theta));
                prod = specpoint::ball::mul(prod, f.eval_ball(x0b, lam, prec));
            }
            // res(x0) must match +/- the product.
            BallComplex diff_p = specpoint::ball::sub(prod, BallComplex::from_mpq(exact, 0, prec));
            BallComplex diff_m = specpoint::ball::add(prod, BallComplex::from_mpq(exact, 0, prec));
            CHECK((diff_p.contains_zero() || diff_m.contains_zero()));
        }
    }
}

TEST_CASE("resultant_uni and discriminant") {
    CHECK(resultant_uni(up({-3, 1}), up({-5, 1})) == Rational(-2));  // (a - b) with a=3,b=5
    // disc(X^2 + 191025 X - 121287375) = 5 * 85995^2
    UniPoly h15 = UniPoly({Rational(-121287375), Rational(191025), Rational(1)});
    Rational d = discriminant_uni(h15);
    CHECK(d == Rational(36975700125L));
    mpz_class root;
    mpz_class q5 = d.get_num() / 5;
    CHECK(mpz_perfect_square_p(q5.get_mpz_t()));
}

TEST_CASE("height over Q") {
    BivarPoly f = bp({{2, 1, 0}, {4, 0, 1}});
    auto h = height_q(f);
    CHECK(h.big_h == 2);
    CHECK(h.primitive == bp({{1, 1, 0}, {2, 0, 1}}));
    auto h2 = height_q(bp({{3, 2, 1}, {-5, 0, 0}}));
    CHECK(h2.big_h == 5);
    auto h3 = height_q(bp({{1, 1, 0}, {1, 0, 2}, {-1727, 0, 0}}));
    CHECK(h3.big_h == 1727);
    CHECK(h3.log_h == doctest::Approx(std::log(1727.0)).epsilon(1e-12));
    CHECK_THROWS(height_q(BivarPoly::zero()));
}

TEST_CASE("norm_form examples") {
    // d = 1: F' = F
    NumberFieldSpec q1{up({0, 1}), 0, false};
    KBivarPoly f;
    f.set_coeff(1, 0, up({1}));   // X
    f.set_coeff(1, 1, up({2}));   // 2 X Y
    BivarPoly n1 = norm_form(f, q1);
    CHECK(n1 == bp({{1, 1, 0}, {2, 1, 1}}));

    // K = Q(sqrt 2): X + T*Y -> X^2 - 2 Y^2
    NumberFieldSpec qs2{up({-2, 0, 1}), 0, false};
    KBivarPoly g;
    g.set_coeff(1, 0, up({1}));
    g.set_coeff(0, 1, up({0, 1}));
    CHECK(norm_form(g, qs2) == bp({{1, 2, 0}, {-2, 0, 2}}));

    // K = Q(i): X + T -> X^2 + 1
    NumberFieldSpec qi{up({1, 0, 1}), 0, false};
    KBivarPoly h;
    h.set_coeff(1, 0, up({1}));
    h.set_coeff(0, 0, up({0, 1}));
    CHECK(norm_form(h, qi) == bp({{1, 2, 0}, {1, 0, 0}}));

    KBivarPoly z;
    CHECK_THROWS(norm_form(z, qs2));
}

TEST_CASE("norm_form vanishes where an embedding vanishes") {
    // F = X + T Y over Q(sqrt 2); at (x0, y0) with x0 = -sqrt(2) y0 the
    // sigma = sqrt(2) embedding vanishes, so F' must vanish.
    NumberFieldSpec qs2{up({-2, 0, 1}), 0, false};
    KBivarPoly g;
    g.set_coeff(1, 0, up({1}));
    g.set_coeff(0, 1, up({0, 1}));
    BivarPoly np = norm_form(g, qs2);
    const mpfr_prec_t prec = 128;
    std::mt19937_64 rng(9);
    for (int t = 0; t < 20; ++t) {
        mpq_class y0(static_cast<long>(rng() % 41) - 20, static_cast<long>(rng() % 7) + 1);
        y0.canonicalize();
        BallReal sqrt2 = specpoint::ball::sqrt_ball(BallReal::from_si(2, prec));
        BallReal x0 = specpoint::ball::neg(specpoint::ball::mul(sqrt2, BallReal::from_mpq(y0, prec)));
        BallComplex xb(x0, BallReal::from_si(0, prec));
        BallComplex yb = BallComplex::from_mpq(y0, 0, prec);
        CHECK(np.eval_ball(xb, yb, prec).contains_zero());
    }
}

TEST_CASE("number field validation") {
    CHECK_NOTHROW(validate_number_field({up({-2, 0, 1}), 0, false}));
    CHECK_NOTHROW(validate_number_field({up({1, 0, 1}), 0, false}));
    CHECK_NOTHROW(validate_number_field({up({-2, 0, 0, 1}), 0, false}));     // T^3 - 2
    CHECK_NOTHROW(validate_number_field({up({1, 1, 1, 1, 1}), 0, false}));   // Phi_5
    CHECK_THROWS(validate_number_field({up({-1, 0, 1}), 0, false}));         // T^2 - 1 reducible
    CHECK_THROWS(validate_number_field({up({-4, 0, 1}), 0, false}));         // (T-2)(T+2)
    CHECK_THROWS(validate_number_field({up({0, 1, 1}), 0, false}));          // divisible by T
    CHECK_THROWS(validate_number_field({up({-2, 0, 2}), 0, false}));         // not monic
    // X^4 + 1 is reducible mod every prime: needs the trusted flag.
    CHECK_THROWS(validate_number_field({up({1, 0, 0, 0, 1}), 0, false}));
    CHECK_NOTHROW(validate_number_field({up({1, 0, 0, 0, 1}), 0, true}));
}

TEST_CASE("bivar printing round-trip shape") {
    BivarPoly f = bp({{1, 1, 1}, {-1, 0, 0}});
    CHECK(f.str() == "X*Y - 1");
    BivarPoly g = bp({{1, 1, 0}, {1, 0, 2}, {-1727, 0, 0}});
    CHECK(g.str() == "X + Y^2 - 1727");
    CHECK(BivarPoly::zero().str() == "0");
    CHECK(up({-1728, 1}).str("X") == "X - 1728");
}
