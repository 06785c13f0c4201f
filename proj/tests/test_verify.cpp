#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "specpoint/arith.hpp"
#include "specpoint/ball.hpp"
#include "specpoint/poly.hpp"
#include "specpoint/solver.hpp"
#include "specpoint/verify.hpp"

using namespace specpoint;
using namespace specpoint::verify;

TEST_CASE("unit squares check passes on a hand-checkable range") {
    VerifyReport r = check_lemma_unit_squares(300);
    CHECK(r.pass());
    CHECK(r.check_name == "unit-squares");
    // N = 8 inside: 4 = 2^(1 - (-1)); N = 1: 1 = 2^0.
    CHECK(arith::unit_square_class_order(8) == 4);
    CHECK(arith::unit_square_class_order(1) == 1);
    CHECK_THROWS(check_lemma_unit_squares(2000000));
}

TEST_CASE("n-bound check passes to 30000") {
    VerifyReport r = check_prop_n_bound(30000);
    CHECK(r.pass());
    // Boundary region around 2346 and the primorial value are inside the range.
    CHECK(r.range == "n <= 30000");
}

TEST_CASE("primorial battery") {
    VerifyReport r = check_primorial_cases();
    CHECK(r.pass());
    CHECK(r.counterexamples.empty());
    CHECK(r.notes.find("min certified gap") != std::string::npos);
}

TEST_CASE("j estimate check") {
    VerifyReport r = check_j_estimate(20);
    CHECK(r.pass());
}

TEST_CASE("liouville check and its spot values") {
    VerifyReport r = check_liouville_bound(50);
    CHECK(r.pass());

    const mpfr_prec_t prec = 192;
    // g = Y - 1 at a primitive cube root: |z3 - 1| = sqrt(3) clears the bound.
    poly::UniPoly g({poly::Rational(-1), poly::Rational(1)});
    ball::BallComplex lam = solver::root_of_unity(3, 1, prec);
    ball::BallReal v = ball::abs_ball(g.eval_ball(lam, prec));
    CHECK(v.mid_d() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
    double bound = std::pow(2.0, 1.0 - 3.0) * std::pow(4.0, -0.5) * std::pow(1.0, 1.0 - 3.0);
    CHECK(v.lb_d() >= bound);

    // Constant g: |g(lambda)| >= 1 >= bound.
    CHECK(1.0 >= std::pow(7.0, -19.0));

    // g = 2Y + 1 at i: |2i + 1| = sqrt(5).
    poly::UniPoly g2({poly::Rational(1), poly::Rational(2)});
    ball::BallComplex i4 = solver::root_of_unity(4, 1, prec);
    ball::BallReal v2 = ball::abs_ball(g2.eval_ball(i4, prec));
    CHECK(v2.mid_d() == doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));
}

TEST_CASE("E field generators") {
    CHECK(e_field_generators(5) == std::vector<long long>{5});
    CHECK(e_field_generators(8) == std::vector<long long>{-1, 2});
    CHECK(e_field_generators(12) == std::vector<long long>{-3, -1});
    CHECK(e_field_generators(1).empty());
    // Cardinality = omega(N) - c1(N) for all N up to 10^4.
    for (std::uint64_t n = 1; n <= 10000; ++n) {
        int expo = static_cast<int>(arith::omega(n)) - arith::c1(n);
        CHECK(e_field_generators(n).size() == static_cast<std::size_t>(expo));
    }
}

TEST_CASE("dispatch by name") {
    CHECK(run_check("primorial", 0, 0).pass());
    CHECK(run_check("unit-squares", 100, 0).pass());
    CHECK_THROWS(run_check("no-such-check", 0, 0));
}
