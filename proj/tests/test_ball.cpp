#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "specpoint/ball.hpp"

using namespace specpoint::ball;

namespace {

bool contains_rational(const BallReal& b, const mpq_class& v) {
    mpfr_t x, d;
    mpfr_init2(x, 256);
    mpfr_init2(d, 256);
    mpfr_set_q(x, v.get_mpq_t(), MPFR_RNDN);
    mpfr_sub(d, x, b.mid(), MPFR_RNDA);
    mpfr_abs(d, d, MPFR_RNDU);
    // Small slack for the 256-bit representation of v itself.
    mpfr_t r;
    mpfr_init2(r, 64);
    mpfr_set(r, b.rad(), MPFR_RNDU);
    mpfr_nextabove(r);
    bool ok = mpfr_cmp(d, r) <= 0;
    mpfr_clear(x);
    mpfr_clear(d);
    mpfr_clear(r);
    return ok;
}

mpq_class rand_q(std::mt19937_64& rng) {
    long num = static_cast<long>(rng() % 2001) - 1000;
    long den = static_cast<long>(rng() % 999) + 1;
    mpq_class q(num, den);
    q.canonicalize();
    return q;
}

}  // namespace

TEST_CASE("exact integers have zero radius") {
    BallReal a = BallReal::from_si(42, 64);
    CHECK(a.rad_d() == 0.0);
    BallReal b = BallReal::from_si(-7, 64);
    BallReal s = add(a, b);
    CHECK(s.mid_d() == 35.0);
    CHECK(s.rad_d() == 0.0);
}

TEST_CASE("field ops enclose the exact rational value") {
    std::mt19937_64 rng(101);
    for (int t = 0; t < 500; ++t) {
        mpq_class qa = rand_q(rng), qb = rand_q(rng);
        BallReal a = BallReal::from_mpq(qa, 96);
        BallReal b = BallReal::from_mpq(qb, 96);
        CHECK(contains_rational(add(a, b), qa + qb));
        CHECK(contains_rational(sub(a, b), qa - qb));
        CHECK(contains_rational(mul(a, b), qa * qb));
        if (qb != 0 && !b.contains_zero()) {
            CHECK(contains_rational(div(a, b), qa / qb));
        }
    }
}

TEST_CASE("radius grows through dependent chains but stays an enclosure") {
    mpq_class q(1, 3);
    BallReal x = BallReal::from_mpq(q, 64);
    BallReal acc = BallReal::from_si(0, 64);
    mpq_class exact(0);
    for (int i = 0; i < 50; ++i) {
        acc = add(mul(acc, x), x);
        exact = exact * q + q;
    }
    CHECK(contains_rational(acc, exact));
    CHECK(acc.rad_d() > 0);
}

TEST_CASE("pi enclosure") {
    BallReal p = BallReal::pi(128);
    mpfr_t hi;
    mpfr_init2(hi, 512);
    mpfr_const_pi(hi, MPFR_RNDN);
    mpfr_sub(hi, hi, p.mid(), MPFR_RNDA);
    mpfr_abs(hi, hi, MPFR_RNDU);
    CHECK(mpfr_cmp(hi, p.rad()) <= 0);
    mpfr_clear(hi);
}

TEST_CASE("exp/sin/cos enclose higher precision evaluations") {
    std::mt19937_64 rng(55);
    for (int t = 0; t < 200; ++t) {
        mpq_class q = rand_q(rng);
        BallReal x = BallReal::from_mpq(q, 96);
        for (int which = 0; which < 3; ++which) {
            BallReal y = which == 0 ? exp_ball(x) : which == 1 ? sin_ball(x) : cos_ball(x);
            mpfr_t ref, d;
            mpfr_init2(ref, 400);
            mpfr_init2(d, 400);
            mpfr_set_q(ref, q.get_mpq_t(), MPFR_RNDN);
            if (which == 0) mpfr_exp(ref, ref, MPFR_RNDN);
            if (which == 1) mpfr_sin(ref, ref, MPFR_RNDN);
            if (which == 2) mpfr_cos(ref, ref, MPFR_RNDN);
            mpfr_sub(d, ref, y.mid(), MPFR_RNDA);
            mpfr_abs(d, d, MPFR_RNDU);
            mpfr_t r;
            mpfr_init2(r, 64);
            mpfr_set(r, y.rad(), MPFR_RNDU);
            mpfr_nextabove(r);
            CHECK(mpfr_cmp(d, r) <= 0);
            mpfr_clear(ref);
            mpfr_clear(d);
            mpfr_clear(r);
        }
    }
}

TEST_CASE("inverse of a zero-straddling ball is not finite") {
    BallReal z = BallReal::from_si(0, 64);
    z.add_error_2exp(0);  // 0 +/- 1
    CHECK_FALSE(inv(z).is_finite());
}

TEST_CASE("complex multiplication and inversion") {
    BallComplex i = BallComplex::from_si(0, 1, 96);
    BallComplex m = mul(i, i);
    CHECK(m.re.mid_d() == -1.0);
    CHECK(m.im.contains_zero());
    BallComplex z = BallComplex::from_si(3, 4, 96);
    BallReal n = norm_ball(z);
    CHECK(n.mid_d() == 25.0);
    BallComplex w = mul(z, inv(z));
    CHECK(w.re.lb_d() <= 1.0);
    CHECK(w.re.ub_d() >= 1.0);
    CHECK(w.im.contains_zero());
}

TEST_CASE("cis_exp at pi gives -1") {
    BallComplex w(BallReal::pi(128), BallReal::from_si(0, 128));
    BallComplex q = cis_exp(w);
    CHECK(q.re.lb_d() <= -1.0);
    CHECK(q.re.ub_d() >= -1.0);
    CHECK(q.im.contains_zero());
    CHECK(q.im.rad_d() < 1e-30);
}

TEST_CASE("integer powers") {
    BallReal two = BallReal::from_si(2, 64);
    CHECK(pow_ui(two, 20).mid_d() == 1048576.0);
    BallComplex i = BallComplex::from_si(0, 1, 64);
    BallComplex r = pow_ui(i, 4);
    CHECK(r.re.lb_d() <= 1.0);
    CHECK(r.re.ub_d() >= 1.0);
    CHECK(r.im.contains_zero());
}
