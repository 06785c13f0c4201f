#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "specpoint/cm.hpp"

using namespace specpoint::cm;
using specpoint::ball::BallComplex;
using specpoint::ball::BallReal;

namespace {

bool ball_contains_int(const BallComplex& z, long v) {
    if (!z.im.contains_zero()) return false;
    BallReal d = specpoint::ball::sub(z.re, BallReal::from_si(v, z.prec()));
    return d.contains_zero();
}

}  // namespace

TEST_CASE("disc validation") {
    CHECK_NOTHROW(Disc::checked(-3));
    CHECK_NOTHROW(Disc::checked(-4));
    CHECK_NOTHROW(Disc::checked(-15));
    CHECK_THROWS(Disc::checked(-5));
    CHECK_THROWS(Disc::checked(-6));
    CHECK_THROWS(Disc::checked(4));
    CHECK_THROWS(Disc::checked(0));
}

TEST_CASE("reduced forms examples") {
    CHECK(reduced_forms(Disc{-4}) == std::vector<QuadForm>{{1, 0, 1}});
    CHECK(reduced_forms(Disc{-15}) == std::vector<QuadForm>{{1, 1, 4}, {2, 1, 2}});
    auto f23 = reduced_forms(Disc{-23});
    CHECK(f23 == std::vector<QuadForm>{{1, 1, 6}, {2, -1, 3}, {2, 1, 3}});
    // Imprimitive forms of matching discriminant are enumerated too.
    CHECK(reduced_forms(Disc{-16}) == std::vector<QuadForm>{{1, 0, 4}, {2, 0, 2}});
}

TEST_CASE("class numbers from the form scan") {
    CHECK(class_number(Disc{-3}) == 1);
    CHECK(class_number(Disc{-15}) == 2);
    CHECK(class_number(Disc{-23}) == 3);
    for (auto d : {-3, -4, -7, -8, -11, -19, -43, -67, -163}) {
        CHECK(class_number(Disc{d}) == 1);
    }
}

TEST_CASE("form reduction") {
    QuadForm f{5, 7, 3};  // disc -11
    QuadForm r = reduce_form(f);
    CHECK(r == QuadForm{1, 1, 3});
    CHECK(r.disc() == -11);
    CHECK(reduce_form({1, 0, 1}) == QuadForm{1, 0, 1});
    CHECK(reduce_form({3, -2, 1}).disc() == -8);
    CHECK(reduce_form({3, -2, 1}) == QuadForm{1, 0, 2});
}

TEST_CASE("j series against an independent five-term division oracle") {
    // Oracle: naive 5-term arithmetic written out separately from the library.
    const int t = 5;
    long e4[t] = {1, 240, 2160, 6720, 17520};  // 1 + 240 sum sigma3(n) q^n
    long eta[t] = {1, -1, -1, 0, 0};           // pentagonal numbers
    auto mul5 = [&](const long* a, const long* b, long* out) {
        for (int i = 0; i < t; ++i) out[i] = 0;
        for (int i = 0; i < t; ++i)
            for (int j = 0; i + j < t; ++j) out[i + j] += a[i] * b[j];
    };
    long p[t] = {1, 0, 0, 0, 0};
    for (int rep = 0; rep < 24; ++rep) {
        long tmp[t];
        mul5(p, eta, tmp);
        for (int i = 0; i < t; ++i) p[i] = tmp[i];
    }
    long e4sq[t], e4cu[t];
    mul5(e4, e4, e4sq);
    mul5(e4sq, e4, e4cu);
    long s[t];
    for (int n = 0; n < t; ++n) {
        long acc = e4cu[n];
        for (int k = 1; k <= n; ++k) acc -= p[k] * s[n - k];
        s[n] = acc;
    }
    auto lib = j_series(5);
    for (int n = 0; n < t; ++n) CHECK(lib[n] == s[n]);
    CHECK(lib[0] == 1);
    CHECK(lib[1] == 744);
    CHECK(lib[2] == 196884);
    CHECK(lib[3] == 21493760);
    CHECK(j_series(6)[4] == 864299970);
}

TEST_CASE("series coefficients obey the tail bound hypothesis") {
    auto s = j_series(302);
    for (int n = 1; n <= 300; ++n) {
        // |c(n)| = |S[n+1]| <= e^{4 pi sqrt n}
        double lhs = mpz_sizeinbase(s[n + 1].get_mpz_t(), 2) * std::log(2.0);
        CHECK(lhs < 12.566370614359172 * std::sqrt(static_cast<double>(n)) + 1.0);
    }
}

TEST_CASE("j_eval classical values") {
    const mpfr_prec_t prec = 300;
    BallComplex tau_i = BallComplex::from_si(0, 1, prec);
    BallComplex ji = j_eval(tau_i, prec);
    CHECK(ball_contains_int(ji, 1728));
    CHECK(ji.re.rad_d() < 1e-40);

    BallComplex rho(BallReal::from_mpq(mpq_class(1, 2), prec),
                    specpoint::ball::div(specpoint::ball::sqrt_ball(BallReal::from_si(3, prec)),
                                         BallReal::from_si(2, prec)));
    CHECK(ball_contains_int(j_eval(rho, prec), 0));

    BallComplex tau_s2(BallReal::from_si(0, prec),
                       specpoint::ball::sqrt_ball(BallReal::from_si(2, prec)));
    CHECK(ball_contains_int(j_eval(tau_s2, prec), 8000));

    BallComplex low = BallComplex::from_si(0, 1, prec);
    low.im = BallReal::from_mpq(mpq_class(1, 2), prec);
    CHECK_THROWS(j_eval(low, prec));
}

TEST_CASE("higher precision shrinks the enclosure") {
    BallComplex tau = BallComplex::from_si(0, 1, 128);
    double r1 = j_eval(tau, 128).re.rad_d();
    BallComplex tau2 = BallComplex::from_si(0, 1, 512);
    double r2 = j_eval(tau2, 512).re.rad_d();
    CHECK(r2 < r1 * 1e-30);
}

TEST_CASE("j estimate of the ratio j / e^{-2 pi i tau}") {
    const mpfr_prec_t prec = 160;
    std::mt19937_64 rng(2025);
    for (int t = 0; t < 100; ++t) {
        double re = -0.5 + static_cast<double>(rng() % 1000) / 1000.0;
        double im = 1.41 + static_cast<double>(rng() % 1000) / 1000.0 * 8.59;
        BallComplex tau(BallReal::from_double(re, prec), BallReal::from_double(im, prec));
        BallComplex j = j_eval(tau, prec);
        BallReal two_pi = specpoint::ball::mul_si(BallReal::pi(prec), 2);
        BallComplex q = specpoint::ball::cis_exp(specpoint::ball::mul(tau, two_pi));
        BallReal ratio = specpoint::ball::abs_ball(specpoint::ball::mul(j, q));
        CHECK(ratio.lb_d() >= 0.5);
        CHECK(ratio.ub_d() <= 2.0);
    }
}

TEST_CASE("fundamental domain reduction") {
    const mpfr_prec_t prec = 192;
    BallComplex tau(BallReal::from_mpq(mpq_class(1, 4), prec), BallReal::from_si(2, prec));
    BallComplex shifted = tau;
    shifted.re = specpoint::ball::add(shifted.re, BallReal::from_si(7, prec));
    BallComplex red = reduce_fundamental(shifted);
    CHECK(std::abs(red.re.mid_d() - 0.25) < 1e-30);
    CHECK(std::abs(red.im.mid_d() - 2.0) < 1e-30);
    // tau -> -1/tau case
    BallComplex inside(BallReal::from_mpq(mpq_class(1, 10), prec),
                       BallReal::from_mpq(mpq_class(1, 2), prec));
    BallComplex red2 = reduce_fundamental(inside);
    CHECK(red2.im.lb_d() > 0.86);
    BallReal n2 = specpoint::ball::norm_ball(red2);
    CHECK(n2.ub_d() >= 0.999);
}

TEST_CASE("class polynomials, h = 1 battery") {
    struct Known { long d; long j; };
    const Known known[] = {{-3, 0},     {-4, 1728},    {-7, -3375},        {-8, 8000},
                           {-11, -32768}, {-19, -884736}, {-43, -884736000},
                           {-67, -147197952000L}, {-163, -262537412640768000L}};
    for (const auto& k : known) {
        ClassPoly cp = class_poly(Disc{k.d});
        REQUIRE(cp.h == 1);
        CHECK(cp.coeffs[1] == 1);
        CHECK(cp.coeffs[0] == -mpz_class(k.j));
        CHECK(cp.cert_margin < 0.25);
        // Independent check against j_eval at doubled precision.
        auto forms = reduced_forms(Disc{k.d});
        BallComplex jv = j_eval(form_tau(forms[0], 700), 700);
        CHECK(ball_contains_int(jv, k.j));
    }
}

TEST_CASE("class polynomial for -15 and -12") {
    ClassPoly cp = class_poly(Disc{-15});
    REQUIRE(cp.h == 2);
    CHECK(cp.coeffs[2] == 1);
    CHECK(cp.coeffs[1] == 191025);
    CHECK(cp.coeffs[0] == -121287375);
    CHECK(cp.cert_margin < 0.25);

    // -12 includes the imprimitive form (2,2,2) whose tau is the corner point.
    ClassPoly cp12 = class_poly(Disc{-12});
    REQUIRE(cp12.h == 2);
    CHECK(cp12.coeffs[0] == 0);
    CHECK(cp12.coeffs[1] == -54000);
    CHECK(cp12.coeffs[2] == 1);
}

TEST_CASE("class polynomial vanishes at every form's j value") {
    for (long d = -3; d >= -250; --d) {
        if (!Disc::valid(d)) continue;
        ClassPoly cp = class_poly_cached(Disc{d});
        auto forms = reduced_forms(Disc{d});
        mpfr_prec_t prec = 256;
        for (const auto& f : forms) {
            BallComplex jv = j_eval(form_tau(f, prec), prec);
            BallComplex acc(prec);
            for (int k = cp.h; k >= 0; --k) {
                acc = specpoint::ball::mul(acc, jv);
                acc.re = specpoint::ball::add(acc.re,
                                              BallReal::from_mpz(cp.coeffs[k], prec));
            }
            CHECK(acc.contains_zero());
        }
    }
}

TEST_CASE("recognize_cm on exact singular moduli") {
    auto r1 = recognize_cm(BallComplex::from_si(1728, 0, 192), 1e4);
    REQUIRE(r1.hit.has_value());
    CHECK(r1.hit->disc.value == -4);
    CHECK(r1.hit->form == QuadForm{1, 0, 1});

    auto r2 = recognize_cm(BallComplex::from_si(287496, 0, 192), 1e4);
    REQUIRE(r2.hit.has_value());
    CHECK(r2.hit->disc.value == -16);
    CHECK(r2.hit->form == QuadForm{1, 0, 4});

    auto r3 = recognize_cm(BallComplex::from_si(8000, 0, 192), 1e4);
    REQUIRE(r3.hit.has_value());
    CHECK(r3.hit->disc.value == -8);
}

TEST_CASE("recognize_cm certifies absence for alpha = 5") {
    const double cap = 500;
    auto r = recognize_cm(BallComplex::from_si(5, 0, 192), cap);
    CHECK_FALSE(r.hit.has_value());
    CHECK(r.absence_certified);
    // Exhaustive oracle: no H_D with |D| <= cap vanishes at 5.
    for (long d = -3; d >= -static_cast<long>(cap); --d) {
        if (!Disc::valid(d)) continue;
        ClassPoly cp = class_poly_cached(Disc{d});
        mpz_class acc = 0;
        for (int k = cp.h; k >= 0; --k) acc = acc * 5 + cp.coeffs[k];
        CHECK(acc != 0);
    }
}

TEST_CASE("recognize_cm round-trips random primitive reduced forms") {
    std::mt19937_64 rng(777);
    int done = 0;
    while (done < 25) {
        long d = -3 - static_cast<long>(rng() % 9997);
        if (!Disc::valid(d)) continue;
        auto forms = reduced_forms(Disc{d});
        const QuadForm& f = forms[rng() % forms.size()];
        if (std::gcd(std::gcd(f.a, std::abs(f.b)), f.c) != 1) continue;  // imprimitive: End ring differs
        BallComplex jv = j_eval(form_tau(f, 320), 320);
        auto r = recognize_cm(jv, 1e4);
        REQUIRE(r.hit.has_value());
        CHECK(r.hit->disc.value == d);
        CHECK(r.hit->form == f);
        ++done;
    }
}

TEST_CASE("recognized discriminant matches -4 Im(tau)^2 for principal taus") {
    // Open-question consistency check: for tau0 = sqrt(d)/2 (d = -4m), the
    // order Z + Z tau0 has disc b^2 - 4ac of the principal form (1, 0, m),
    // which equals -4 Im(tau0)^2.
    for (long m : {1, 2, 3, 5, 6, 7}) {
        QuadForm f{1, 0, m};
        CHECK(f.disc() == -4 * m);
        BallComplex tau = form_tau(f, 128);
        double im = tau.im.mid_d();
        CHECK(std::abs(-4.0 * im * im - static_cast<double>(f.disc())) < 1e-9);
    }
}
