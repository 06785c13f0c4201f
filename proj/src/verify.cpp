#include "specpoint/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "specpoint/arith.hpp"
#include "specpoint/ball.hpp"
#include "specpoint/bounds.hpp"
#include "specpoint/cm.hpp"
#include "specpoint/poly.hpp"
#include "specpoint/solver.hpp"

namespace specpoint::verify {

using ball::BallComplex;
using ball::BallReal;

namespace {

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

BallReal ball_from_mpq(const mpq_class& q, mpfr_prec_t prec) { return BallReal::from_mpq(q, prec); }

}  // namespace

VerifyReport check_lemma_unit_squares(std::uint64_t max_n) {
    if (max_n > 1000000) throw std::invalid_argument("unit-squares: max_n <= 10^6");
    Timer timer;
    VerifyReport rep;
    rep.check_name = "unit-squares";
    rep.range = "N <= " + std::to_string(max_n);
    auto spf = arith::spf_sieve(static_cast<std::uint32_t>(std::max<std::uint64_t>(max_n, 2)));
    for (std::uint64_t n = 1; n <= max_n; ++n) {
        int omega = 0;
        std::uint64_t m = n;
        while (m > 1) {
            std::uint32_t p = spf[m];
            ++omega;
            while (m % p == 0) m /= p;
        }
        int expo = omega - arith::c1(n);
        std::uint64_t expected = 1ull << expo;
        std::uint64_t got = arith::unit_square_class_order(n);
        if (got != expected) {
            rep.counterexamples.push_back("N=" + std::to_string(n) + ": enumeration gives " +
                                          std::to_string(got) + ", formula gives " +
                                          std::to_string(expected));
            if (rep.counterexamples.size() > 16) break;
        }
    }
    rep.elapsed_seconds = timer.seconds();
    return rep;
}

VerifyReport check_prop_n_bound(std::uint64_t max_n) {
    if (max_n > 10000000) throw std::invalid_argument("n-bound: max_n <= 10^7");
    Timer timer;
    VerifyReport rep;
    rep.check_name = "n-bound";
    rep.range = "n <= " + std::to_string(max_n);
    if (!(bounds::u_func_lower(8.0) > 2345.0)) {
        rep.counterexamples.push_back("u(8) > 2345 failed in directed rounding");
    }
    auto spf = arith::spf_sieve(static_cast<std::uint32_t>(std::max<std::uint64_t>(max_n, 2)));
    for (std::uint64_t n = 1; n <= max_n; ++n) {
        if (n <= 2345) continue;  // u(a_n) >= u(8) > 2345 >= n
        std::uint64_t m = n, ph = 1;
        int omega = 0;
        while (m > 1) {
            std::uint32_t p = spf[m];
            ++omega;
            ph *= p - 1;
            m /= p;
            while (m % p == 0) {
                ph *= p;
                m /= p;
            }
        }
        // phi/2^omega is a dyadic rational, exact in double for n <= 10^7.
        double a = std::ldexp(static_cast<double>(ph), -omega);
        if (a < 8.0) a = 8.0;
        if (!(static_cast<double>(n) < bounds::u_func_lower(a))) {
            rep.counterexamples.push_back("n=" + std::to_string(n));
            if (rep.counterexamples.size() > 16) break;
        }
    }
    rep.elapsed_seconds = timer.seconds();
    return rep;
}

VerifyReport check_primorial_cases() {
    Timer timer;
    VerifyReport rep;
    rep.check_name = "primorial";
    rep.range = "s = 6..12";
    const mpfr_prec_t prec = 256;
    const long primes[12] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    mpq_class m_s(1), a_s(1);
    BallReal e_ball = ball::exp_ball(BallReal::from_si(1, prec));
    double min_margin = 1e300;
    for (int s = 1; s <= 12; ++s) {
        long p = primes[s - 1];
        m_s *= p;
        a_s *= mpq_class(p, p - 1);
        if (s < 6) continue;
        mpq_class two_s_as = a_s * mpq_class(mpz_class(1) << s);
        mpq_class ratio = m_s / two_s_as;
        ratio.canonicalize();
        BallReal c_s = ball::log_ball(ball_from_mpq(ratio, prec));
        BallReal lhs = ball::mul(ball_from_mpq(mpq_class(1, 2), prec),
                                 ball::log_ball(ball_from_mpq(two_s_as, prec)));
        BallReal rhs = ball::div(c_s, ball::log_ball(c_s));
        BallReal gap = ball::sub(rhs, lhs);
        if (!gap.definitely_positive()) {
            rep.counterexamples.push_back("s=" + std::to_string(s) +
                                          ": (1/2)log(2^s A_s) < c_s/log c_s not certified");
        } else {
            min_margin = std::min(min_margin, gap.lb_d());
        }
        BallReal half_e_pow = ball::pow_ui(ball::div(e_ball, BallReal::from_si(2, prec)),
                                           static_cast<unsigned long>(s));
        BallReal gap2 = ball::sub(half_e_pow, ball_from_mpq(a_s, prec));
        if (!gap2.definitely_positive()) {
            rep.counterexamples.push_back("s=" + std::to_string(s) + ": A_s < (e/2)^s not certified");
        }
    }
    // prod_{i<=6} (P_i - 1)/2 = 90 > e^e
    mpq_class prod(1);
    for (int i = 0; i < 6; ++i) prod *= mpq_class(primes[i] - 1, 2);
    if (prod != 90) rep.counterexamples.push_back("product of (P_i - 1)/2 for i <= 6 is not 90");
    BallReal e_to_e = ball::exp_ball(e_ball);
    if (!(e_to_e.ub_d() < 90.0)) rep.counterexamples.push_back("90 > e^e not certified");
    rep.notes = "min certified gap " + std::to_string(min_margin);
    rep.elapsed_seconds = timer.seconds();
    return rep;
}

VerifyReport check_j_estimate(int samples) {
    if (samples < 1) throw std::invalid_argument("j-bound: samples >= 1");
    Timer timer;
    VerifyReport rep;
    rep.check_name = "j-bound";
    rep.range = std::to_string(samples) + " samples, Im tau in (log(6912)/2pi, 10]";
    const mpfr_prec_t prec = 192;
    std::mt19937_64 rng(6912);
    // log(6912)/(2 pi) < 1.40718: sample from 1.40719 upward.
    const double im_lo = 1.40719;
    for (int t = 0; t < samples; ++t) {
        double re = -0.5 + static_cast<double>(rng() % 100001) / 100000.0;
        double im = im_lo + (10.0 - im_lo) * static_cast<double>(rng() % 100001) / 100000.0;
        BallComplex tau(BallReal::from_double(re, prec), BallReal::from_double(im, prec));
        BallComplex j = cm::j_eval(tau, prec);
        BallReal two_pi = ball::mul_si(BallReal::pi(prec), 2);
        BallComplex q = ball::cis_exp(ball::mul(tau, two_pi));
        BallReal ratio = ball::abs_ball(ball::mul(j, q));
        if (!(ratio.lb_d() >= 0.5) || !(ratio.ub_d() <= 2.0)) {
            rep.counterexamples.push_back("tau = " + std::to_string(re) + " + " +
                                          std::to_string(im) + "i: ratio not within [1/2, 2]");
        }
    }
    rep.elapsed_seconds = timer.seconds();
    return rep;
}

VerifyReport check_liouville_bound(int trials) {
    if (trials < 1) throw std::invalid_argument("liouville: trials >= 1");
    Timer timer;
    VerifyReport rep;
    rep.check_name = "liouville";
    rep.range = std::to_string(trials) + " trials, deg <= 6, H <= 50, N <= 20";
    std::mt19937_64 rng(50301);
    const mpfr_prec_t prec = 256;
    double min_margin = 1e300;
    int done = 0;
    while (done < trials) {
        int d2 = 1 + static_cast<int>(rng() % 6);
        long big_h = 1 + static_cast<long>(rng() % 50);
        int deg = static_cast<int>(rng() % (d2 + 1));
        std::vector<poly::Rational> cs(deg + 1);
        for (auto& c : cs) c = poly::Rational(static_cast<long>(rng() % (2 * big_h + 1)) - big_h);
        poly::UniPoly g(std::move(cs));
        if (g.is_zero()) continue;
        std::uint64_t n = 1 + rng() % 20;
        std::uint64_t k = 1 + rng() % n;
        if (std::gcd(k, n) != 1) continue;
        poly::UniPoly gc = poly::gcd_uni(g, poly::cyclotomic(n));
        if (gc.degree() >= 1) continue;  // g(lambda) = 0: outside the claim
        ++done;
        BallComplex lam = solver::root_of_unity(n, k, prec);
        BallReal gval = ball::abs_ball(g.eval_ball(lam, prec));
        // (d2+1)^(1-N) and H^(1-N) are exact rationals; (N+1)^(-d2/2) is a
        // certified inverse square root.
        mpq_class pure(1);
        for (std::uint64_t i = 1; i < n; ++i) {
            pure /= (d2 + 1);
            pure /= big_h;
        }
        BallReal half_pow = ball::inv(ball::sqrt_ball(
            ball::pow_ui(BallReal::from_si(static_cast<long>(n) + 1, prec),
                         static_cast<unsigned long>(d2))));
        BallReal bound = ball::mul(ball_from_mpq(pure, prec), half_pow);
        BallReal gap = ball::sub(gval, bound);
        if (!gap.definitely_positive()) {
            rep.counterexamples.push_back("deg=" + std::to_string(deg) + " H=" +
                                          std::to_string(big_h) + " N=" + std::to_string(n) +
                                          " k=" + std::to_string(k));
        } else {
            double margin = std::log(gval.lb_d()) - std::log(bound.ub_d());
            min_margin = std::min(min_margin, margin);
        }
    }
    rep.notes = "min log margin " + std::to_string(min_margin);
    rep.elapsed_seconds = timer.seconds();
    return rep;
}

std::vector<long long> e_field_generators(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("e_field_generators: n >= 1");
    auto fac = arith::factorize(n);
    int k2 = 0;
    std::vector<long long> out;
    for (const auto& [p, e] : fac) {
        if (p == 2) {
            k2 = static_cast<int>(e);
            continue;
        }
        long long star = (p % 4 == 1) ? static_cast<long long>(p) : -static_cast<long long>(p);
        out.push_back(star);
    }
    if (k2 == 2) out.push_back(-1);
    if (k2 >= 3) {
        out.push_back(-1);
        out.push_back(2);
    }
    std::sort(out.begin(), out.end());
    int expo = static_cast<int>(arith::omega(fac)) - arith::c1(n);
    if (out.size() != static_cast<std::size_t>(expo))
        throw std::logic_error("e_field_generators: cardinality mismatch with omega - c1");
    return out;
}

VerifyReport run_check(const std::string& name, std::uint64_t max_n, int trials) {
    if (name == "unit-squares") return check_lemma_unit_squares(max_n);
    if (name == "n-bound") return check_prop_n_bound(max_n);
    if (name == "primorial") return check_primorial_cases();
    if (name == "j-bound") return check_j_estimate(trials);
    if (name == "liouville") return check_liouville_bound(trials);
    throw std::invalid_argument("unknown check: " + name +
                                " (expected unit-squares, n-bound, primorial, j-bound, liouville)");
}

}  // namespace specpoint::verify
