#include "specpoint/cm.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>

namespace specpoint::cm {

using ball::BallComplex;
using ball::BallReal;

// ---------------------------------------------------------------------------
// Discriminants and forms

Disc Disc::checked(std::int64_t v) {
    if (!valid(v))
        throw std::invalid_argument("Disc: need a negative integer congruent to 0 or 1 mod 4, got " +
                                    std::to_string(v));
    return Disc{v};
}

std::vector<QuadForm> reduced_forms(Disc disc) {
    Disc::checked(disc.value);
    std::int64_t absd = -disc.value;
    std::vector<QuadForm> out;
    for (std::int64_t a = 1; 3 * a * a <= absd; ++a) {
        for (std::int64_t b = -a + 1; b <= a; ++b) {
            std::int64_t num = b * b - disc.value;
            if (num % (4 * a) != 0) continue;
            std::int64_t c = num / (4 * a);
            if (c < a) continue;
            if (b < 0 && (-b == a || a == c)) continue;  // tie rules
            out.push_back({a, b, c});
        }
    }
    // a ascending then b ascending is already the loop order.
    return out;
}

int class_number(Disc disc) { return static_cast<int>(reduced_forms(disc).size()); }

QuadForm reduce_form(QuadForm f) {
    if (f.a <= 0 || f.disc() >= 0) throw std::invalid_argument("reduce_form: not positive definite");
    for (int guard = 0; guard < 4096; ++guard) {
        // Normalize b into (-a, a].
        std::int64_t twoa = 2 * f.a;
        std::int64_t r = ((f.b % twoa) + twoa) % twoa;  // [0, 2a)
        if (r > f.a) r -= twoa;
        if (r != f.b) {
            std::int64_t d = f.disc();
            f.b = r;
            f.c = (f.b * f.b - d) / (4 * f.a);
        }
        if (f.a > f.c) {
            f = {f.c, -f.b, f.a};
            continue;
        }
        break;
    }
    if (f.b < 0 && (-f.b == f.a || f.a == f.c)) f.b = -f.b;
    return f;
}

BallComplex form_tau(const QuadForm& f, mpfr_prec_t prec) {
    std::int64_t d = f.disc();
    BallReal root = ball::sqrt_ball(BallReal::from_si(-d, prec));
    BallReal denom = BallReal::from_si(2 * f.a, prec);
    BallReal re = ball::div(BallReal::from_si(-f.b, prec), denom);
    BallReal im = ball::div(root, denom);
    return BallComplex(std::move(re), std::move(im));
}

// ---------------------------------------------------------------------------
// q-expansion of j

namespace {

std::vector<mpz_class> mul_trunc(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b,
                                 std::size_t t) {
    std::vector<mpz_class> r(std::min(t, a.size() + b.size() - 1));
    for (std::size_t i = 0; i < a.size() && i < t; ++i) {
        if (a[i] == 0) continue;
        std::size_t jmax = std::min(b.size(), t - i);
        for (std::size_t j = 0; j < jmax; ++j) {
            if (b[j] == 0) continue;
            r[i + j] += a[i] * b[j];
        }
    }
    return r;
}

std::vector<mpz_class> compute_j_series(std::size_t t) {
    // sigma_3 by divisor sieve.
    std::vector<mpz_class> e4(t, 0);
    e4[0] = 1;
    for (std::size_t d = 1; d < t; ++d) {
        mpz_class d3 = mpz_class(static_cast<unsigned long>(d));
        d3 = d3 * d3 * d3 * 240;
        for (std::size_t m = d; m < t; m += d) e4[m] += d3;
    }
    // Euler product via the pentagonal number theorem.
    std::vector<mpz_class> eta(t, 0);
    eta[0] = 1;
    for (long k = 1;; ++k) {
        long g1 = k * (3 * k - 1) / 2;
        long g2 = k * (3 * k + 1) / 2;
        if (g1 >= static_cast<long>(t) && g2 >= static_cast<long>(t)) break;
        int sign = (k % 2 == 0) ? 1 : -1;
        if (g1 < static_cast<long>(t)) eta[g1] += sign;
        if (g2 < static_cast<long>(t)) eta[g2] += sign;
    }
    // eta^24 by repeated squaring: 24 = 16 + 8.
    auto e2 = mul_trunc(eta, eta, t);
    auto e4p = mul_trunc(e2, e2, t);
    auto e8 = mul_trunc(e4p, e4p, t);
    auto e16 = mul_trunc(e8, e8, t);
    auto p24 = mul_trunc(e16, e8, t);
    // E4^3
    auto e4sq = mul_trunc(e4, e4, t);
    auto e4cu = mul_trunc(e4sq, e4, t);
    // S = E4^3 / p24 (power series division; p24[0] = 1).
    std::vector<mpz_class> s(t);
    for (std::size_t n = 0; n < t; ++n) {
        mpz_class acc = e4cu[n];
        for (std::size_t k = 1; k <= n; ++k) {
            if (p24[k] != 0) acc -= p24[k] * s[n - k];
        }
        s[n] = acc;
    }
    return s;
}

std::mutex g_series_mutex;
std::shared_ptr<const std::vector<mpz_class>> g_series;

std::shared_ptr<const std::vector<mpz_class>> series_snapshot(std::size_t need) {
    std::lock_guard<std::mutex> lock(g_series_mutex);
    if (!g_series || g_series->size() < need) {
        std::size_t t = 64;
        while (t < need) t *= 2;
        g_series = std::make_shared<const std::vector<mpz_class>>(compute_j_series(t));
    }
    return g_series;
}

}  // namespace

std::vector<mpz_class> j_series(std::size_t num_terms) {
    if (num_terms == 0) throw std::invalid_argument("j_series: need at least one term");
    auto snap = series_snapshot(num_terms);
    return std::vector<mpz_class>(snap->begin(), snap->begin() + num_terms);
}

// ---------------------------------------------------------------------------
// Certified evaluation

namespace {

constexpr double kImFloor = 0.845;
constexpr double kFourPi = 12.566370614359172;

// Rigorous upper bound for sum_{m > T} e^{K sqrt(m)} q0^m, using the tangent
// bound sqrt(m) <= sqrt(T) + (m-T)/(2 sqrt(T)). Infinite mid on failure.
BallReal tail_bound(const BallReal& q0_ub, double big_k, long t_terms, mpfr_prec_t prec) {
    mpfr_t st, rho, r, acc, tmp, qrad;
    mpfr_init2(st, 64);
    mpfr_init2(rho, 64);
    mpfr_init2(r, 64);
    mpfr_init2(acc, 64);
    mpfr_init2(tmp, 64);
    mpfr_init2(qrad, 64);
    mpfr_set_si(st, t_terms, MPFR_RNDU);
    mpfr_sqrt(st, st, MPFR_RNDD);  // denominator below: smaller sqrt => bigger rho
    mpfr_set_d(rho, big_k, MPFR_RNDU);
    mpfr_div(rho, rho, st, MPFR_RNDU);
    mpfr_div_2ui(rho, rho, 1, MPFR_RNDU);
    mpfr_exp(rho, rho, MPFR_RNDU);
    mpfr_mul(r, rho, q0_ub.mid(), MPFR_RNDU);
    mpfr_mul(qrad, rho, q0_ub.rad(), MPFR_RNDU);
    mpfr_add(r, r, qrad, MPFR_RNDU);
    BallReal out(prec);
    if (mpfr_cmp_d(r, 0.75) >= 0) {
        mpfr_set_inf(out.mid_mut(), 1);
    } else {
        // e^{K sqrt(T)} * q0^T * r / (1 - r), everything rounded up.
        mpfr_set_si(st, t_terms, MPFR_RNDU);
        mpfr_sqrt(st, st, MPFR_RNDU);
        mpfr_set_d(acc, big_k, MPFR_RNDU);
        mpfr_mul(acc, acc, st, MPFR_RNDU);
        mpfr_exp(acc, acc, MPFR_RNDU);
        mpfr_add(tmp, q0_ub.mid(), q0_ub.rad(), MPFR_RNDU);
        mpfr_pow_si(tmp, tmp, t_terms, MPFR_RNDU);
        mpfr_mul(acc, acc, tmp, MPFR_RNDU);
        mpfr_mul(acc, acc, r, MPFR_RNDU);
        mpfr_ui_sub(tmp, 1, r, MPFR_RNDD);
        mpfr_div(acc, acc, tmp, MPFR_RNDU);
        mpfr_set(out.mid_mut(), acc, MPFR_RNDU);
        if (mpfr_regular_p(out.mid())) out.add_error_2exp(mpfr_get_exp(out.mid()) - 60);
    }
    mpfr_clear(st);
    mpfr_clear(rho);
    mpfr_clear(r);
    mpfr_clear(acc);
    mpfr_clear(tmp);
    mpfr_clear(qrad);
    return out;
}

JDerivPair j_eval_core(const BallComplex& tau, mpfr_prec_t prec, bool want_deriv) {
    if (prec < 64) throw std::invalid_argument("j_eval: precision_bits >= 64 required");
    if (prec > precision_cap()) prec = precision_cap();
    double im_lb = tau.im.lb_d();
    if (!(im_lb >= kImFloor))
        throw std::invalid_argument(
            "j_eval: Im(tau) too small; reduce tau to the fundamental domain first");

    BallReal two_pi = ball::mul_si(BallReal::pi(prec), 2);
    BallComplex w = ball::mul(tau, two_pi);
    BallComplex q = ball::cis_exp(w);
    BallReal qabs = ball::abs_ball(q);
    double q0 = qabs.abs_ub_d();
    if (!(q0 < 0.006)) throw std::logic_error("j_eval: |q| unexpectedly large");

    // Truncation order from a double estimate; the tail itself is certified.
    double target_log2 = -(static_cast<double>(prec) + 6) + std::log2(1.0 / q0);
    long t = 12;
    double kk = want_deriv ? kFourPi + 1.0 : kFourPi;
    while (t < 2000000) {
        double lt = (kk * std::sqrt(static_cast<double>(t)) +
                     (static_cast<double>(t) + 1) * std::log(q0)) / std::log(2.0) + 4;
        if (lt < target_log2) break;
        t = t * 3 / 2 + 8;
    }
    auto coeff = series_snapshot(static_cast<std::size_t>(t) + 2);

    // j = 1/q + 744 + sum_{m=1..t} S[m+1] q^m  (+ certified tail)
    BallComplex acc(prec);
    for (long m = t; m >= 1; --m) {
        acc.re = ball::add(acc.re, BallReal::from_mpz((*coeff)[m + 1], prec));
        acc = ball::mul(acc, q);
    }
    BallComplex invq = ball::inv(q);
    BallComplex j = ball::add(acc, invq);
    j.re = ball::add(j.re, BallReal::from_si(744, prec));
    BallReal tb = tail_bound(qabs, kFourPi, t, prec);
    if (!tb.is_finite()) throw std::logic_error("j_eval: tail bound failed");
    j.re.add_error(tb.mid());
    j.re.add_error(tb.rad());
    j.im.add_error(tb.mid());
    j.im.add_error(tb.rad());

    JDerivPair out{std::move(j), BallComplex(prec)};
    if (want_deriv) {
        // dj/dtau = 2 pi i (-1/q + sum m S[m+1] q^m); the derivative tail uses
        // m e^{4 pi sqrt m} <= e^{(4 pi + 1) sqrt m}.
        BallComplex dacc(prec);
        for (long m = t; m >= 1; --m) {
            mpz_class mc = (*coeff)[m + 1] * m;
            dacc.re = ball::add(dacc.re, BallReal::from_mpz(mc, prec));
            dacc = ball::mul(dacc, q);
        }
        BallComplex inner = ball::sub(dacc, invq);
        BallReal dtb = tail_bound(qabs, kFourPi + 1.0, t, prec);
        if (!dtb.is_finite()) throw std::logic_error("j_eval: derivative tail bound failed");
        inner.re.add_error(dtb.mid());
        inner.re.add_error(dtb.rad());
        inner.im.add_error(dtb.mid());
        inner.im.add_error(dtb.rad());
        BallComplex two_pi_i(BallReal::from_si(0, prec), two_pi);
        out.dj_dtau = ball::mul(inner, two_pi_i);
    }
    return out;
}

}  // namespace

ball::BallComplex j_eval(const BallComplex& tau, mpfr_prec_t precision_bits) {
    return j_eval_core(tau, precision_bits, false).j;
}

JDerivPair j_eval_with_deriv(const BallComplex& tau, mpfr_prec_t precision_bits) {
    return j_eval_core(tau, precision_bits, true);
}

ball::BallComplex reduce_fundamental(BallComplex tau) {
    for (int iter = 0; iter < 256; ++iter) {
        if (!(tau.im.lb_d() > 0))
            throw std::invalid_argument("reduce_fundamental: tau must stay in the upper half-plane");
        double re_mid = tau.re.mid_d();
        if (std::abs(re_mid) > 0.5000001) {
            long n = std::lround(re_mid);
            tau.re = ball::sub(tau.re, BallReal::from_si(n, tau.prec()));
            continue;
        }
        BallReal nrm = ball::norm_ball(tau);
        if (nrm.ub_d() < 1.0) {
            tau = ball::neg(ball::inv(tau));
            continue;
        }
        return tau;
    }
    throw std::invalid_argument("reduce_fundamental: did not converge (tau too close to the real axis)");
}

// ---------------------------------------------------------------------------
// Class polynomials

poly::UniPoly ClassPoly::as_unipoly() const {
    std::vector<poly::Rational> v;
    v.reserve(coeffs.size());
    for (const auto& c : coeffs) v.emplace_back(c);
    return poly::UniPoly(std::move(v));
}

ClassPoly class_poly(Disc disc) {
    Disc::checked(disc.value);
    if (disc.value < -10000000000LL)
        throw std::invalid_argument("class_poly: |disc| <= 10^10 required");
    auto forms = reduced_forms(disc);
    int h = static_cast<int>(forms.size());
    double sum_inv_a = 0;
    for (const auto& f : forms) sum_inv_a += 1.0 / static_cast<double>(f.a);
    double est = 3.1415926535897932 * std::sqrt(static_cast<double>(-disc.value)) * sum_inv_a /
                 std::log(2.0);
    mpfr_prec_t prec0 = static_cast<mpfr_prec_t>(std::ceil(est)) + 32 * h + 64;

    double worst_margin = 0.0;
    for (int round = 0; round < 4; ++round) {
        mpfr_prec_t prec = prec0 << round;
        if (prec > precision_cap()) {
            if (round > 0) break;
            prec = precision_cap();
        }
        std::vector<BallComplex> cs;
        cs.push_back(BallComplex::from_si(1, 0, prec));
        for (const auto& f : forms) {
            BallComplex jv = j_eval(form_tau(f, prec), prec);
            std::vector<BallComplex> next(cs.size() + 1, BallComplex(prec));
            for (std::size_t k = 0; k < cs.size(); ++k) {
                next[k + 1] = ball::add(next[k + 1], cs[k]);
                next[k] = ball::sub(next[k], ball::mul(jv, cs[k]));
            }
            cs = std::move(next);
        }
        ClassPoly out;
        out.disc = disc;
        out.h = h;
        out.coeffs.resize(h + 1);
        bool ok = true;
        worst_margin = 0.0;
        for (int k = 0; k <= h && ok; ++k) {
            mpz_class n;
            mpfr_get_z(n.get_mpz_t(), cs[k].re.mid(), MPFR_RNDN);
            mpfr_t dist;
            mpfr_init2(dist, 64);
            mpfr_sub_z(dist, cs[k].re.mid(), n.get_mpz_t(), MPFR_RNDA);
            mpfr_abs(dist, dist, MPFR_RNDU);
            double margin = mpfr_get_d(dist, MPFR_RNDU) + cs[k].re.rad_d();
            mpfr_clear(dist);
            double im_mag = std::abs(cs[k].im.mid_d()) + cs[k].im.rad_d();
            worst_margin = std::max(worst_margin, std::max(margin, im_mag));
            if (!(margin < 0.5) || !(im_mag < 0.5) || !cs[k].im.contains_zero()) ok = false;
            out.coeffs[k] = n;
        }
        if (ok) {
            if (out.coeffs[h] != 1) throw std::logic_error("class_poly: product is not monic");
            out.cert_margin = worst_margin;
            return out;
        }
    }
    throw std::runtime_error("class_poly: certification failed for disc " +
                             std::to_string(disc.value) + " (worst margin " +
                             std::to_string(worst_margin) + ")");
}

namespace {
std::mutex g_cp_mutex;
std::map<std::int64_t, std::unique_ptr<ClassPoly>> g_cp_cache;
}  // namespace

const ClassPoly& class_poly_cached(Disc disc) {
    {
        std::lock_guard<std::mutex> lock(g_cp_mutex);
        auto it = g_cp_cache.find(disc.value);
        if (it != g_cp_cache.end()) return *it->second;
    }
    auto cp = std::make_unique<ClassPoly>(class_poly(disc));
    std::lock_guard<std::mutex> lock(g_cp_mutex);
    auto [it, inserted] = g_cp_cache.emplace(disc.value, std::move(cp));
    return *it->second;
}

// ---------------------------------------------------------------------------
// Recognition

namespace {

const std::vector<double>& j_series_double() {
    static const std::vector<double> v = [] {
        auto s = j_series(72);
        std::vector<double> d(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) d[i] = s[i].get_d();
        return d;
    }();
    return v;
}

std::complex<double> j_from_q_d(std::complex<double> q, std::complex<double>* q_dj_dq) {
    const auto& s = j_series_double();
    std::complex<double> acc = 0, dacc = 0;
    for (long m = static_cast<long>(s.size()) - 2; m >= 1; --m) {
        acc = (acc + s[m + 1]) * q;
        dacc = (dacc + static_cast<double>(m) * s[m + 1]) * q;
    }
    std::complex<double> invq = 1.0 / q;
    if (q_dj_dq) *q_dj_dq = dacc - invq;
    return invq + 744.0 + acc;
}

std::complex<double> j_from_tau_d(std::complex<double> tau, std::complex<double>* dj_dtau) {
    constexpr double two_pi = 6.283185307179586;
    std::complex<double> q = std::exp(std::complex<double>(0, two_pi) * tau);
    std::complex<double> qd;
    std::complex<double> j = j_from_q_d(q, dj_dtau ? &qd : nullptr);
    if (dj_dtau) *dj_dtau = std::complex<double>(0, two_pi) * qd;
    return j;
}

std::complex<double> reduce_tau_d(std::complex<double> tau) {
    for (int i = 0; i < 128; ++i) {
        tau -= std::round(tau.real());
        if (std::norm(tau) < 0.999999999) {
            tau = -1.0 / tau;
        } else {
            break;
        }
    }
    return tau;
}

std::optional<std::complex<double>> invert_j_double(std::complex<double> alpha) {
    if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) return std::nullopt;
    std::complex<double> tau;
    if (std::abs(alpha) > 1e5) {
        std::complex<double> q = 1.0 / alpha;
        for (int i = 0; i < 60; ++i) {
            std::complex<double> qd;
            std::complex<double> f = j_from_q_d(q, &qd) - alpha;
            std::complex<double> step = f * q / qd;
            q -= step;
            if (std::abs(step) < 1e-17 * std::abs(q)) break;
        }
        if (!(std::abs(q) > 0) || !(std::abs(q) < 0.006)) return std::nullopt;
        constexpr double two_pi = 6.283185307179586;
        tau = std::complex<double>(std::arg(q) / two_pi, -std::log(std::abs(q)) / two_pi);
    } else {
        double best = 1e300;
        for (double re = -0.46; re <= 0.501; re += 0.08) {
            for (double im = 0.866; im <= 2.1; im += 0.11) {
                if (re * re + im * im < 0.999) continue;
                std::complex<double> t(re, im);
                double v = std::abs(j_from_tau_d(t, nullptr) - alpha);
                if (v < best) { best = v; tau = t; }
            }
        }
        for (int i = 0; i < 80; ++i) {
            std::complex<double> dj;
            std::complex<double> f = j_from_tau_d(tau, &dj) - alpha;
            if (std::abs(dj) == 0) return std::nullopt;
            std::complex<double> step = f / dj;
            if (std::abs(step) > 0.5) step *= 0.5 / std::abs(step);
            tau -= step;
            if (tau.imag() < 0.2) return std::nullopt;
            tau = reduce_tau_d(tau);
            if (std::abs(step) < 1e-15) break;
        }
    }
    tau = reduce_tau_d(tau);
    if (!(tau.imag() > 0.85)) return std::nullopt;
    std::complex<double> jv = j_from_tau_d(tau, nullptr);
    double scale = std::max(1.0, std::abs(alpha));
    if (!(std::abs(jv - alpha) < 1e-7 * scale)) return std::nullopt;
    return tau;
}

BallComplex strip_radius(const BallComplex& z) {
    BallComplex out(z.prec());
    mpfr_set(out.re.mid_mut(), z.re.mid(), MPFR_RNDN);
    mpfr_set(out.im.mid_mut(), z.im.mid(), MPFR_RNDN);
    return out;
}

BallComplex inflate(const BallComplex& z, double r) {
    BallComplex out = z;
    mpfr_t e;
    mpfr_init2(e, 32);
    mpfr_set_d(e, r, MPFR_RNDU);
    out.re.add_error(e);
    out.im.add_error(e);
    mpfr_clear(e);
    return out;
}

bool contained_in_interior(const BallComplex& inner, const BallComplex& outer) {
    auto part = [](const BallReal& in, const BallReal& out) {
        mpfr_t d;
        mpfr_init2(d, 64);
        mpfr_sub(d, in.mid(), out.mid(), MPFR_RNDA);
        mpfr_abs(d, d, MPFR_RNDU);
        mpfr_add(d, d, in.rad(), MPFR_RNDU);
        bool ok = mpfr_cmp(d, out.rad()) < 0;
        mpfr_clear(d);
        return ok;
    };
    return part(inner.re, outer.re) && part(inner.im, outer.im);
}

// Midpoint j-inversion at mpfr precision, for |alpha| beyond double range.
std::optional<BallComplex> invert_j_mpfr(const BallComplex& alpha, mpfr_prec_t prec) {
    mpfr_t mag, re_a, im_a, arg, two_pi;
    mpfr_init2(mag, prec);
    mpfr_init2(re_a, prec);
    mpfr_init2(im_a, prec);
    mpfr_init2(arg, prec);
    mpfr_init2(two_pi, prec);
    mpfr_set(re_a, alpha.re.mid(), MPFR_RNDN);
    mpfr_set(im_a, alpha.im.mid(), MPFR_RNDN);
    mpfr_hypot(mag, re_a, im_a, MPFR_RNDN);
    mpfr_log(mag, mag, MPFR_RNDN);
    mpfr_atan2(arg, im_a, re_a, MPFR_RNDN);
    BallComplex tau(prec);
    mpfr_const_pi(two_pi, MPFR_RNDN);
    mpfr_mul_2ui(two_pi, two_pi, 1, MPFR_RNDN);
    mpfr_div(mag, mag, two_pi, MPFR_RNDN);  // Im tau ~ log|alpha| / 2pi
    mpfr_div(arg, arg, two_pi, MPFR_RNDN);  // q ~ 1/alpha: Re tau ~ -arg(alpha)/2pi
    mpfr_neg(arg, arg, MPFR_RNDN);
    mpfr_set(tau.im.mid_mut(), mag, MPFR_RNDN);
    mpfr_set(tau.re.mid_mut(), arg, MPFR_RNDN);
    mpfr_clear(mag);
    mpfr_clear(re_a);
    mpfr_clear(im_a);
    mpfr_clear(arg);
    mpfr_clear(two_pi);
    if (!(tau.im.mid_d() > 0.86)) return std::nullopt;
    for (int i = 0; i < 80; ++i) {
        JDerivPair jp = j_eval_with_deriv(tau, prec);
        if (ball::norm_ball(jp.dj_dtau).contains_zero()) return std::nullopt;
        BallComplex f = ball::sub(jp.j, strip_radius(alpha));
        BallComplex step = ball::div(f, jp.dj_dtau);
        tau = strip_radius(ball::sub(tau, step));
        if (!(tau.im.mid_d() > 0.86)) return std::nullopt;
        double s = std::max(std::abs(step.re.mid_d()), std::abs(step.im.mid_d()));
        if (s < 1e-35) break;
    }
    return tau;
}

// Interval Newton: returns a tau-ball that contains, for every value in the
// alpha enclosure, exactly one j-preimage.
std::optional<BallComplex> certify_tau(const BallComplex& tau_mid, const BallComplex& alpha,
                                       mpfr_prec_t prec) {
    double r0 = 1e-10;
    for (int attempt = 0; attempt < 5; ++attempt, r0 *= 1e3) {
        BallComplex cur = inflate(tau_mid, r0);
        if (!(cur.im.lb_d() >= kImFloor)) continue;
        bool certified = false;
        for (int it = 0; it < 3; ++it) {
            BallComplex c = strip_radius(cur);
            BallComplex j_mid = j_eval_core(c, prec, false).j;
            JDerivPair on_box = j_eval_with_deriv(cur, prec);
            if (ball::norm_ball(on_box.dj_dtau).contains_zero()) break;
            BallComplex n = ball::sub(c, ball::div(ball::sub(j_mid, alpha), on_box.dj_dtau));
            if (contained_in_interior(n, cur)) {
                certified = true;
                cur = n;
                // One contraction usually lands far below the scan tolerances.
                if (cur.re.rad_d() < 1e-13 && cur.im.rad_d() < 1e-13) break;
            } else {
                break;
            }
        }
        if (certified) return cur;
    }
    return std::nullopt;
}

struct TwoDouble {
    double hi = 0, lo = 0;
};

TwoDouble extract_two_double(mpfr_srcptr x) {
    TwoDouble r;
    r.hi = mpfr_get_d(x, MPFR_RNDN);
    mpfr_t t;
    mpfr_init2(t, 128);
    mpfr_set_d(t, r.hi, MPFR_RNDN);
    mpfr_sub(t, x, t, MPFR_RNDN);
    r.lo = mpfr_get_d(t, MPFR_RNDN);
    mpfr_clear(t);
    return r;
}

// ---------------------------------------------------------------------------
// Table recognition for small caps: all singular moduli with |disc| <= cap
// as certified enclosures, matched directly against alpha. Entries come from
// primitive reduced forms only, so the attributed disc is the endomorphism
// ring discriminant.

constexpr double kTableCapLimit = 4096.0;

struct TableEntry {
    double re_mid;
    BallComplex value;
    Disc disc{-3};
    QuadForm form;
};

struct ModuliTable {
    std::vector<TableEntry> entries;  // sorted by re_mid
    double max_radius = 0;
};

std::mutex g_table_mutex;
std::map<std::int64_t, std::shared_ptr<const ModuliTable>> g_tables;

std::shared_ptr<const ModuliTable> moduli_table(std::int64_t cap) {
    {
        std::lock_guard<std::mutex> lock(g_table_mutex);
        auto it = g_tables.find(cap);
        if (it != g_tables.end()) return it->second;
    }
    auto table = std::make_shared<ModuliTable>();
    const mpfr_prec_t prec = 128;
    for (std::int64_t d = -3; d >= -cap; --d) {
        if (!Disc::valid(d)) continue;
        for (const QuadForm& f : reduced_forms(Disc{d})) {
            if (std::gcd(std::gcd(f.a, std::llabs(f.b)), f.c) != 1) continue;
            TableEntry e;
            e.value = j_eval(form_tau(f, prec), prec);
            e.re_mid = e.value.re.mid_d();
            e.disc = Disc{d};
            e.form = f;
            table->entries.push_back(std::move(e));
            table->max_radius = std::max(table->max_radius, table->entries.back().value.rad_ub_d());
        }
    }
    std::sort(table->entries.begin(), table->entries.end(),
              [](const TableEntry& a, const TableEntry& b) { return a.re_mid < b.re_mid; });
    std::lock_guard<std::mutex> lock(g_table_mutex);
    auto [it, inserted] = g_tables.emplace(cap, std::move(table));
    return it->second;
}

bool balls_overlap(const BallReal& a, const BallReal& b) {
    mpfr_t d, s;
    mpfr_init2(d, 64);
    mpfr_init2(s, 64);
    mpfr_sub(d, a.mid(), b.mid(), MPFR_RNDA);
    mpfr_abs(d, d, MPFR_RNDU);
    mpfr_add(s, a.rad(), b.rad(), MPFR_RNDU);
    bool overlap = mpfr_cmp(d, s) <= 0;
    mpfr_clear(d);
    mpfr_clear(s);
    return overlap;
}

RecognizeResult recognize_by_table(const BallComplex& alpha, double delta_cap) {
    auto table = moduli_table(static_cast<std::int64_t>(delta_cap));
    double re = alpha.re.mid_d();
    double slack = alpha.re.rad_d() + table->max_radius + std::abs(re) * 1e-12 + 1e-9;
    RecognizeResult out;
    if (!std::isfinite(re) || !std::isfinite(slack)) {
        // The midpoint overflows doubles; compare against every entry directly.
        for (const auto& e : table->entries) {
            if (balls_overlap(alpha.re, e.value.re) && balls_overlap(alpha.im, e.value.im)) {
                out.candidates.push_back(CmCandidate{e.disc, e.form});
            }
        }
    } else {
        auto lo = std::lower_bound(table->entries.begin(), table->entries.end(), re - slack,
                                   [](const TableEntry& e, double v) { return e.re_mid < v; });
        for (auto it = lo; it != table->entries.end() && it->re_mid <= re + slack; ++it) {
            if (balls_overlap(alpha.re, it->value.re) && balls_overlap(alpha.im, it->value.im)) {
                out.candidates.push_back(CmCandidate{it->disc, it->form});
                if (out.candidates.size() > 64) break;  // hopeless enclosure; refine instead
            }
        }
    }
    out.exhaustive = out.candidates.size() <= 64;
    if (out.candidates.empty()) {
        out.absence_certified = true;  // disjoint from every singular modulus below the cap
    } else {
        out.hit = out.candidates.front();
    }
    return out;
}

}  // namespace

RecognizeResult recognize_cm(const BallComplex& alpha_in, double delta_cap) {
    if (!(delta_cap >= 3)) return {std::nullopt, true};
    if (!alpha_in.is_finite()) return {std::nullopt, false};
    // Small caps: match against the finite table of singular moduli.
    if (delta_cap <= kTableCapLimit) return recognize_by_table(alpha_in, delta_cap);
    // Recognition runs at a fixed modest precision: only the relative width
    // of alpha matters for locating tau, and the caller escalates by
    // re-deriving alpha when the scan stays inconclusive.
    const mpfr_prec_t prec = 128;
    BallComplex alpha = ball::round_prec(alpha_in, prec);

    // The two critical values of j are themselves CM points; candidates are
    // issued before attempting an inversion that would stall on j' = 0.
    if (alpha.im.contains_zero()) {
        mpfr_t d;
        mpfr_init2(d, 64);
        mpfr_sub_si(d, alpha.re.mid(), 1728, MPFR_RNDA);
        mpfr_abs(d, d, MPFR_RNDU);
        bool near_1728 = mpfr_cmp(d, alpha.re.rad()) <= 0;
        mpfr_clear(d);
        if (near_1728) return {CmCandidate{Disc{-4}, QuadForm{1, 0, 1}}, false};
        if (alpha.re.contains_zero()) return {CmCandidate{Disc{-3}, QuadForm{1, 1, 1}}, false};
    }

    std::optional<BallComplex> certified;
    try {
        std::optional<BallComplex> tau_mid;
        double am = alpha.re.mid_d(), bm = alpha.im.mid_d();
        if (std::isfinite(am) && std::isfinite(bm) && std::abs(am) < 1e280 && std::abs(bm) < 1e280) {
            auto td = invert_j_double({am, bm});
            if (td) {
                BallComplex t(prec);
                mpfr_set_d(t.re.mid_mut(), td->real(), MPFR_RNDN);
                mpfr_set_d(t.im.mid_mut(), td->imag(), MPFR_RNDN);
                tau_mid = t;
            }
        }
        if (!tau_mid) tau_mid = invert_j_mpfr(alpha, prec);
        if (!tau_mid) return {std::nullopt, false};
        // Both inversion paths end Newton-converged; the interval Newton
        // below does the remaining polishing rigorously.
        certified = certify_tau(*tau_mid, alpha, prec);
    } catch (const std::invalid_argument&) {
        return {std::nullopt, false};  // stepped out of the series domain; caller refines
    }
    if (!certified) return {std::nullopt, false};
    const BallComplex& t_ball = *certified;

    double im_lb = t_ball.im.lb_d();
    if (!(im_lb >= kImFloor)) return {std::nullopt, false};
    double re_rad = t_ball.re.rad_d();
    BallReal u_ball = ball::norm_ball(t_ball);
    double u_rad = u_ball.rad_d();
    // The prefilter below budgets 2.5e-11 of enclosure slack per unit a.
    if (re_rad > 1.2e-11 || u_rad > 2.5e-11) return {std::nullopt, false};

    double a_max_d = std::sqrt(delta_cap) / (2.0 * im_lb) + 1.0;
    if (a_max_d > static_cast<double>(1 << 24))
        throw std::runtime_error(
            "recognize_cm: delta cap too large for certified recognition (scan size " +
            std::to_string(static_cast<long long>(a_max_d)) + ")");
    std::int64_t a_max = static_cast<std::int64_t>(a_max_d) + 1;

    double x = -2.0 * t_ball.re.mid_d();  // candidate b is near a*x
    TwoDouble u = extract_two_double(u_ball.mid());
    const double tol_b = 1e-4, tol_c = 1e-4;
    std::int64_t cap_int = static_cast<std::int64_t>(delta_cap);

    for (std::int64_t a = 1; a <= a_max; ++a) {
        double bf = static_cast<double>(a) * x;
        double b_near = std::nearbyint(bf);
        if (std::abs(bf - b_near) > tol_b) continue;
        std::int64_t b = static_cast<std::int64_t>(b_near);
        if (std::llabs(b) > a + 1) continue;
        double ch = static_cast<double>(a) * u.hi;
        double cl = std::fma(static_cast<double>(a), u.hi, -ch);
        double c_near = std::nearbyint(ch);
        double resid = (ch - c_near) + cl + static_cast<double>(a) * u.lo;
        double extra = std::nearbyint(resid);
        if (std::abs(resid - extra) > tol_c) continue;
        std::int64_t c = static_cast<std::int64_t>(c_near) + static_cast<std::int64_t>(extra);
        __int128 d128 = static_cast<__int128>(b) * b - static_cast<__int128>(4) * a * c;
        if (d128 >= 0) continue;
        if (-d128 > static_cast<__int128>(cap_int)) continue;
        // Ball confirmation of the relation on the certified enclosure.
        BallComplex rel = ball::mul(t_ball, BallReal::from_si(a, prec));
        rel.re = ball::add(rel.re, BallReal::from_si(b, prec));
        rel = ball::mul(rel, t_ball);
        rel.re = ball::add(rel.re, BallReal::from_si(c, prec));
        if (!rel.contains_zero()) continue;
        std::int64_t g = std::gcd(std::gcd(a, std::llabs(b)), std::llabs(c));
        QuadForm form{a / g, b / g, c / g};
        form = reduce_form(form);
        return {CmCandidate{Disc::checked(form.disc()), form}, false};
    }
    return {std::nullopt, true};
}

mpfr_prec_t precision_cap() {
    static const mpfr_prec_t cap = [] {
        const char* env = std::getenv("SPECPOINT_PRECISION_CAP");
        long v = env ? std::atol(env) : 0;
        if (v < 256) v = env ? 256 : (1L << 20);
        return static_cast<mpfr_prec_t>(v);
    }();
    return cap;
}

}  // namespace specpoint::cm
