#include "specpoint/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>

namespace specpoint::solver {

using ball::BallComplex;
using ball::BallReal;
using poly::BivarPoly;
using poly::Rational;
using poly::UniPoly;

namespace {

// Theorem caps beyond this need an explicit override (the certified scan in
// recognition would be too long to be a sensible default).
constexpr double kFeasibleCap = 17179869184.0;  // 2^34
// Hard ceiling: the recognition scan length must stay below 2^24.
constexpr double kHardCap = 8.0e14;
constexpr double kResidualTol = 1e-20;
constexpr int kLadderRounds = 6;

template <typename F>
void parallel_for(std::size_t count, int threads, F&& fn) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    threads = static_cast<int>(std::min<std::size_t>(threads, count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    auto worker = [&] {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

ball::BallComplex root_of_unity(std::uint64_t n, std::uint64_t k, mpfr_prec_t prec) {
    mpq_class q(2 * static_cast<unsigned long>(k % n == 0 ? n : k % n),
                static_cast<unsigned long>(n));
    q.canonicalize();
    BallReal theta = ball::mul(BallReal::pi(prec), BallReal::from_mpq(q, prec));
    return BallComplex(ball::cos_ball(theta), ball::sin_ball(theta));
}

// ---------------------------------------------------------------------------
// Certified root clusters

namespace {

// Durand-Kerner sweep on double-precision midpoints of the scaled monic poly.
// Initial moduli come from the Newton polygon so that roots spread across
// many orders of magnitude are seeded near their own scale.
std::vector<std::complex<double>> dk_double(const std::vector<std::complex<double>>& q) {
    int n = static_cast<int>(q.size()) - 1;
    // Upper convex hull of (i, log2 |q_i|).
    std::vector<double> logc(n + 1);
    for (int i = 0; i <= n; ++i) {
        double m = std::abs(q[i]);
        logc[i] = m > 0 ? std::log2(m) : -4096.0;
    }
    std::vector<int> hull;
    for (int i = 0; i <= n; ++i) {
        if (logc[i] <= -4096.0 && i != 0 && i != n) continue;
        while (hull.size() >= 2) {
            int a = hull[hull.size() - 2], b = hull[hull.size() - 1];
            // Keep the hull concave from above.
            if ((logc[b] - logc[a]) * (i - b) <= (logc[i] - logc[b]) * (b - a))
                hull.pop_back();
            else
                break;
        }
        hull.push_back(i);
    }
    std::vector<std::complex<double>> z(n);
    int idx = 0;
    for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
        int i1 = hull[e], i2 = hull[e + 1];
        double slope = (logc[i1] - logc[i2]) / (i2 - i1);
        double radius = std::exp2(std::min(500.0, std::max(-500.0, slope)));
        for (int t = 0; t < i2 - i1 && idx < n; ++t, ++idx) {
            double ang = 6.283185307179586 * (static_cast<double>(idx) / n) + 0.42;
            z[idx] = std::polar(radius * (1.0 + 0.05 * t), ang);
        }
    }
    for (; idx < n; ++idx) z[idx] = std::polar(1.0, 0.9 * idx);

    auto eval = [&](std::complex<double> x) {
        std::complex<double> acc = q[n];
        for (int i = n - 1; i >= 0; --i) acc = acc * x + q[i];
        return acc;
    };
    for (int it = 0; it < 200; ++it) {
        double worst = 0;
        for (int i = 0; i < n; ++i) {
            std::complex<double> denom = 1.0;
            for (int j = 0; j < n; ++j)
                if (j != i) denom *= (z[i] - z[j]);
            if (denom == std::complex<double>(0, 0)) {
                z[i] += std::complex<double>(1e-7, 2e-7);
                worst = 1;
                continue;
            }
            std::complex<double> w = eval(z[i]) / denom;
            z[i] -= w;
            worst = std::max(worst, std::abs(w) / std::max(1e-300, std::abs(z[i])));
        }
        if (worst < 1e-13) break;
    }
    return z;
}

BallComplex ball_from_double_scaled(std::complex<double> v, long scale_exp, mpfr_prec_t prec) {
    BallComplex out(prec);
    mpfr_set_d(out.re.mid_mut(), v.real(), MPFR_RNDN);
    mpfr_set_d(out.im.mid_mut(), v.imag(), MPFR_RNDN);
    mpfr_mul_2si(out.re.mid_mut(), out.re.mid(), scale_exp, MPFR_RNDN);
    mpfr_mul_2si(out.im.mid_mut(), out.im.mid(), scale_exp, MPFR_RNDN);
    return out;
}

BallComplex strip(const BallComplex& z) {
    BallComplex out(z.prec());
    mpfr_set(out.re.mid_mut(), z.re.mid(), MPFR_RNDN);
    mpfr_set(out.im.mid_mut(), z.im.mid(), MPFR_RNDN);
    return out;
}

BallComplex eval_ball_poly(const std::vector<BallComplex>& coeffs, const BallComplex& z,
                           mpfr_prec_t prec) {
    BallComplex acc(prec);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        acc = ball::add(ball::mul(acc, z), *it);
    }
    return acc;
}

}  // namespace

std::optional<std::vector<RootCluster>> certified_roots(const std::vector<BallComplex>& coeffs,
                                                        mpfr_prec_t prec) {
    int n = static_cast<int>(coeffs.size()) - 1;
    if (n < 0) return std::nullopt;
    if (n == 0) return std::vector<RootCluster>{};
    if (ball::norm_ball(coeffs[n]).contains_zero()) return std::nullopt;

    // Monic normalization.
    BallComplex inv_lc = ball::inv(coeffs[n]);
    std::vector<BallComplex> monic(n + 1, BallComplex(prec));
    for (int i = 0; i < n; ++i) monic[i] = ball::mul(coeffs[i], inv_lc);
    monic[n] = BallComplex::from_si(1, 0, prec);

    // Power-of-two root scaling keeps the double midpoints in range.
    long s_exp = 0;
    for (int i = 0; i < n; ++i) {
        bool re_reg = mpfr_regular_p(monic[i].re.mid());
        bool im_reg = mpfr_regular_p(monic[i].im.mid());
        if (!re_reg && !im_reg) continue;
        long e = std::max(re_reg ? mpfr_get_exp(monic[i].re.mid()) : -99999,
                          im_reg ? mpfr_get_exp(monic[i].im.mid()) : -99999);
        long need = (e + (n - i) - 1) / (n - i);
        s_exp = std::max(s_exp, need);
    }

    std::vector<std::complex<double>> q(n + 1);
    bool double_ok = true;
    for (int i = 0; i <= n; ++i) {
        mpfr_t t;
        mpfr_init2(t, 64);
        mpfr_mul_2si(t, monic[i].re.mid(), (i - n) * s_exp, MPFR_RNDN);
        double re = mpfr_get_d(t, MPFR_RNDN);
        mpfr_mul_2si(t, monic[i].im.mid(), (i - n) * s_exp, MPFR_RNDN);
        double im = mpfr_get_d(t, MPFR_RNDN);
        mpfr_clear(t);
        if (!std::isfinite(re) || !std::isfinite(im)) double_ok = false;
        q[i] = {re, im};
    }
    if (!double_ok) return std::nullopt;

    std::vector<std::complex<double>> zs = dk_double(q);

    // Lift to working precision and Newton-polish the midpoints.
    std::vector<BallComplex> centers;
    centers.reserve(n);
    std::vector<BallComplex> dcoeffs(n, BallComplex(prec));
    for (int i = 1; i <= n; ++i) dcoeffs[i - 1] = ball::mul(monic[i], BallReal::from_si(i, prec));
    for (int i = 0; i < n; ++i) {
        BallComplex z = ball_from_double_scaled(zs[i], s_exp, prec);
        for (int it = 0; it < 2; ++it) {
            BallComplex pv = eval_ball_poly(monic, strip(z), prec);
            BallComplex dv = eval_ball_poly(dcoeffs, strip(z), prec);
            if (ball::norm_ball(dv).contains_zero()) break;
            z = strip(ball::sub(z, ball::div(pv, dv)));
        }
        centers.push_back(strip(z));
    }
    // Exact duplicates break the Weierstrass denominators.
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < i; ++j) {
            if (mpfr_equal_p(centers[i].re.mid(), centers[j].re.mid()) &&
                mpfr_equal_p(centers[i].im.mid(), centers[j].im.mid())) {
                mpfr_t eps;
                mpfr_init2(eps, prec);
                mpfr_set_ui_2exp(eps, 1, mpfr_regular_p(centers[i].re.mid())
                                             ? mpfr_get_exp(centers[i].re.mid()) - prec / 2
                                             : -static_cast<long>(prec) / 2,
                                 MPFR_RNDN);
                mpfr_add(centers[i].re.mid_mut(), centers[i].re.mid(), eps, MPFR_RNDN);
                mpfr_clear(eps);
            }
        }
    }

    // Weierstrass disks: all roots of every member polynomial lie in the
    // union of D(z_i, n |p(z_i)/prod_{j!=i}(z_i - z_j)|); a connected
    // component formed by m disks contains exactly m roots.
    std::vector<double> sc_re(n), sc_im(n), sc_rad(n);
    std::vector<BallReal> radii;
    radii.reserve(n);
    for (int i = 0; i < n; ++i) {
        BallComplex denom = BallComplex::from_si(1, 0, prec);
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            denom = ball::mul(denom, ball::sub(centers[i], centers[j]));
        }
        if (ball::norm_ball(denom).contains_zero()) return std::nullopt;
        BallComplex w = ball::div(eval_ball_poly(monic, centers[i], prec), denom);
        BallReal wab = ball::mul_si(ball::abs_ball(w), n);
        radii.push_back(wab);
        mpfr_t t;
        mpfr_init2(t, 64);
        mpfr_mul_2si(t, centers[i].re.mid(), -s_exp, MPFR_RNDN);
        sc_re[i] = mpfr_get_d(t, MPFR_RNDN);
        mpfr_mul_2si(t, centers[i].im.mid(), -s_exp, MPFR_RNDN);
        sc_im[i] = mpfr_get_d(t, MPFR_RNDN);
        mpfr_add(t, wab.mid(), wab.rad(), MPFR_RNDU);
        mpfr_mul_2si(t, t, -s_exp, MPFR_RNDU);
        sc_rad[i] = mpfr_get_d(t, MPFR_RNDU);
        mpfr_clear(t);
        if (!std::isfinite(sc_rad[i]) || !std::isfinite(sc_re[i]) || !std::isfinite(sc_im[i]))
            return std::nullopt;
    }

    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int v) {
        return parent[v] == v ? v : parent[v] = find(parent[v]);
    };
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double dist = std::hypot(sc_re[i] - sc_re[j], sc_im[i] - sc_im[j]);
            if (dist <= (sc_rad[i] + sc_rad[j]) * 1.0000001 + 1e-300) parent[find(i)] = find(j);
        }
    }
    std::map<int, std::vector<int>> groups;
    for (int i = 0; i < n; ++i) groups[find(i)].push_back(i);

    std::vector<RootCluster> out;
    for (const auto& [root, members] : groups) {
        mpfr_t lo_re, hi_re, lo_im, hi_im, t, rad;
        mpfr_init2(lo_re, prec);
        mpfr_init2(hi_re, prec);
        mpfr_init2(lo_im, prec);
        mpfr_init2(hi_im, prec);
        mpfr_init2(t, prec);
        mpfr_init2(rad, 64);
        bool first = true;
        for (int i : members) {
            mpfr_add(rad, radii[i].mid(), radii[i].rad(), MPFR_RNDU);
            mpfr_sub(t, centers[i].re.mid(), rad, MPFR_RNDD);
            if (first || mpfr_cmp(t, lo_re) < 0) mpfr_set(lo_re, t, MPFR_RNDD);
            mpfr_add(t, centers[i].re.mid(), rad, MPFR_RNDU);
            if (first || mpfr_cmp(t, hi_re) > 0) mpfr_set(hi_re, t, MPFR_RNDU);
            mpfr_sub(t, centers[i].im.mid(), rad, MPFR_RNDD);
            if (first || mpfr_cmp(t, lo_im) < 0) mpfr_set(lo_im, t, MPFR_RNDD);
            mpfr_add(t, centers[i].im.mid(), rad, MPFR_RNDU);
            if (first || mpfr_cmp(t, hi_im) > 0) mpfr_set(hi_im, t, MPFR_RNDU);
            first = false;
        }
        RootCluster c;
        c.enclosure = BallComplex(BallReal::from_endpoints(lo_re, hi_re, prec),
                                  BallReal::from_endpoints(lo_im, hi_im, prec));
        c.multiplicity = static_cast<int>(members.size());
        out.push_back(std::move(c));
        mpfr_clear(lo_re);
        mpfr_clear(hi_re);
        mpfr_clear(lo_im);
        mpfr_clear(hi_im);
        mpfr_clear(t);
        mpfr_clear(rad);
    }
    std::sort(out.begin(), out.end(), [](const RootCluster& a, const RootCluster& b) {
        double ar = a.enclosure.re.mid_d(), br = b.enclosure.re.mid_d();
        if (ar != br) return ar < br;
        return a.enclosure.im.mid_d() < b.enclosure.im.mid_d();
    });
    return out;
}

// ---------------------------------------------------------------------------
// Validation and reduction

void validate_curve(const BivarPoly& f) {
    if (f.is_zero()) throw CurveRejected("curve rejected: zero polynomial", UniPoly(), '-');
    if (f.is_constant()) throw CurveRejected("curve rejected: constant polynomial", UniPoly(), '-');
    UniPoly cx = poly::content_in_x(f);
    if (cx.degree() >= 1)
        throw CurveRejected(
            "curve rejected: vertical line divisor (content in X: " + cx.str("X") + ")", cx, 'X');
    UniPoly cy = poly::content_in_y(f);
    if (cy.degree() >= 1)
        throw CurveRejected(
            "curve rejected: horizontal line divisor (content in Y: " + cy.str("Y") + ")", cy, 'Y');
}

ReducedCurve reduce_to_q(const CurveInput& in) {
    BivarPoly f;
    int d = 1;
    if (in.field) {
        poly::validate_number_field(*in.field);
        if (!in.f_k || in.f_k->is_zero())
            throw CurveRejected("curve rejected: zero polynomial", UniPoly(), '-');
        f = poly::norm_form(*in.f_k, *in.field);
        d = in.field->degree();
    } else {
        f = in.f_q;
    }
    validate_curve(f);
    poly::HeightInfo hi = poly::height_q(f);
    ReducedCurve rc;
    rc.f = hi.primitive;
    rc.d = d;
    rc.delta1 = rc.f.deg_x();
    rc.delta2 = rc.f.deg_y();
    rc.big_h = hi.big_h;
    rc.h_f = hi.log_h;
    rc.bound = bounds::compute_bounds({1, rc.delta1, rc.delta2, rc.h_f});
    rc.cap_overridden = in.delta_cap_override.has_value();
    rc.effective_cap = in.delta_cap_override.value_or(rc.bound.delta_cap);
    return rc;
}

// ---------------------------------------------------------------------------
// Exact certificates

namespace {

struct SplitFound {
    UniPoly divisor;
};

UniPoly nf_reduce(const UniPoly& a, const UniPoly& h) { return UniPoly::divrem(a, h).second; }

UniPoly nf_mul(const UniPoly& a, const UniPoly& b, const UniPoly& h) { return nf_reduce(a * b, h); }

// Inverse modulo h by the extended Euclidean algorithm; throws SplitFound
// when the argument is a zero divisor.
UniPoly nf_inv(const UniPoly& a, const UniPoly& h) {
    UniPoly r0 = h, r1 = nf_reduce(a, h);
    UniPoly t0, t1 = UniPoly::constant(Rational(1));
    if (r1.is_zero()) throw SplitFound{h.monic()};
    while (!r1.is_zero()) {
        auto [q, r2] = UniPoly::divrem(r0, r1);
        UniPoly t2 = t0 - q * t1;
        r0 = std::move(r1);
        r1 = std::move(r2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.degree() >= 1) throw SplitFound{r0.monic()};
    return nf_reduce(t0.scaled(Rational(1) / r0[0]), h);
}

// Is gcd(A, B) nonconstant over (Q[X]/(h))[Y]?
bool nf_gcd_nonconstant(std::vector<UniPoly> a, std::vector<UniPoly> b, const UniPoly& h) {
    auto normalize = [&](std::vector<UniPoly>& v) {
        for (auto& c : v) c = nf_reduce(c, h);
        while (!v.empty() && v.back().is_zero()) v.pop_back();
    };
    normalize(a);
    normalize(b);
    for (int guard = 0; guard < 200000; ++guard) {
        if (b.empty()) return static_cast<int>(a.size()) - 1 >= 1;
        if (b.size() == 1) {
            nf_inv(b[0], h);  // splits when a zero divisor
            return false;     // unit constant: the gcd is 1
        }
        UniPoly linv = nf_inv(b.back(), h);
        while (a.size() >= b.size()) {
            UniPoly top = nf_mul(a.back(), linv, h);
            std::size_t k = a.size() - b.size();
            for (std::size_t i = 0; i + 1 < b.size(); ++i) {
                a[k + i] = nf_reduce(a[k + i] - top * b[i], h);
            }
            a.pop_back();
            while (!a.empty() && a.back().is_zero()) a.pop_back();
        }
        std::swap(a, b);
    }
    throw std::logic_error("nf_gcd_nonconstant: did not terminate");
}

std::optional<UniPoly> nf_certificate_rec(const std::vector<UniPoly>& phi_coeffs,
                                          const std::vector<UniPoly>& f_by_y, const UniPoly& h) {
    try {
        bool nc = nf_gcd_nonconstant(phi_coeffs, f_by_y, h);
        if (nc) return h.monic();
        return std::nullopt;
    } catch (const SplitFound& s) {
        UniPoly h1 = s.divisor;
        UniPoly h2 = UniPoly::divexact(h, h1).monic();
        auto g1 = h1.degree() >= 1 ? nf_certificate_rec(phi_coeffs, f_by_y, h1) : std::nullopt;
        auto g2 = h2.degree() >= 1 ? nf_certificate_rec(phi_coeffs, f_by_y, h2) : std::nullopt;
        if (!g1 && !g2) return std::nullopt;
        UniPoly prod = UniPoly::constant(Rational(1));
        if (g1) prod = prod * *g1;
        if (g2) prod = prod * *g2;
        return prod.monic();
    }
}

}  // namespace

std::optional<UniPoly> exact_factor_certificate(const BivarPoly& f, std::uint64_t n,
                                                const UniPoly& class_polynomial, int route) {
    UniPoly phi = poly::cyclotomic(n);
    std::size_t h_bits = 0;
    for (const auto& [key, c] : f.terms()) {
        h_bits = std::max(h_bits, mpz_sizeinbase(c.get_num().get_mpz_t(), 2));
        h_bits = std::max(h_bits, mpz_sizeinbase(c.get_den().get_mpz_t(), 2));
    }
    // The literal resultant route is kept for small instances; subresultant
    // remainder sequences on tall coefficients are better served by the gcd
    // over Q[X]/(H).
    bool use_resultant = route == 1 ||
                         (route == 0 && static_cast<long>(f.deg_x()) * phi.degree() <= 600 &&
                          h_bits <= 64);
    if (use_resultant) {
        UniPoly rn = poly::resultant_y(f, phi);
        if (rn.is_zero())
            throw std::logic_error(
                "exact_factor_certificate: resultant vanished on a validated curve");
        UniPoly g = poly::gcd_uni(rn, class_polynomial);
        if (g.degree() >= 1) return g.monic();
        return std::nullopt;
    }
    UniPoly h_monic = class_polynomial.monic();
    std::vector<UniPoly> f_by_y = f.coeffs_by_y();
    // When every coefficient reduces to a rational modulo H, F(alpha, Y) is
    // the same rational polynomial at every root alpha and the certificate is
    // an ordinary gcd with Phi_n.
    bool all_rational = true;
    std::vector<poly::Rational> flat;
    for (auto& c : f_by_y) {
        UniPoly red = UniPoly::divrem(c, h_monic).second;
        if (red.degree() >= 1) {
            all_rational = false;
            break;
        }
        flat.push_back(red[0]);
    }
    if (all_rational) {
        UniPoly g_rat(std::move(flat));
        if (g_rat.is_zero())
            throw std::logic_error("exact_factor_certificate: curve vanishes on a class polynomial");
        UniPoly g = poly::gcd_uni(phi, g_rat);
        if (g.degree() >= 1) return h_monic;
        return std::nullopt;
    }
    std::vector<UniPoly> phi_coeffs;
    for (const auto& c : phi.coeffs()) phi_coeffs.push_back(UniPoly::constant(c));
    return nf_certificate_rec(phi_coeffs, f_by_y, h_monic);
}

// ---------------------------------------------------------------------------
// Pair certification

namespace {

std::vector<BallComplex> exact_coeff_balls(const UniPoly& p, mpfr_prec_t prec) {
    std::vector<BallComplex> out;
    out.reserve(p.degree() + 1);
    for (int i = 0; i <= p.degree(); ++i)
        out.push_back(BallComplex(BallReal::from_mpq(p[i], prec), BallReal::from_si(0, prec)));
    return out;
}

mpfr_prec_t curve_start_prec(const mpz_class& big_h) {
    std::size_t bits = mpz_sizeinbase(big_h.get_mpz_t(), 2);
    mpfr_prec_t p = std::max<mpfr_prec_t>(192, static_cast<mpfr_prec_t>(bits) + 64);
    return std::min(p, cm::precision_cap());
}

struct PairsOutcome {
    std::vector<PairReport> pairs;
    std::vector<UndecidedRoot> undecided;
};

PairsOutcome pairs_for_report(const BivarPoly& f, const UniPoly& factor, std::uint64_t n,
                              mpfr_prec_t prec0) {
    std::vector<std::uint64_t> ks;
    for (std::uint64_t k = 1; k <= n; ++k)
        if (std::gcd(k, n) == 1) ks.push_back(k);
    PairsOutcome out;
    mpfr_prec_t prec = prec0;
    for (int round = 0;; ++round) {
        out = PairsOutcome{};
        bool unresolved = false;
        auto clusters = certified_roots(exact_coeff_balls(factor, prec), prec);
        if (clusters) {
            for (const auto& cl : *clusters) {
                for (std::uint64_t k : ks) {
                    BallComplex lam = root_of_unity(n, k, prec);
                    BallComplex resid = f.eval_ball(cl.enclosure, lam, prec);
                    double rad = resid.rad_ub_d();
                    if (!resid.contains_zero()) continue;  // excluded
                    if (rad < kResidualTol) {
                        out.pairs.push_back({cl.enclosure, k, rad});
                    } else {
                        unresolved = true;
                        out.undecided.push_back({n, cl.enclosure,
                                                 "pair with lambda exponent " + std::to_string(k) +
                                                     " undecided at the precision cap"});
                    }
                }
            }
        } else {
            unresolved = true;
        }
        if (!unresolved) {
            out.undecided.clear();
            return out;
        }
        if (prec >= cm::precision_cap() || round >= 12) return out;
        prec = std::min<mpfr_prec_t>(prec * 2, cm::precision_cap());
    }
}

}  // namespace

std::vector<CertifiedPair> certify_pair(const BivarPoly& f, const UniPoly& alpha_factor,
                                        std::uint64_t n, std::uint64_t k) {
    if (alpha_factor.degree() < 1)
        throw std::invalid_argument("certify_pair: alpha_factor must be nonconstant");
    if (std::gcd(k, n) != 1) throw std::invalid_argument("certify_pair: k must be coprime to n");
    mpz_class big_h(1);
    for (const auto& [key, c] : f.terms()) {
        mpz_class a = abs(c.get_num());
        if (a > big_h) big_h = a;
    }
    mpfr_prec_t prec = curve_start_prec(big_h);
    std::vector<CertifiedPair> out;
    for (int round = 0;; ++round) {
        out.clear();
        bool unresolved = false;
        auto clusters = certified_roots(exact_coeff_balls(alpha_factor, prec), prec);
        if (clusters) {
            for (const auto& cl : *clusters) {
                BallComplex lam = root_of_unity(n, k, prec);
                BallComplex resid = f.eval_ball(cl.enclosure, lam, prec);
                CertifiedPair cp;
                cp.alpha = cl.enclosure;
                cp.residual_radius = resid.rad_ub_d();
                if (!resid.contains_zero()) {
                    cp.verdict = PairVerdict::Excluded;
                } else if (cp.residual_radius < kResidualTol) {
                    cp.verdict = PairVerdict::Vanishes;
                } else {
                    cp.verdict = PairVerdict::Undecided;
                    unresolved = true;
                }
                out.push_back(std::move(cp));
            }
        } else {
            unresolved = true;
        }
        if (!unresolved) return out;
        if (prec >= cm::precision_cap() || round >= 12) return out;
        prec = std::min<mpfr_prec_t>(prec * 2, cm::precision_cap());
    }
}

// ---------------------------------------------------------------------------
// The decision procedure

namespace {

struct CandidateOutcome {
    std::vector<SpecialPointReport> reports;
    std::vector<UndecidedRoot> undecided;
};

struct SolverCtx {
    const ReducedCurve* rc = nullptr;
    std::vector<UniPoly> by_x;  // F' by powers of X (coefficients in Q[Y])
    double cap = 0;
    mpfr_prec_t prec0 = 192;
};

CandidateOutcome process_candidate(const SolverCtx& ctx, std::uint64_t n) {
    CandidateOutcome out;
    UniPoly phi = poly::cyclotomic(n);

    // Exact X-degree of F'(X, mu) at the primitive roots: coefficients
    // divisible by Phi_n vanish there, uniformly over primitive mu.
    int eff = -1;
    for (int i = static_cast<int>(ctx.by_x.size()) - 1; i >= 0; --i) {
        if (ctx.by_x[i].is_zero()) continue;
        if (!UniPoly::divrem(ctx.by_x[i], phi).second.is_zero()) {
            eff = i;
            break;
        }
    }
    if (eff < 0)
        throw std::logic_error(
            "special_points: the resultant would vanish identically on a validated curve");
    if (eff == 0) return out;  // F'(X, mu) is a nonzero constant: no roots

    // Conjugation representatives among the primitive exponents.
    std::vector<std::uint64_t> ks;
    for (std::uint64_t k = 1; k <= n; ++k) {
        if (std::gcd(k, n) != 1) continue;
        if (n >= 3 && 2 * k > n) continue;
        ks.push_back(k);
    }

    std::set<std::int64_t> discs;
    std::map<std::int64_t, std::optional<UniPoly>> confirm_cache;
    auto confirm = [&](std::int64_t d) -> const std::optional<UniPoly>& {
        auto it = confirm_cache.find(d);
        if (it != confirm_cache.end()) return it->second;
        const cm::ClassPoly& hp = cm::class_poly_cached(cm::Disc{d});
        auto cert = exact_factor_certificate(ctx.rc->f, n, hp.as_unipoly());
        return confirm_cache.emplace(d, std::move(cert)).first->second;
    };

    for (std::uint64_t k : ks) {
        mpfr_prec_t prec = ctx.prec0;
        bool done = false;
        std::vector<RootCluster> last_clusters;
        std::vector<int> last_unresolved;
        for (int round = 0; round < kLadderRounds && !done; ++round) {
            BallComplex mu = root_of_unity(n, k, prec);
            std::vector<BallComplex> coeffs;
            coeffs.reserve(eff + 1);
            for (int i = 0; i <= eff; ++i) coeffs.push_back(ctx.by_x[i].eval_ball(mu, prec));
            auto clusters = certified_roots(coeffs, prec);
            if (clusters) {
                last_clusters = *clusters;
                last_unresolved.clear();
                std::set<std::int64_t> found;
                for (int ci = 0; ci < static_cast<int>(clusters->size()); ++ci) {
                    auto rec = cm::recognize_cm((*clusters)[ci].enclosure, ctx.cap);
                    if (rec.exhaustive) {
                        // The candidate list is complete for this enclosure, so
                        // exact confirmation settles every root: a disproved
                        // candidate cannot be the value of this root.
                        for (const auto& cand : rec.candidates) {
                            if (confirm(cand.disc.value)) found.insert(cand.disc.value);
                        }
                    } else if (rec.hit) {
                        const auto& cert = confirm(rec.hit->disc.value);
                        if (cert) {
                            found.insert(rec.hit->disc.value);
                        } else {
                            last_unresolved.push_back(ci);  // near miss: refine
                        }
                    } else if (!rec.absence_certified) {
                        last_unresolved.push_back(ci);
                    }
                }
                if (last_unresolved.empty()) {
                    discs.insert(found.begin(), found.end());
                    done = true;
                }
            } else {
                last_unresolved.assign(1, -1);
            }
            if (!done) {
                if (prec >= cm::precision_cap()) break;
                prec = std::min<mpfr_prec_t>(prec * 2, cm::precision_cap());
            }
        }
        if (!done) {
            if (last_clusters.empty()) {
                out.undecided.push_back(
                    {n, BallComplex(ctx.prec0), "root isolation failed at the precision cap"});
            } else {
                for (int ci : last_unresolved) {
                    if (ci < 0 || ci >= static_cast<int>(last_clusters.size())) {
                        out.undecided.push_back({n, BallComplex(ctx.prec0),
                                                 "root isolation failed at the precision cap"});
                        continue;
                    }
                    out.undecided.push_back({n, last_clusters[ci].enclosure,
                                             "neither recognized nor excluded at the precision cap"});
                }
            }
        }
    }

    for (std::int64_t d : discs) {
        const auto& cert = confirm_cache[d];
        if (!cert) continue;
        SpecialPointReport rep;
        rep.n = n;
        rep.disc = cm::Disc{d};
        rep.factor = *cert;
        PairsOutcome po = pairs_for_report(ctx.rc->f, rep.factor, n, curve_start_prec(ctx.rc->big_h));
        rep.pairs = std::move(po.pairs);
        rep.exact = true;
        for (auto& u : po.undecided) out.undecided.push_back(std::move(u));
        out.reports.push_back(std::move(rep));
    }
    std::sort(out.reports.begin(), out.reports.end(),
              [](const SpecialPointReport& a, const SpecialPointReport& b) {
                  if (a.n != b.n) return a.n < b.n;
                  return -a.disc.value < -b.disc.value;
              });
    return out;
}

}  // namespace

SolveResult special_points(const CurveInput& in) {
    SolveResult result;
    result.curve = reduce_to_q(in);
    const ReducedCurve& rc = result.curve;

    if (!in.delta_cap_override && rc.bound.delta_cap > kFeasibleCap) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.6g", rc.bound.delta_cap);
        throw CapTooLarge(
            std::string("the certified discriminant cap for this curve is ") + buf +
                "; pass an explicit --delta-cap override (completeness is then claimed only "
                "below the override)",
            rc.bound.delta_cap);
    }
    if (rc.effective_cap > kHardCap) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.6g", rc.effective_cap);
        throw CapTooLarge(std::string("delta cap ") + buf +
                              " is beyond the certified recognition limit of 8e14",
                          rc.effective_cap);
    }

    SolverCtx ctx;
    ctx.rc = &rc;
    ctx.by_x = rc.f.coeffs_by_x();
    ctx.cap = rc.effective_cap;
    // Detection starts modest; the certified pieces escalate on their own,
    // and pair certification ladders from the coefficient-size estimate.
    ctx.prec0 = std::min<mpfr_prec_t>(192, cm::precision_cap());

    std::vector<std::uint64_t> candidates = rc.bound.n_candidates;
    if (in.n_max_override) {
        candidates.erase(std::remove_if(candidates.begin(), candidates.end(),
                                        [&](std::uint64_t n) { return n > *in.n_max_override; }),
                         candidates.end());
    }

    std::vector<CandidateOutcome> slots(candidates.size());
    parallel_for(candidates.size(), in.threads,
                 [&](std::size_t i) { slots[i] = process_candidate(ctx, candidates[i]); });

    for (auto& s : slots) {
        for (auto& r : s.reports) result.reports.push_back(std::move(r));
        for (auto& u : s.undecided) result.undecided.push_back(std::move(u));
    }
    return result;
}

}  // namespace specpoint::solver
