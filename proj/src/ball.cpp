#include "specpoint/ball.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace specpoint::ball {

BallReal::BallReal(mpfr_prec_t prec) : prec_(prec) {
    mpfr_init2(mid_, prec);
    mpfr_init2(rad_, kRadPrec);
    mpfr_set_zero(mid_, 1);
    mpfr_set_zero(rad_, 1);
}

BallReal::BallReal(const BallReal& o) : prec_(o.prec_) {
    mpfr_init2(mid_, o.prec_);
    mpfr_init2(rad_, kRadPrec);
    mpfr_set(mid_, o.mid_, MPFR_RNDN);
    mpfr_set(rad_, o.rad_, MPFR_RNDU);
}

BallReal::BallReal(BallReal&& o) noexcept : prec_(o.prec_) {
    mid_[0] = o.mid_[0];
    rad_[0] = o.rad_[0];
    // Leave the source valid for destruction.
    mpfr_init2(o.mid_, MPFR_PREC_MIN);
    mpfr_init2(o.rad_, kRadPrec);
}

BallReal& BallReal::operator=(const BallReal& o) {
    if (this == &o) return *this;
    if (prec_ != o.prec_) {
        mpfr_set_prec(mid_, o.prec_);
        prec_ = o.prec_;
    }
    mpfr_set(mid_, o.mid_, MPFR_RNDN);
    mpfr_set(rad_, o.rad_, MPFR_RNDU);
    return *this;
}

BallReal& BallReal::operator=(BallReal&& o) noexcept {
    mpfr_swap(mid_, o.mid_);
    mpfr_swap(rad_, o.rad_);
    std::swap(prec_, o.prec_);
    return *this;
}

BallReal::~BallReal() {
    mpfr_clear(mid_);
    mpfr_clear(rad_);
}

void BallReal::bump_rounding(int t) {
    if (t == 0) return;
    if (!mpfr_regular_p(mid_)) {
        mpfr_set_inf(rad_, 1);
        return;
    }
    add_error_2exp(mpfr_get_exp(mid_) - prec_);
}

void BallReal::add_error(mpfr_srcptr e) {
    mpfr_t t;
    mpfr_init2(t, kRadPrec);
    mpfr_abs(t, e, MPFR_RNDU);
    mpfr_add(rad_, rad_, t, MPFR_RNDU);
    mpfr_clear(t);
}

void BallReal::add_error_2exp(mpfr_exp_t e) {
    mpfr_t t;
    mpfr_init2(t, kRadPrec);
    mpfr_set_ui_2exp(t, 1, e, MPFR_RNDU);
    mpfr_add(rad_, rad_, t, MPFR_RNDU);
    mpfr_clear(t);
}

BallReal BallReal::from_si(long v, mpfr_prec_t prec) {
    BallReal r(prec);
    int t = mpfr_set_si(r.mid_, v, MPFR_RNDN);
    r.bump_rounding(t);
    return r;
}

BallReal BallReal::from_mpz(const mpz_class& v, mpfr_prec_t prec) {
    BallReal r(prec);
    int t = mpfr_set_z(r.mid_, v.get_mpz_t(), MPFR_RNDN);
    r.bump_rounding(t);
    return r;
}

BallReal BallReal::from_mpq(const mpq_class& v, mpfr_prec_t prec) {
    BallReal r(prec);
    int t = mpfr_set_q(r.mid_, v.get_mpq_t(), MPFR_RNDN);
    r.bump_rounding(t);
    return r;
}

BallReal BallReal::from_double(double v, mpfr_prec_t prec) {
    BallReal r(prec);
    mpfr_set_d(r.mid_, v, MPFR_RNDN);
    return r;
}

BallReal BallReal::from_endpoints(mpfr_srcptr lo, mpfr_srcptr hi, mpfr_prec_t prec) {
    BallReal r(prec);
    int t = mpfr_add(r.mid_, lo, hi, MPFR_RNDN);
    t |= mpfr_div_2ui(r.mid_, r.mid_, 1, MPFR_RNDN);
    mpfr_t d1, d2;
    mpfr_init2(d1, kRadPrec);
    mpfr_init2(d2, kRadPrec);
    mpfr_sub(d1, hi, r.mid_, MPFR_RNDU);
    mpfr_sub(d2, r.mid_, lo, MPFR_RNDU);
    mpfr_max(r.rad_, d1, d2, MPFR_RNDU);
    mpfr_clear(d1);
    mpfr_clear(d2);
    r.bump_rounding(t);
    return r;
}

BallReal BallReal::pi(mpfr_prec_t prec) {
    BallReal r(prec);
    int t = mpfr_const_pi(r.mid_, MPFR_RNDN);
    r.bump_rounding(t);
    return r;
}

bool BallReal::is_finite() const { return mpfr_number_p(mid_) && mpfr_number_p(rad_); }

bool BallReal::contains_zero() const {
    mpfr_t a;
    mpfr_init2(a, kRadPrec);
    mpfr_abs(a, mid_, MPFR_RNDD);
    bool r = mpfr_cmp(a, rad_) <= 0;
    mpfr_clear(a);
    return r;
}

bool BallReal::definitely_positive() const {
    if (mpfr_sgn(mid_) <= 0) return false;
    mpfr_t a;
    mpfr_init2(a, kRadPrec);
    mpfr_set(a, mid_, MPFR_RNDD);
    bool r = mpfr_cmp(a, rad_) > 0;
    mpfr_clear(a);
    return r;
}

bool BallReal::definitely_negative() const {
    BallReal n = neg(*this);
    return n.definitely_positive();
}

double BallReal::ub_d() const {
    mpfr_t t;
    mpfr_init2(t, 64);
    mpfr_add(t, mid_, rad_, MPFR_RNDU);
    double r = mpfr_get_d(t, MPFR_RNDU);
    mpfr_clear(t);
    return r;
}

double BallReal::lb_d() const {
    mpfr_t t;
    mpfr_init2(t, 64);
    mpfr_sub(t, mid_, rad_, MPFR_RNDD);
    double r = mpfr_get_d(t, MPFR_RNDD);
    mpfr_clear(t);
    return r;
}

double BallReal::abs_ub_d() const {
    mpfr_t t;
    mpfr_init2(t, 64);
    mpfr_abs(t, mid_, MPFR_RNDU);
    mpfr_add(t, t, rad_, MPFR_RNDU);
    double r = mpfr_get_d(t, MPFR_RNDU);
    mpfr_clear(t);
    return r;
}

double BallReal::abs_lb_d() const {
    mpfr_t t;
    mpfr_init2(t, 64);
    mpfr_abs(t, mid_, MPFR_RNDD);
    mpfr_sub(t, t, rad_, MPFR_RNDD);
    if (mpfr_sgn(t) < 0) mpfr_set_zero(t, 1);
    double r = mpfr_get_d(t, MPFR_RNDD);
    mpfr_clear(t);
    return r;
}

std::string BallReal::str(std::size_t digits) const {
    char* m = nullptr;
    // mpfr_asprintf allocates.
    mpfr_asprintf(&m, "%.*Rg +/- %.3Rg", static_cast<int>(digits), mid_, rad_);
    std::string s(m);
    mpfr_free_str(m);
    return s;
}

namespace {

// Upper bound of |x.mid| at radius precision.
void abs_mid_ub(mpfr_ptr out, const BallReal& x) { mpfr_abs(out, x.mid(), MPFR_RNDU); }

}  // namespace

BallReal neg(const BallReal& a) {
    BallReal r(a.prec());
    mpfr_neg(r.mid_, a.mid_, MPFR_RNDN);
    mpfr_set(r.rad_, a.rad_, MPFR_RNDU);
    return r;
}

BallReal add(const BallReal& a, const BallReal& b) {
    BallReal r(std::max(a.prec(), b.prec()));
    int t = mpfr_add(r.mid_, a.mid_, b.mid_, MPFR_RNDN);
    mpfr_add(r.rad_, a.rad_, b.rad_, MPFR_RNDU);
    r.bump_rounding(t);
    return r;
}

BallReal sub(const BallReal& a, const BallReal& b) {
    BallReal r(std::max(a.prec(), b.prec()));
    int t = mpfr_sub(r.mid_, a.mid_, b.mid_, MPFR_RNDN);
    mpfr_add(r.rad_, a.rad_, b.rad_, MPFR_RNDU);
    r.bump_rounding(t);
    return r;
}

BallReal mul(const BallReal& a, const BallReal& b) {
    BallReal r(std::max(a.prec(), b.prec()));
    int t = mpfr_mul(r.mid_, a.mid_, b.mid_, MPFR_RNDN);
    mpfr_t ma, mb, u;
    mpfr_init2(ma, BallReal::kRadPrec);
    mpfr_init2(mb, BallReal::kRadPrec);
    mpfr_init2(u, BallReal::kRadPrec);
    abs_mid_ub(ma, a);
    abs_mid_ub(mb, b);
    // |a||rb| + |b||ra| + ra rb
    mpfr_mul(u, ma, b.rad_, MPFR_RNDU);
    mpfr_add(r.rad_, r.rad_, u, MPFR_RNDU);
    mpfr_mul(u, mb, a.rad_, MPFR_RNDU);
    mpfr_add(r.rad_, r.rad_, u, MPFR_RNDU);
    mpfr_mul(u, a.rad_, b.rad_, MPFR_RNDU);
    mpfr_add(r.rad_, r.rad_, u, MPFR_RNDU);
    mpfr_clear(ma);
    mpfr_clear(mb);
    mpfr_clear(u);
    r.bump_rounding(t);
    return r;
}

BallReal mul_si(const BallReal& a, long s) {
    BallReal r(a.prec());
    int t = mpfr_mul_si(r.mid_, a.mid_, s, MPFR_RNDN);
    mpfr_t u;
    mpfr_init2(u, BallReal::kRadPrec);
    mpfr_set_si(u, s < 0 ? -s : s, MPFR_RNDU);
    mpfr_mul(r.rad_, a.rad_, u, MPFR_RNDU);
    mpfr_clear(u);
    r.bump_rounding(t);
    return r;
}

BallReal inv(const BallReal& a) {
    if (a.contains_zero() || !a.is_finite()) {
        BallReal bad(a.prec());
        mpfr_set_nan(bad.mid_mut());
        return bad;
    }
    mpfr_prec_t p = a.prec();
    mpfr_t tlo, thi, lo, hi;
    mpfr_init2(tlo, p);
    mpfr_init2(thi, p);
    mpfr_init2(lo, p);
    mpfr_init2(hi, p);
    mpfr_sub(tlo, a.mid(), a.rad(), MPFR_RNDD);
    mpfr_add(thi, a.mid(), a.rad(), MPFR_RNDU);
    // 1/x is decreasing on an interval of constant sign.
    mpfr_ui_div(lo, 1, thi, MPFR_RNDD);
    mpfr_ui_div(hi, 1, tlo, MPFR_RNDU);
    if (mpfr_cmp(lo, hi) > 0) mpfr_swap(lo, hi);
    BallReal r = BallReal::from_endpoints(lo, hi, p);
    mpfr_clear(tlo);
    mpfr_clear(thi);
    mpfr_clear(lo);
    mpfr_clear(hi);
    return r;
}

BallReal div(const BallReal& a, const BallReal& b) { return mul(a, inv(b)); }

BallReal sqrt_ball(const BallReal& a) {
    mpfr_prec_t p = a.prec();
    mpfr_t tlo, thi, lo, hi;
    mpfr_init2(tlo, p);
    mpfr_init2(thi, p);
    mpfr_init2(lo, p);
    mpfr_init2(hi, p);
    mpfr_sub(tlo, a.mid(), a.rad(), MPFR_RNDD);
    mpfr_add(thi, a.mid(), a.rad(), MPFR_RNDU);
    if (mpfr_sgn(tlo) < 0) mpfr_set_zero(tlo, 1);
    if (mpfr_sgn(thi) < 0) mpfr_set_zero(thi, 1);
    mpfr_sqrt(lo, tlo, MPFR_RNDD);
    mpfr_sqrt(hi, thi, MPFR_RNDU);
    BallReal r = BallReal::from_endpoints(lo, hi, p);
    mpfr_clear(tlo);
    mpfr_clear(thi);
    mpfr_clear(lo);
    mpfr_clear(hi);
    return r;
}

BallReal exp_ball(const BallReal& a) {
    mpfr_prec_t p = a.prec();
    mpfr_t tlo, thi, lo, hi;
    mpfr_init2(tlo, p);
    mpfr_init2(thi, p);
    mpfr_init2(lo, p);
    mpfr_init2(hi, p);
    mpfr_sub(tlo, a.mid(), a.rad(), MPFR_RNDD);
    mpfr_add(thi, a.mid(), a.rad(), MPFR_RNDU);
    mpfr_exp(lo, tlo, MPFR_RNDD);
    mpfr_exp(hi, thi, MPFR_RNDU);
    BallReal r = BallReal::from_endpoints(lo, hi, p);
    mpfr_clear(tlo);
    mpfr_clear(thi);
    mpfr_clear(lo);
    mpfr_clear(hi);
    return r;
}

BallReal log_ball(const BallReal& a) {
    mpfr_prec_t p = a.prec();
    if (!a.definitely_positive()) {
        BallReal bad(p);
        mpfr_set_nan(bad.mid_mut());
        return bad;
    }
    mpfr_t tlo, thi, lo, hi;
    mpfr_init2(tlo, p);
    mpfr_init2(thi, p);
    mpfr_init2(lo, p);
    mpfr_init2(hi, p);
    mpfr_sub(tlo, a.mid(), a.rad(), MPFR_RNDD);
    mpfr_add(thi, a.mid(), a.rad(), MPFR_RNDU);
    mpfr_log(lo, tlo, MPFR_RNDD);
    mpfr_log(hi, thi, MPFR_RNDU);
    BallReal r = BallReal::from_endpoints(lo, hi, p);
    mpfr_clear(tlo);
    mpfr_clear(thi);
    mpfr_clear(lo);
    mpfr_clear(hi);
    return r;
}

BallReal sin_ball(const BallReal& a) {
    BallReal r(a.prec());
    int t = mpfr_sin(r.mid_, a.mid_, MPFR_RNDN);
    // |sin'| <= 1
    mpfr_set(r.rad_, a.rad_, MPFR_RNDU);
    r.bump_rounding(t);
    return r;
}

BallReal cos_ball(const BallReal& a) {
    BallReal r(a.prec());
    int t = mpfr_cos(r.mid_, a.mid_, MPFR_RNDN);
    mpfr_set(r.rad_, a.rad_, MPFR_RNDU);
    r.bump_rounding(t);
    return r;
}

BallReal abs_ball(const BallReal& a) {
    BallReal r(a.prec());
    mpfr_abs(r.mid_, a.mid_, MPFR_RNDN);
    mpfr_set(r.rad_, a.rad_, MPFR_RNDU);
    // Enclosure of |x| stays nonnegative but the naive ball may dip below 0;
    // that is still a valid enclosure, so nothing else to do.
    return r;
}

BallReal max_ball(const BallReal& a, const BallReal& b) {
    // Not tight, only used for bookkeeping.
    if (a.ub_d() >= b.ub_d()) return a;
    return b;
}

BallReal pow_ui(const BallReal& a, unsigned long e) {
    BallReal r = BallReal::from_si(1, a.prec());
    BallReal base = a;
    while (e) {
        if (e & 1) r = mul(r, base);
        e >>= 1;
        if (e) base = mul(base, base);
    }
    return r;
}

BallReal round_prec(const BallReal& a, mpfr_prec_t prec) {
    if (a.prec() == prec) return a;
    BallReal r(prec);
    int t = mpfr_set(r.mid_mut(), a.mid(), MPFR_RNDN);
    r.add_error(a.rad());
    r.bump_rounding(t);
    return r;
}

BallComplex round_prec(const BallComplex& a, mpfr_prec_t prec) {
    return BallComplex(round_prec(a.re, prec), round_prec(a.im, prec));
}

BallComplex BallComplex::from_si(long r, long i, mpfr_prec_t prec) {
    return BallComplex(BallReal::from_si(r, prec), BallReal::from_si(i, prec));
}

BallComplex BallComplex::from_mpq(const mpq_class& r, const mpq_class& i, mpfr_prec_t prec) {
    return BallComplex(BallReal::from_mpq(r, prec), BallReal::from_mpq(i, prec));
}

double BallComplex::rad_ub_d() const {
    return re.rad_d() + im.rad_d();
}

std::string BallComplex::str(std::size_t digits) const {
    return "(" + re.str(digits) + ", " + im.str(digits) + "i)";
}

BallComplex neg(const BallComplex& a) { return BallComplex(neg(a.re), neg(a.im)); }

BallComplex conj_ball(const BallComplex& a) { return BallComplex(a.re, neg(a.im)); }

BallComplex add(const BallComplex& a, const BallComplex& b) {
    return BallComplex(add(a.re, b.re), add(a.im, b.im));
}

BallComplex sub(const BallComplex& a, const BallComplex& b) {
    return BallComplex(sub(a.re, b.re), sub(a.im, b.im));
}

BallComplex mul(const BallComplex& a, const BallComplex& b) {
    return BallComplex(sub(mul(a.re, b.re), mul(a.im, b.im)),
                       add(mul(a.re, b.im), mul(a.im, b.re)));
}

BallComplex mul(const BallComplex& a, const BallReal& b) {
    return BallComplex(mul(a.re, b), mul(a.im, b));
}

BallReal norm_ball(const BallComplex& a) {
    return add(mul(a.re, a.re), mul(a.im, a.im));
}

BallReal abs_ball(const BallComplex& a) { return sqrt_ball(norm_ball(a)); }

BallComplex inv(const BallComplex& a) {
    BallReal n = inv(norm_ball(a));
    return BallComplex(mul(a.re, n), neg(mul(a.im, n)));
}

BallComplex div(const BallComplex& a, const BallComplex& b) { return mul(a, inv(b)); }

BallComplex pow_ui(const BallComplex& a, unsigned long e) {
    BallComplex r = BallComplex::from_si(1, 0, a.prec());
    BallComplex base = a;
    while (e) {
        if (e & 1) r = mul(r, base);
        e >>= 1;
        if (e) base = mul(base, base);
    }
    return r;
}

BallComplex cis_exp(const BallComplex& w) {
    BallReal scale = exp_ball(neg(w.im));
    return BallComplex(mul(scale, cos_ball(w.re)), mul(scale, sin_ball(w.re)));
}

}  // namespace specpoint::ball
