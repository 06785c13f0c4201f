#ifndef SPECPOINT_BALL_HPP
#define SPECPOINT_BALL_HPP

#include <gmpxx.h>
#include <mpfr.h>

#include <string>
#include <utility>

namespace specpoint::ball {

// Certified real enclosure: midpoint at working precision, radius kept at a
// small fixed precision and always rounded outward. Every operation returns
// an enclosure of the exact image of the input enclosures.
class BallReal {
  public:
    static constexpr mpfr_prec_t kRadPrec = 32;

    explicit BallReal(mpfr_prec_t prec = 128);
    BallReal(const BallReal& o);
    BallReal(BallReal&& o) noexcept;
    BallReal& operator=(const BallReal& o);
    BallReal& operator=(BallReal&& o) noexcept;
    ~BallReal();

    static BallReal from_si(long v, mpfr_prec_t prec);
    static BallReal from_mpz(const mpz_class& v, mpfr_prec_t prec);
    static BallReal from_mpq(const mpq_class& v, mpfr_prec_t prec);
    static BallReal from_double(double v, mpfr_prec_t prec);
    // [lo, hi] endpoints already directed-rounded by the caller.
    static BallReal from_endpoints(mpfr_srcptr lo, mpfr_srcptr hi, mpfr_prec_t prec);
    static BallReal pi(mpfr_prec_t prec);

    mpfr_prec_t prec() const { return prec_; }
    mpfr_srcptr mid() const { return mid_; }
    mpfr_srcptr rad() const { return rad_; }
    mpfr_ptr mid_mut() { return mid_; }

    bool is_finite() const;
    bool is_exact_zero() const { return mpfr_zero_p(mid_) && mpfr_zero_p(rad_); }
    bool contains_zero() const;
    // x > 0 everywhere on the ball / x < 0 everywhere.
    bool definitely_positive() const;
    bool definitely_negative() const;

    double mid_d() const { return mpfr_get_d(mid_, MPFR_RNDN); }
    double rad_d() const { return mpfr_get_d(rad_, MPFR_RNDU); }
    // Directed double bounds of the enclosure itself.
    double ub_d() const;
    double lb_d() const;
    // Upper/lower bound of |x| over the ball, as doubles.
    double abs_ub_d() const;
    double abs_lb_d() const;

    std::string str(std::size_t digits = 20) const;

    // Grow the radius by |e| (exact addition, rounded up).
    void add_error(mpfr_srcptr e);
    void add_error_2exp(mpfr_exp_t e);  // add 2^e
    // Account for the final rounding of mid_ after an RNDN operation whose
    // ternary value was t (t == 0 means exact).
    void bump_rounding(int t);

  private:
    mpfr_t mid_;
    mpfr_t rad_;
    mpfr_prec_t prec_;
    friend BallReal neg(const BallReal&);
    friend BallReal add(const BallReal&, const BallReal&);
    friend BallReal sub(const BallReal&, const BallReal&);
    friend BallReal mul(const BallReal&, const BallReal&);
    friend BallReal mul_si(const BallReal&, long);
    friend BallReal inv(const BallReal&);
    friend BallReal sqrt_ball(const BallReal&);
    friend BallReal exp_ball(const BallReal&);
    friend BallReal sin_ball(const BallReal&);
    friend BallReal cos_ball(const BallReal&);
    friend BallReal abs_ball(const BallReal&);
    friend BallReal max_ball(const BallReal&, const BallReal&);
};

BallReal neg(const BallReal& a);
BallReal add(const BallReal& a, const BallReal& b);
BallReal sub(const BallReal& a, const BallReal& b);
BallReal mul(const BallReal& a, const BallReal& b);
BallReal mul_si(const BallReal& a, long s);
BallReal inv(const BallReal& a);  // requires the ball to exclude 0
BallReal div(const BallReal& a, const BallReal& b);
BallReal sqrt_ball(const BallReal& a);  // enclosure of sqrt(max(x,0))
BallReal exp_ball(const BallReal& a);
BallReal log_ball(const BallReal& a);  // requires a strictly positive ball
BallReal sin_ball(const BallReal& a);
BallReal cos_ball(const BallReal& a);
BallReal abs_ball(const BallReal& a);
BallReal max_ball(const BallReal& a, const BallReal& b);
BallReal pow_ui(const BallReal& a, unsigned long e);
// Valid enclosure of the same value at a different working precision.
BallReal round_prec(const BallReal& a, mpfr_prec_t prec);

// Certified complex enclosure (rectangular: independent re/im balls).
class BallComplex {
  public:
    BallReal re, im;

    explicit BallComplex(mpfr_prec_t prec = 128) : re(prec), im(prec) {}
    BallComplex(BallReal r, BallReal i) : re(std::move(r)), im(std::move(i)) {}

    static BallComplex from_si(long r, long i, mpfr_prec_t prec);
    static BallComplex from_mpq(const mpq_class& r, const mpq_class& i, mpfr_prec_t prec);

    mpfr_prec_t prec() const { return re.prec(); }
    bool is_finite() const { return re.is_finite() && im.is_finite(); }
    bool contains_zero() const { return re.contains_zero() && im.contains_zero(); }
    double rad_ub_d() const;
    std::string str(std::size_t digits = 20) const;
};

BallComplex neg(const BallComplex& a);
BallComplex conj_ball(const BallComplex& a);
BallComplex add(const BallComplex& a, const BallComplex& b);
BallComplex sub(const BallComplex& a, const BallComplex& b);
BallComplex mul(const BallComplex& a, const BallComplex& b);
BallComplex mul(const BallComplex& a, const BallReal& b);
BallComplex div(const BallComplex& a, const BallComplex& b);
BallComplex inv(const BallComplex& a);
BallReal norm_ball(const BallComplex& a);  // re^2 + im^2
BallReal abs_ball(const BallComplex& a);
BallComplex pow_ui(const BallComplex& a, unsigned long e);
BallComplex round_prec(const BallComplex& a, mpfr_prec_t prec);
// e^{i w} for real-pair w (used as e^{2 pi i tau} with w = 2 pi tau).
BallComplex cis_exp(const BallComplex& w);

}  // namespace specpoint::ball

#endif
