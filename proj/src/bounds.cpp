#include "specpoint/bounds.hpp"

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "specpoint/arith.hpp"

namespace specpoint::bounds {

namespace {

constexpr mpfr_prec_t kPrec = 128;

// a^(1 + 2/log log a) with every step rounded in the direction `up`.
double u_directed(double a, bool up) {
    if (!(a > 2.718281828459046)) throw std::invalid_argument("u_func: need a > e");
    mpfr_rnd_t r_out = up ? MPFR_RNDU : MPFR_RNDD;
    mpfr_rnd_t r_in = up ? MPFR_RNDD : MPFR_RNDU;  // loglog goes the other way
    mpfr_t x, ll, e, res;
    mpfr_init2(x, kPrec);
    mpfr_init2(ll, kPrec);
    mpfr_init2(e, kPrec);
    mpfr_init2(res, kPrec);
    mpfr_set_d(x, a, MPFR_RNDN);  // doubles are exact
    mpfr_log(ll, x, r_in);
    mpfr_log(ll, ll, r_in);
    mpfr_ui_div(e, 2, ll, r_out);
    mpfr_add_ui(e, e, 1, r_out);
    mpfr_pow(res, x, e, r_out);
    double out = mpfr_get_d(res, r_out);
    mpfr_clear(x);
    mpfr_clear(ll);
    mpfr_clear(e);
    mpfr_clear(res);
    return out;
}

}  // namespace

double u_func(double a) { return u_directed(a, true); }

double u_func_lower(double a) { return u_directed(a, false); }

bool candidate_filter_holds(std::uint64_t n, std::uint64_t d_delta2) {
    auto fac = arith::factorize(n);
    std::uint64_t ph = arith::phi(fac);
    int expo = static_cast<int>(arith::omega(fac)) - arith::c1(n) - arith::c2(fac);
    mpz_class lhs(static_cast<unsigned long>(ph));
    mpz_class rhs(static_cast<unsigned long>(d_delta2));
    if (expo >= 0)
        rhs <<= expo;
    else
        lhs <<= -expo;
    return lhs <= rhs;
}

std::vector<std::uint64_t> n_candidates(int d, int delta2) {
    if (d < 1 || delta2 < 1) throw std::invalid_argument("n_candidates: d, delta2 >= 1");
    std::uint64_t dd = static_cast<std::uint64_t>(d) * static_cast<std::uint64_t>(delta2);
    double a = std::max(8.0, static_cast<double>(dd));
    double cap = u_func(a);
    auto limit = static_cast<std::uint64_t>(std::ceil(cap));
    std::vector<std::uint64_t> out;
    for (std::uint64_t n = 1; n <= limit; ++n) {
        if (candidate_filter_holds(n, dd)) out.push_back(n);
    }
    return out;
}

double delta_cap(const BoundInput& in) {
    if (in.d < 1 || in.delta1 < 1 || in.delta2 < 1 || in.h_f < 0)
        throw std::invalid_argument("delta_cap: invalid input");
    double a = std::max(8.0, static_cast<double>(in.d) * in.delta2);
    mpfr_t x, ll, e, pw, lin, t;
    mpfr_init2(x, kPrec);
    mpfr_init2(ll, kPrec);
    mpfr_init2(e, kPrec);
    mpfr_init2(pw, kPrec);
    mpfr_init2(lin, kPrec);
    mpfr_init2(t, kPrec);
    mpfr_set_d(x, a, MPFR_RNDN);
    mpfr_log(ll, x, MPFR_RNDD);
    mpfr_log(ll, ll, MPFR_RNDD);
    mpfr_ui_div(e, 5, ll, MPFR_RNDU);
    mpfr_add_ui(e, e, 2, MPFR_RNDU);
    mpfr_pow(pw, x, e, MPFR_RNDU);
    // d*hF + (d-1)(delta1+delta2) log 2 + 1
    mpfr_set_d(lin, in.h_f, MPFR_RNDU);
    mpfr_mul_ui(lin, lin, in.d, MPFR_RNDU);
    mpfr_const_log2(t, MPFR_RNDU);
    mpfr_mul_ui(t, t, static_cast<unsigned long>(in.d - 1) * (in.delta1 + in.delta2), MPFR_RNDU);
    mpfr_add(lin, lin, t, MPFR_RNDU);
    mpfr_add_ui(lin, lin, 1, MPFR_RNDU);
    mpfr_sqr(lin, lin, MPFR_RNDU);
    mpfr_mul(pw, pw, lin, MPFR_RNDU);
    double out = mpfr_get_d(pw, MPFR_RNDU);
    mpfr_clear(x);
    mpfr_clear(ll);
    mpfr_clear(e);
    mpfr_clear(pw);
    mpfr_clear(lin);
    mpfr_clear(t);
    return out;
}

BoundReport compute_bounds(const BoundInput& in) {
    BoundReport r;
    r.a = std::max(8.0, static_cast<double>(in.d) * in.delta2);
    r.n_cap = u_func(r.a);
    r.n_candidates = n_candidates(in.d, in.delta2);
    r.delta_cap = delta_cap(in);
    return r;
}

}  // namespace specpoint::bounds
