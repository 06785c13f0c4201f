#ifndef SPECPOINT_CM_HPP
#define SPECPOINT_CM_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "specpoint/ball.hpp"
#include "specpoint/poly.hpp"

namespace specpoint::cm {

// Discriminant of an imaginary quadratic order: negative, 0 or 1 mod 4.
struct Disc {
    std::int64_t value;

    static Disc checked(std::int64_t v);
    static bool valid(std::int64_t v) { return v < 0 && ((v % 4 + 4) % 4 == 0 || (v % 4 + 4) % 4 == 1); }
    friend bool operator==(const Disc&, const Disc&) = default;
};

struct QuadForm {
    std::int64_t a = 1, b = 0, c = 1;

    std::int64_t disc() const { return b * b - 4 * a * c; }
    friend bool operator==(const QuadForm&, const QuadForm&) = default;
};

// All reduced forms (a,b,c) with b^2 - 4ac = disc, |b| <= a <= c and
// b >= 0 when |b| = a or a = c; sorted by (a, b). No primitivity filter.
std::vector<QuadForm> reduced_forms(Disc disc);
int class_number(Disc disc);

// Reduce an arbitrary positive-definite form to the canonical representative.
QuadForm reduce_form(QuadForm f);

// tau = (-b + sqrt(disc)) / (2a) in the upper half-plane.
ball::BallComplex form_tau(const QuadForm& f, mpfr_prec_t prec);

// Exact integer coefficients of q*j(q) = 1 + 744 q + 196884 q^2 + ...
// Element i is the coefficient of q^i; computed from E4^3 over the
// 24th power of the Euler product, with no hardcoded table.
std::vector<mpz_class> j_series(std::size_t num_terms);

// Certified evaluation of j(tau). Requires Im(tau) >= sqrt(3)/2 - 0.02
// (reduce to the fundamental domain first) and precision_bits >= 64.
ball::BallComplex j_eval(const ball::BallComplex& tau, mpfr_prec_t precision_bits);

struct JDerivPair {
    ball::BallComplex j;
    ball::BallComplex dj_dtau;
};
JDerivPair j_eval_with_deriv(const ball::BallComplex& tau, mpfr_prec_t precision_bits);

// Repeated tau -> tau + k, tau -> -1/tau until |Re| <= 1/2 and |tau| >= 1
// (up to enclosure width). Throws if tau sinks toward the real axis.
ball::BallComplex reduce_fundamental(ball::BallComplex tau);

struct ClassPoly {
    Disc disc{-3};
    int h = 0;
    std::vector<mpz_class> coeffs;  // ascending, length h+1, monic
    double cert_margin = 0.0;       // worst distance from a midpoint to its integer

    poly::UniPoly as_unipoly() const;
};

// Hilbert class polynomial with certified integer rounding; precision starts
// at the size estimate and doubles on certification failure (up to 8x and the
// global precision cap). Requires |disc| <= 10^10.
ClassPoly class_poly(Disc disc);
// Memoized, thread-safe view of class_poly.
const ClassPoly& class_poly_cached(Disc disc);

struct CmCandidate {
    Disc disc{-3};
    QuadForm form;
};

struct RecognizeResult {
    std::optional<CmCandidate> hit;
    // Meaningful only when hit is empty: true means the scan certified that
    // no discriminant of absolute value <= delta_cap matches alpha.
    bool absence_certified = false;
    // All candidates compatible with alpha. When exhaustive is true this
    // list is complete: alpha can be a singular modulus of |disc| <= cap
    // only for discs appearing here, so disproving each one exactly
    // certifies absence.
    std::vector<CmCandidate> candidates;
    bool exhaustive = false;
};

// Numeric CM recognition: inverts j on a certified enclosure and scans
// integer relations a*tau^2 + b*tau + c = 0 with |b^2-4ac| <= delta_cap.
// A returned candidate must be confirmed exactly by the caller.
RecognizeResult recognize_cm(const ball::BallComplex& alpha, double delta_cap);

// Global precision ceiling in bits (SPECPOINT_PRECISION_CAP, default 2^20).
mpfr_prec_t precision_cap();

}  // namespace specpoint::cm

#endif
