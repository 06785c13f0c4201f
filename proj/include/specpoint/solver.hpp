#ifndef SPECPOINT_SOLVER_HPP
#define SPECPOINT_SOLVER_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "specpoint/ball.hpp"
#include "specpoint/bounds.hpp"
#include "specpoint/cm.hpp"
#include "specpoint/poly.hpp"

namespace specpoint::solver {

struct CurveInput {
    poly::BivarPoly f_q;                         // used when no field is given
    std::optional<poly::KBivarPoly> f_k;         // coefficients in Q[T]
    std::optional<poly::NumberFieldSpec> field;  // K, when f_k is used
    std::optional<double> delta_cap_override;
    std::optional<std::uint64_t> n_max_override;
    int threads = 0;  // 0 = all cores
};

// Mathematical rejection (the curve contains a horizontal or vertical line,
// or is constant/zero). Carries the offending content when applicable.
class CurveRejected : public std::runtime_error {
  public:
    CurveRejected(const std::string& msg, poly::UniPoly content, char direction)
        : std::runtime_error(msg), offending_content(std::move(content)), direction(direction) {}
    poly::UniPoly offending_content;
    char direction;  // 'X', 'Y' or '-' when not applicable
};

// The theorem cap is beyond what certified recognition can scan; the caller
// must pass an explicit delta cap override.
class CapTooLarge : public std::runtime_error {
  public:
    CapTooLarge(const std::string& msg, double computed_cap)
        : std::runtime_error(msg), computed_cap(computed_cap) {}
    double computed_cap;
};

struct ReducedCurve {
    poly::BivarPoly f;          // F' over Q, primitive integer coefficients
    int d = 1;                  // [K:Q] of the input
    int delta1 = 0, delta2 = 0; // degrees of F'
    mpz_class big_h;            // H(F')
    double h_f = 0.0;           // h(F'), rounded up
    bounds::BoundReport bound;  // computed with the K = Q formula on F'
    double effective_cap = 0.0; // override when given, else bound.delta_cap
    bool cap_overridden = false;
};

// Validation + reduction to Q (identity when K = Q). Throws CurveRejected.
ReducedCurve reduce_to_q(const CurveInput& in);

// Validation only; throws CurveRejected on a line divisor or constant input.
void validate_curve(const poly::BivarPoly& f);

struct PairReport {
    ball::BallComplex alpha;
    std::uint64_t lambda_exponent = 1;
    double residual_radius = 0.0;  // radius of the enclosure of F'(alpha, lambda^k)
};

struct SpecialPointReport {
    std::uint64_t n = 1;
    cm::Disc disc{-3};
    poly::UniPoly factor;  // monic; divides both R_N and H_disc exactly
    std::vector<PairReport> pairs;
    bool exact = true;
};

struct UndecidedRoot {
    std::uint64_t n = 1;
    ball::BallComplex enclosure;
    std::string reason;
};

struct SolveResult {
    ReducedCurve curve;
    std::vector<SpecialPointReport> reports;
    std::vector<UndecidedRoot> undecided;
};

// The end-to-end decision procedure.
SolveResult special_points(const CurveInput& in);

enum class PairVerdict { Vanishes, Excluded, Undecided };

struct CertifiedPair {
    ball::BallComplex alpha;
    PairVerdict verdict = PairVerdict::Undecided;
    double residual_radius = 0.0;
};

// Ball-certified verdicts of F(alpha, e^{2 pi i k / n}) over the roots alpha
// of alpha_factor, at escalating precision up to the global cap.
std::vector<CertifiedPair> certify_pair(const poly::BivarPoly& f, const poly::UniPoly& alpha_factor,
                                        std::uint64_t n, std::uint64_t k);

// Certified root clusters of a polynomial given by ball coefficients
// (ascending). Returns nothing when the leading coefficient cannot be
// separated from zero at this precision.
struct RootCluster {
    ball::BallComplex enclosure;
    int multiplicity = 1;
};
std::optional<std::vector<RootCluster>> certified_roots(
    const std::vector<ball::BallComplex>& coeffs, mpfr_prec_t prec);

// e^{2 pi i k / n} as a ball.
ball::BallComplex root_of_unity(std::uint64_t n, std::uint64_t k, mpfr_prec_t prec);

// Exact certificate: the monic gcd factor of H (class polynomial) consisting
// of the components over which F(alpha, Y) shares a root with Phi_n; empty
// optional when the gcd is trivial. route 0 picks automatically; 1 forces the
// resultant + gcd computation, 2 forces the gcd over Q[X]/(H).
std::optional<poly::UniPoly> exact_factor_certificate(const poly::BivarPoly& f,
                                                      std::uint64_t n,
                                                      const poly::UniPoly& class_polynomial,
                                                      int route = 0);

}  // namespace specpoint::solver

#endif
