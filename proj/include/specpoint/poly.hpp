#ifndef SPECPOINT_POLY_HPP
#define SPECPOINT_POLY_HPP

#include <gmpxx.h>

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "specpoint/ball.hpp"

namespace specpoint::poly {

using Rational = mpq_class;

// Dense univariate polynomial over Q. Invariant: no trailing zero
// coefficient; the zero polynomial has an empty vector.
class UniPoly {
  public:
    UniPoly() = default;
    explicit UniPoly(std::vector<Rational> coeffs);
    static UniPoly zero() { return UniPoly(); }
    static UniPoly constant(const Rational& c);
    static UniPoly monomial(const Rational& c, int deg);
    static UniPoly x();  // the variable itself

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }
    const Rational& operator[](int i) const;
    const std::vector<Rational>& coeffs() const { return c_; }
    const Rational& lc() const;

    friend bool operator==(const UniPoly&, const UniPoly&);

    UniPoly operator-() const;
    friend UniPoly operator+(const UniPoly&, const UniPoly&);
    friend UniPoly operator-(const UniPoly&, const UniPoly&);
    friend UniPoly operator*(const UniPoly&, const UniPoly&);
    UniPoly scaled(const Rational& s) const;
    UniPoly shifted(int k) const;  // multiply by X^k

    // Quotient and remainder over Q; q nonzero.
    static std::pair<UniPoly, UniPoly> divrem(const UniPoly& p, const UniPoly& q);
    // Exact division; throws if the remainder is nonzero.
    static UniPoly divexact(const UniPoly& p, const UniPoly& q);
    // lc(q)^(deg p - deg q + 1) * p mod q, all in one pass.
    static UniPoly pseudo_rem(const UniPoly& p, const UniPoly& q);

    UniPoly derivative() const;
    UniPoly monic() const;
    // Substitute X -> X^k.
    UniPoly compose_power(int k) const;

    // Rational content (gcd of numerators / lcm of denominators); zero poly
    // has content 0. primitive_integer() scales so coefficients are integers
    // with gcd 1 and positive leading coefficient.
    Rational content() const;
    UniPoly primitive_integer() const;
    bool has_integer_coeffs() const;

    Rational eval(const Rational& x) const;
    ball::BallComplex eval_ball(const ball::BallComplex& z, mpfr_prec_t prec) const;
    ball::BallReal eval_ball(const ball::BallReal& z, mpfr_prec_t prec) const;

    std::string str(const std::string& var = "X") const;

  private:
    std::vector<Rational> c_;
    void normalize();
};

// Monic gcd over Q via a primitive subresultant remainder sequence.
// Errors if both arguments are zero.
UniPoly gcd_uni(const UniPoly& p, const UniPoly& q);

// Resultant of two univariate polynomials over Q (subresultant PRS).
Rational resultant_uni(const UniPoly& p, const UniPoly& q);

// Discriminant: (-1)^(n(n-1)/2) Res(p, p') / lc(p).
Rational discriminant_uni(const UniPoly& p);

// N-th cyclotomic polynomial; monic with integer coefficients, degree phi(N).
UniPoly cyclotomic(std::uint64_t n);

// Sparse bivariate polynomial over Q. Keys are (X-exponent, Y-exponent);
// no zero coefficient is stored.
class BivarPoly {
  public:
    using Key = std::pair<int, int>;
    using Map = std::map<Key, Rational>;

    BivarPoly() = default;
    static BivarPoly zero() { return BivarPoly(); }
    static BivarPoly constant(const Rational& c);
    static BivarPoly term(const Rational& c, int i, int j);
    static BivarPoly from_unipoly_x(const UniPoly& p);
    static BivarPoly from_unipoly_y(const UniPoly& p);

    bool is_zero() const { return m_.empty(); }
    bool is_constant() const;
    int deg_x() const;
    int deg_y() const;
    const Map& terms() const { return m_; }
    Rational coeff(int i, int j) const;
    void set_coeff(int i, int j, const Rational& c);

    friend bool operator==(const BivarPoly&, const BivarPoly&);

    BivarPoly operator-() const;
    friend BivarPoly operator+(const BivarPoly&, const BivarPoly&);
    friend BivarPoly operator-(const BivarPoly&, const BivarPoly&);
    friend BivarPoly operator*(const BivarPoly&, const BivarPoly&);
    BivarPoly scaled(const Rational& s) const;

    // F as a polynomial in Y: element j is the coefficient of Y^j (in Q[X]).
    std::vector<UniPoly> coeffs_by_y() const;
    // F as a polynomial in X: element i is the coefficient of X^i (in Q[Y]).
    std::vector<UniPoly> coeffs_by_x() const;
    static BivarPoly from_coeffs_by_y(const std::vector<UniPoly>& v);

    UniPoly eval_x(const Rational& x) const;  // gives a polynomial in Y
    UniPoly eval_y(const Rational& y) const;  // gives a polynomial in X
    Rational eval(const Rational& x, const Rational& y) const;
    ball::BallComplex eval_ball(const ball::BallComplex& x, const ball::BallComplex& y,
                                mpfr_prec_t prec) const;

    std::string str() const;

  private:
    Map m_;
};

// Monic gcd over Q[X] of the coefficient polynomials of F arranged by powers
// of the other variable. F must be nonzero.
UniPoly content_in_x(const BivarPoly& f);
UniPoly content_in_y(const BivarPoly& f);

// Res_Y(F, B) in Q[X] by subresultant PRS over Q[X] with content
// pre-extraction. Sign convention: Sylvester determinant with F-rows first.
UniPoly resultant_y(const BivarPoly& f, const UniPoly& b_in_y);

struct HeightInfo {
    mpz_class big_h;      // H(F): max |coefficient| of the primitive integer form
    double log_h;         // h(F) = log H(F), rounded up
    BivarPoly primitive;  // the primitive integer polynomial
};

// Weil height over Q. F must be nonzero.
HeightInfo height_q(const BivarPoly& f);

// Number field K = Q[T]/(min_poly).
struct NumberFieldSpec {
    UniPoly min_poly;         // monic, integer coefficients
    int embedding_index = 0;  // selects a complex root for numeric checks
    bool trusted = false;     // skip the irreducibility certificate

    int degree() const { return min_poly.degree(); }
};

// Validates monicity/integrality and certifies irreducibility by rational
// root exclusion (conclusive through degree 3) plus irreducibility modulo
// small primes. Throws if inconclusive and the field is not trusted.
void validate_number_field(const NumberFieldSpec& k);

// Bivariate polynomial with coefficients in K, each written as a polynomial
// in T of degree < deg(K).
class KBivarPoly {
  public:
    using Key = std::pair<int, int>;
    std::map<Key, UniPoly> m;  // (i, j) -> coefficient in Q[T]

    bool is_zero() const;
    void set_coeff(int i, int j, UniPoly c);
    int deg_x() const;
    int deg_y() const;
};

// F' = prod over embeddings sigma of F^sigma, in Q[X,Y]; computed as the
// determinant of the multiplication-by-F matrix on the power basis of K.
BivarPoly norm_form(const KBivarPoly& f, const NumberFieldSpec& k);

}  // namespace specpoint::poly

#endif
