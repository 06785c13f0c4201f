#ifndef SPECPOINT_PARSER_HPP
#define SPECPOINT_PARSER_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "specpoint/poly.hpp"

namespace specpoint::cli {

class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& msg, int line, int col)
        : std::runtime_error(msg + " at line " + std::to_string(line) + ", column " +
                             std::to_string(col)),
          line(line),
          col(col) {}
    int line, col;
};

// Expression tree over rational literals, the variables X, Y, T, the binary
// operators + - *, and nonnegative integer powers.
struct PolyExpr {
    enum class Kind { Literal, Var, Add, Sub, Neg, Mul, Pow };
    Kind kind = Kind::Literal;
    poly::Rational literal;
    char var = 0;
    unsigned exponent = 0;
    std::vector<PolyExpr> kids;
};

// Grammar: expr := ['-'] term (('+'|'-') term)*; term := factor ('*' factor)*;
// factor := base ('^' uint)?; base := '(' expr ')' | rational | var.
// Implicit multiplication is a syntax error; whitespace is insignificant.
PolyExpr parse_expr(const std::string& text);

// A parsed polynomial in X, Y and T with rational coefficients.
struct ParsedPoly {
    std::map<std::tuple<int, int, int>, poly::Rational> terms;  // (i, j, t)

    bool uses_t() const;
    bool is_zero() const { return terms.empty(); }
    poly::BivarPoly to_bivar() const;    // requires uses_t() == false
    poly::UniPoly to_unipoly_t() const;  // requires a polynomial in T only
    poly::KBivarPoly to_kbivar() const;
};

ParsedPoly evaluate(const PolyExpr& e);
ParsedPoly parse_poly(const std::string& text);

}  // namespace specpoint::cli

#endif
