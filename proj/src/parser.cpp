#include "specpoint/parser.hpp"

namespace specpoint::cli {

namespace {

constexpr std::size_t kMaxInput = 1 << 20;  // 1 MB
constexpr unsigned kMaxExponent = 65536;

struct Lexer {
    const std::string& text;
    std::size_t pos = 0;
    int line = 1, col = 1;

    explicit Lexer(const std::string& t) : text(t) {}

    void skip_ws() {
        while (pos < text.size()) {
            char c = text[pos];
            if (c == '\n') {
                ++line;
                col = 1;
                ++pos;
            } else if (c == ' ' || c == '\t' || c == '\r') {
                ++col;
                ++pos;
            } else {
                break;
            }
        }
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    char take() {
        char c = peek();
        if (c != '\0') {
            ++pos;
            ++col;
        }
        return c;
    }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line, col); }

    std::string take_digits() {
        skip_ws();
        std::string out;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
            out.push_back(text[pos]);
            ++pos;
            ++col;
        }
        if (out.empty()) fail("expected a digit");
        return out;
    }
};

PolyExpr parse_expr_impl(Lexer& lx);

PolyExpr parse_base(Lexer& lx) {
    char c = lx.peek();
    if (c == '(') {
        lx.take();
        PolyExpr inner = parse_expr_impl(lx);
        if (lx.peek() != ')') lx.fail("expected ')'");
        lx.take();
        return inner;
    }
    if (c == 'X' || c == 'Y' || c == 'T') {
        lx.take();
        PolyExpr v;
        v.kind = PolyExpr::Kind::Var;
        v.var = c;
        return v;
    }
    if (c >= '0' && c <= '9') {
        std::string num = lx.take_digits();
        PolyExpr e;
        e.kind = PolyExpr::Kind::Literal;
        if (lx.peek() == '/') {
            lx.take();
            std::string den = lx.take_digits();
            mpz_class dz{den};
            if (dz == 0) lx.fail("zero denominator");
            mpq_class q{mpz_class(num), dz};
            q.canonicalize();
            e.literal = q;
        } else {
            e.literal = poly::Rational(mpz_class(num));
        }
        return e;
    }
    if (c >= 'a' && c <= 'z')
        lx.fail(std::string("unknown symbol '") + c + "' (variables are X, Y and T)");
    if ((c >= 'A' && c <= 'Z'))
        lx.fail(std::string("unknown variable '") + c + "' (variables are X, Y and T)");
    if (c == '\0') lx.fail("unexpected end of input");
    lx.fail(std::string("unexpected character '") + c + "'");
}

PolyExpr parse_factor(Lexer& lx) {
    PolyExpr base = parse_base(lx);
    if (lx.peek() == '^') {
        lx.take();
        if (lx.peek() == '-') lx.fail("exponents must be nonnegative integers");
        std::string digits = lx.take_digits();
        if (digits.size() > 9) lx.fail("exponent overflow");
        unsigned long e = std::stoul(digits);
        if (e > kMaxExponent) lx.fail("exponent overflow");
        PolyExpr p;
        p.kind = PolyExpr::Kind::Pow;
        p.exponent = static_cast<unsigned>(e);
        p.kids.push_back(std::move(base));
        return p;
    }
    return base;
}

PolyExpr parse_term(Lexer& lx) {
    PolyExpr acc = parse_factor(lx);
    while (lx.peek() == '*') {
        lx.take();
        PolyExpr rhs = parse_factor(lx);
        PolyExpr m;
        m.kind = PolyExpr::Kind::Mul;
        m.kids.push_back(std::move(acc));
        m.kids.push_back(std::move(rhs));
        acc = std::move(m);
    }
    char c = lx.peek();
    if (c == 'X' || c == 'Y' || c == 'T' || (c >= '0' && c <= '9') || c == '(')
        lx.fail("implicit multiplication is not allowed; use '*'");
    return acc;
}

PolyExpr parse_expr_impl(Lexer& lx) {
    PolyExpr acc;
    if (lx.peek() == '-') {
        lx.take();
        PolyExpr first = parse_term(lx);
        acc.kind = PolyExpr::Kind::Neg;
        acc.kids.push_back(std::move(first));
    } else {
        acc = parse_term(lx);
    }
    while (true) {
        char c = lx.peek();
        if (c != '+' && c != '-') break;
        lx.take();
        PolyExpr rhs = parse_term(lx);
        PolyExpr node;
        node.kind = c == '+' ? PolyExpr::Kind::Add : PolyExpr::Kind::Sub;
        node.kids.push_back(std::move(acc));
        node.kids.push_back(std::move(rhs));
        acc = std::move(node);
    }
    return acc;
}

using TermMap = std::map<std::tuple<int, int, int>, poly::Rational>;

void add_term(TermMap& m, const std::tuple<int, int, int>& k, const poly::Rational& c) {
    auto it = m.find(k);
    if (it == m.end()) {
        if (c != 0) m.emplace(k, c);
    } else {
        it->second += c;
        if (it->second == 0) m.erase(it);
    }
}

TermMap mul_maps(const TermMap& a, const TermMap& b) {
    TermMap out;
    for (const auto& [ka, ca] : a) {
        for (const auto& [kb, cb] : b) {
            std::tuple<int, int, int> k{std::get<0>(ka) + std::get<0>(kb),
                                        std::get<1>(ka) + std::get<1>(kb),
                                        std::get<2>(ka) + std::get<2>(kb)};
            add_term(out, k, ca * cb);
        }
    }
    return out;
}

TermMap eval_rec(const PolyExpr& e) {
    switch (e.kind) {
        case PolyExpr::Kind::Literal: {
            TermMap m;
            if (e.literal != 0) m.emplace(std::tuple<int, int, int>{0, 0, 0}, e.literal);
            return m;
        }
        case PolyExpr::Kind::Var: {
            TermMap m;
            std::tuple<int, int, int> k{e.var == 'X' ? 1 : 0, e.var == 'Y' ? 1 : 0,
                                        e.var == 'T' ? 1 : 0};
            m.emplace(k, poly::Rational(1));
            return m;
        }
        case PolyExpr::Kind::Neg: {
            TermMap m = eval_rec(e.kids[0]);
            for (auto& [k, c] : m) c = -c;
            return m;
        }
        case PolyExpr::Kind::Add:
        case PolyExpr::Kind::Sub: {
            TermMap m = eval_rec(e.kids[0]);
            TermMap rhs = eval_rec(e.kids[1]);
            for (const auto& [k, c] : rhs)
                add_term(m, k, e.kind == PolyExpr::Kind::Add ? c : poly::Rational(-c));
            return m;
        }
        case PolyExpr::Kind::Mul:
            return mul_maps(eval_rec(e.kids[0]), eval_rec(e.kids[1]));
        case PolyExpr::Kind::Pow: {
            TermMap base = eval_rec(e.kids[0]);
            TermMap acc;
            acc.emplace(std::tuple<int, int, int>{0, 0, 0}, poly::Rational(1));
            unsigned e2 = e.exponent;
            while (e2) {
                if (e2 & 1) acc = mul_maps(acc, base);
                e2 >>= 1;
                if (e2) base = mul_maps(base, base);
            }
            return acc;
        }
    }
    throw std::logic_error("eval_rec: unhandled node");
}

}  // namespace

PolyExpr parse_expr(const std::string& text) {
    if (text.size() > kMaxInput) throw ParseError("input exceeds 1 MB", 1, 1);
    Lexer lx(text);
    PolyExpr e = parse_expr_impl(lx);
    if (lx.peek() != '\0') lx.fail("trailing input");
    return e;
}

bool ParsedPoly::uses_t() const {
    for (const auto& [k, c] : terms)
        if (std::get<2>(k) > 0) return true;
    return false;
}

poly::BivarPoly ParsedPoly::to_bivar() const {
    poly::BivarPoly f;
    for (const auto& [k, c] : terms) {
        if (std::get<2>(k) > 0)
            throw std::invalid_argument("polynomial uses T but no number field was given");
        f.set_coeff(std::get<0>(k), std::get<1>(k), c);
    }
    return f;
}

poly::UniPoly ParsedPoly::to_unipoly_t() const {
    int deg = -1;
    for (const auto& [k, c] : terms) {
        if (std::get<0>(k) > 0 || std::get<1>(k) > 0)
            throw std::invalid_argument("expected a polynomial in T only");
        deg = std::max(deg, std::get<2>(k));
    }
    std::vector<poly::Rational> v(deg + 1, poly::Rational(0));
    for (const auto& [k, c] : terms) v[std::get<2>(k)] = c;
    return poly::UniPoly(std::move(v));
}

poly::KBivarPoly ParsedPoly::to_kbivar() const {
    std::map<std::pair<int, int>, std::vector<poly::Rational>> grouped;
    int tmax = 0;
    for (const auto& [k, c] : terms) tmax = std::max(tmax, std::get<2>(k));
    for (const auto& [k, c] : terms) {
        auto& v = grouped[{std::get<0>(k), std::get<1>(k)}];
        if (v.empty()) v.assign(tmax + 1, poly::Rational(0));
        v[std::get<2>(k)] = c;
    }
    poly::KBivarPoly out;
    for (auto& [ij, v] : grouped) out.set_coeff(ij.first, ij.second, poly::UniPoly(std::move(v)));
    return out;
}

ParsedPoly evaluate(const PolyExpr& e) {
    ParsedPoly p;
    p.terms = eval_rec(e);
    return p;
}

ParsedPoly parse_poly(const std::string& text) { return evaluate(parse_expr(text)); }

}  // namespace specpoint::cli
