#include "specpoint/poly.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

#include "specpoint/arith.hpp"

namespace specpoint::poly {

namespace {

const Rational kZeroRat(0);

Rational rat_content(const std::vector<Rational>& v) {
    mpz_class num(0), den(1);
    for (const auto& c : v) {
        if (c == 0) continue;
        mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), c.get_num().get_mpz_t());
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
    }
    if (num == 0) return Rational(0);
    Rational r(num, den);
    r.canonicalize();
    return r;
}

UniPoly pow_uni(const UniPoly& p, unsigned long e) {
    UniPoly r = UniPoly::constant(Rational(1));
    UniPoly b = p;
    while (e) {
        if (e & 1) r = r * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return r;
}

}  // namespace

UniPoly::UniPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { normalize(); }

void UniPoly::normalize() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

UniPoly UniPoly::constant(const Rational& c) {
    UniPoly p;
    if (c != 0) p.c_.push_back(c);
    return p;
}

UniPoly UniPoly::monomial(const Rational& c, int deg) {
    UniPoly p;
    if (c != 0) {
        p.c_.assign(deg + 1, Rational(0));
        p.c_[deg] = c;
    }
    return p;
}

UniPoly UniPoly::x() { return monomial(Rational(1), 1); }

const Rational& UniPoly::operator[](int i) const {
    if (i < 0 || i >= static_cast<int>(c_.size())) return kZeroRat;
    return c_[i];
}

const Rational& UniPoly::lc() const {
    if (c_.empty()) return kZeroRat;
    return c_.back();
}

bool operator==(const UniPoly& a, const UniPoly& b) { return a.c_ == b.c_; }

UniPoly UniPoly::operator-() const {
    UniPoly r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
}

UniPoly operator+(const UniPoly& a, const UniPoly& b) {
    UniPoly r;
    r.c_.resize(std::max(a.c_.size(), b.c_.size()), Rational(0));
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a[static_cast<int>(i)] + b[static_cast<int>(i)];
    r.normalize();
    return r;
}

UniPoly operator-(const UniPoly& a, const UniPoly& b) {
    UniPoly r;
    r.c_.resize(std::max(a.c_.size(), b.c_.size()), Rational(0));
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a[static_cast<int>(i)] - b[static_cast<int>(i)];
    r.normalize();
    return r;
}

UniPoly operator*(const UniPoly& a, const UniPoly& b) {
    if (a.is_zero() || b.is_zero()) return UniPoly();
    UniPoly r;
    r.c_.assign(a.c_.size() + b.c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i] == 0) continue;
        for (std::size_t j = 0; j < b.c_.size(); ++j) {
            if (b.c_[j] == 0) continue;
            r.c_[i + j] += a.c_[i] * b.c_[j];
        }
    }
    r.normalize();
    return r;
}

UniPoly UniPoly::scaled(const Rational& s) const {
    if (s == 0) return UniPoly();
    UniPoly r = *this;
    for (auto& c : r.c_) c *= s;
    return r;
}

UniPoly UniPoly::shifted(int k) const {
    if (is_zero() || k == 0) return *this;
    UniPoly r;
    r.c_.assign(c_.size() + k, Rational(0));
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i + k] = c_[i];
    return r;
}

std::pair<UniPoly, UniPoly> UniPoly::divrem(const UniPoly& p, const UniPoly& q) {
    if (q.is_zero()) throw std::invalid_argument("UniPoly::divrem: division by zero");
    UniPoly rem = p;
    UniPoly quo;
    int dq = q.degree();
    if (rem.degree() >= dq) quo.c_.assign(rem.degree() - dq + 1, Rational(0));
    while (!rem.is_zero() && rem.degree() >= dq) {
        int k = rem.degree() - dq;
        Rational t = rem.lc() / q.lc();
        quo.c_[k] = t;
        for (int i = 0; i <= dq; ++i) rem.c_[k + i] -= t * q.c_[i];
        rem.normalize();
    }
    quo.normalize();
    return {quo, rem};
}

UniPoly UniPoly::divexact(const UniPoly& p, const UniPoly& q) {
    auto [quo, rem] = divrem(p, q);
    if (!rem.is_zero()) throw std::logic_error("UniPoly::divexact: inexact division");
    return quo;
}

UniPoly UniPoly::pseudo_rem(const UniPoly& p, const UniPoly& q) {
    if (q.is_zero()) throw std::invalid_argument("UniPoly::pseudo_rem: division by zero");
    int dq = q.degree();
    UniPoly r = p;
    int e = p.degree() - dq + 1;
    if (e < 0) e = 0;
    const Rational& d = q.lc();
    bool monic = (d == 1);
    while (!r.is_zero() && r.degree() >= dq) {
        Rational top = r.lc();
        int k = r.degree() - dq;
        // r = d*r - top * X^k * q ; the leading terms cancel.
        if (!monic) {
            for (auto& c : r.c_) c *= d;
        }
        for (int i = 0; i <= dq; ++i) r.c_[k + i] -= top * q.c_[i];
        r.normalize();
        --e;
    }
    if (e > 0 && !monic) {
        Rational scale(1);
        for (int i = 0; i < e; ++i) scale *= d;
        r = r.scaled(scale);
    }
    return r;
}

UniPoly UniPoly::derivative() const {
    UniPoly r;
    if (c_.size() <= 1) return r;
    r.c_.resize(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) r.c_[i - 1] = c_[i] * Rational(static_cast<long>(i));
    r.normalize();
    return r;
}

UniPoly UniPoly::monic() const {
    if (is_zero()) return *this;
    return scaled(Rational(1) / lc());
}

UniPoly UniPoly::compose_power(int k) const {
    if (k <= 0) throw std::invalid_argument("compose_power: k must be positive");
    if (is_zero() || k == 1) return *this;
    UniPoly r;
    r.c_.assign((c_.size() - 1) * k + 1, Rational(0));
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i * k] = c_[i];
    r.normalize();
    return r;
}

Rational UniPoly::content() const { return rat_content(c_); }

UniPoly UniPoly::primitive_integer() const {
    if (is_zero()) return *this;
    Rational c = content();
    if (lc() < 0) c = -c;
    return scaled(Rational(1) / c);
}

bool UniPoly::has_integer_coeffs() const {
    for (const auto& c : c_) {
        if (c.get_den() != 1) return false;
    }
    return true;
}

Rational UniPoly::eval(const Rational& x) const {
    Rational acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

ball::BallComplex UniPoly::eval_ball(const ball::BallComplex& z, mpfr_prec_t prec) const {
    using namespace ball;
    BallComplex acc(prec);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        acc = mul(acc, z);
        acc.re = add(acc.re, BallReal::from_mpq(*it, prec));
    }
    return acc;
}

ball::BallReal UniPoly::eval_ball(const ball::BallReal& z, mpfr_prec_t prec) const {
    using namespace ball;
    BallReal acc(prec);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        acc = add(mul(acc, z), BallReal::from_mpq(*it, prec));
    }
    return acc;
}

std::string UniPoly::str(const std::string& var) const {
    if (is_zero()) return "0";
    std::string out;
    for (int i = degree(); i >= 0; --i) {
        const Rational& c = c_[i];
        if (c == 0) continue;
        Rational a = c;
        if (out.empty()) {
            if (a < 0) { out += "-"; a = -a; }
        } else {
            out += (a < 0) ? " - " : " + ";
            if (a < 0) a = -a;
        }
        bool unit = (a == 1) && i > 0;
        if (!unit) out += a.get_str();
        if (i > 0) {
            if (!unit) out += "*";
            out += var;
            if (i > 1) out += "^" + std::to_string(i);
        }
    }
    return out;
}

UniPoly gcd_uni(const UniPoly& p, const UniPoly& q) {
    if (p.is_zero() && q.is_zero()) throw std::invalid_argument("gcd_uni: both arguments zero");
    if (p.is_zero()) return q.monic();
    if (q.is_zero()) return p.monic();
    UniPoly a = p.primitive_integer();
    UniPoly b = q.primitive_integer();
    if (a.degree() < b.degree()) std::swap(a, b);
    Rational g(1), h(1);
    while (true) {
        int delta = a.degree() - b.degree();
        UniPoly r = UniPoly::pseudo_rem(a, b);
        if (r.is_zero()) return b.monic();
        if (b.degree() == 0 || r.degree() == 0) return UniPoly::constant(Rational(1));
        a = b;
        Rational hd(1);
        for (int i = 0; i < delta; ++i) hd *= h;
        b = r.scaled(Rational(1) / (g * hd));
        b = b.primitive_integer();  // keep the sequence small; any unit factor is harmless for gcd
        g = a.lc();
        if (delta > 0) {
            Rational gn(1), hm(1);
            for (int i = 0; i < delta; ++i) gn *= g;
            for (int i = 0; i < delta - 1; ++i) hm *= h;
            h = gn / hm;
        }
    }
}

// ---------------------------------------------------------------------------
// Resultants: subresultant PRS over Q[X] for polynomials in Y.

namespace {

// Polynomial in Y with coefficients in Q[X]; index is the power of Y.
using YPoly = std::vector<UniPoly>;

void y_normalize(YPoly& a) {
    while (!a.empty() && a.back().is_zero()) a.pop_back();
}

int y_deg(const YPoly& a) { return static_cast<int>(a.size()) - 1; }

YPoly y_scale(const YPoly& a, const UniPoly& s) {
    YPoly r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
    y_normalize(r);
    return r;
}

// lc(b)^(deg a - deg b + 1) * a mod b
YPoly y_prem(const YPoly& a, const YPoly& b) {
    const UniPoly& d = b.back();
    bool monic = d.is_constant() && d.lc() == 1;
    YPoly r = a;
    int e = y_deg(a) - y_deg(b) + 1;
    while (!r.empty() && y_deg(r) >= y_deg(b)) {
        UniPoly top = r.back();
        int k = y_deg(r) - y_deg(b);
        YPoly next(r.size() - 1);
        for (int i = 0; i < y_deg(r); ++i) {
            next[i] = monic ? r[i] : r[i] * d;
            if (i >= k) next[i] = next[i] - top * b[i - k];
        }
        y_normalize(next);
        r = std::move(next);
        --e;
    }
    if (!monic) {
        for (; e > 0; --e) r = y_scale(r, d);
    }
    return r;
}

struct YContent {
    UniPoly poly;     // monic gcd of the coefficients
    Rational scalar;  // rational content of what remains
};

YContent y_extract_content(YPoly& a) {
    UniPoly g;
    for (const auto& c : a) {
        if (c.is_zero()) continue;
        g = g.is_zero() ? c.monic() : gcd_uni(g, c);
        if (g.is_constant()) { g = UniPoly::constant(Rational(1)); break; }
    }
    for (auto& c : a) {
        if (!c.is_zero()) c = UniPoly::divexact(c, g);
    }
    std::vector<Rational> all;
    for (const auto& c : a)
        for (const auto& v : c.coeffs()) all.push_back(v);
    Rational rho = rat_content(all);
    for (auto& c : a) c = c.scaled(Rational(1) / rho);
    return {g, rho};
}

}  // namespace

UniPoly resultant_y(const BivarPoly& f, const UniPoly& b_in_y) {
    if (f.is_zero() && b_in_y.is_zero())
        throw std::invalid_argument("resultant_y: both arguments zero");
    if (f.is_zero()) return b_in_y.is_constant() ? UniPoly::constant(Rational(1)) : UniPoly();
    if (b_in_y.is_zero()) return f.deg_y() == 0 ? UniPoly::constant(Rational(1)) : UniPoly();

    YPoly a = f.coeffs_by_y();
    YPoly b;
    for (const auto& c : b_in_y.coeffs()) b.push_back(UniPoly::constant(c));
    y_normalize(a);
    y_normalize(b);

    int sign = 1;
    if (y_deg(a) < y_deg(b)) {
        if ((y_deg(a) & 1) && (y_deg(b) & 1)) sign = -1;
        std::swap(a, b);
    }
    if (y_deg(b) == 0) {
        UniPoly r = pow_uni(b[0], y_deg(a));
        return sign < 0 ? -r : r;
    }

    YContent ca = y_extract_content(a);
    YContent cb = y_extract_content(b);
    UniPoly t_poly = pow_uni(ca.poly, y_deg(b)) * pow_uni(cb.poly, y_deg(a));
    Rational t_scal(1);
    for (int i = 0; i < y_deg(b); ++i) t_scal *= ca.scalar;
    for (int i = 0; i < y_deg(a); ++i) t_scal *= cb.scalar;

    UniPoly g = UniPoly::constant(Rational(1));
    UniPoly h = UniPoly::constant(Rational(1));
    while (true) {
        int da = y_deg(a), db = y_deg(b);
        int delta = da - db;
        if ((da & 1) && (db & 1)) sign = -sign;
        YPoly r = y_prem(a, b);
        if (r.empty()) return UniPoly();  // common factor of positive degree
        a = std::move(b);
        UniPoly denom = g * pow_uni(h, delta);
        b.assign(r.size(), UniPoly());
        for (std::size_t i = 0; i < r.size(); ++i)
            if (!r[i].is_zero()) b[i] = UniPoly::divexact(r[i], denom);
        y_normalize(b);
        g = a.back();
        if (delta == 1) {
            h = g;
        } else if (delta > 1) {
            h = UniPoly::divexact(pow_uni(g, delta), pow_uni(h, delta - 1));
        }
        if (y_deg(b) == 0) break;
    }
    int da = y_deg(a);
    UniPoly h_final = UniPoly::divexact(pow_uni(b[0], da), pow_uni(h, da - 1));
    UniPoly res = (h_final * t_poly).scaled(t_scal);
    return sign < 0 ? -res : res;
}

Rational resultant_uni(const UniPoly& p, const UniPoly& q) {
    BivarPoly f = BivarPoly::from_unipoly_y(p);
    UniPoly r = resultant_y(f, q);
    return r[0];
}

Rational discriminant_uni(const UniPoly& p) {
    int n = p.degree();
    if (n < 1) throw std::invalid_argument("discriminant_uni: degree must be >= 1");
    Rational res = resultant_uni(p, p.derivative());
    Rational d = res / p.lc();
    if ((static_cast<long>(n) * (n - 1) / 2) % 2 == 1) d = -d;
    return d;
}

UniPoly cyclotomic(std::uint64_t n) {
    if (n == 0 || n > 1000000) throw std::invalid_argument("cyclotomic: need 1 <= n <= 10^6");
    static std::mutex cache_mutex;
    static std::map<std::uint64_t, UniPoly> cache;
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find(n);
        if (it != cache.end()) return it->second;
    }
    UniPoly f({Rational(-1), Rational(1)});  // Y - 1
    if (n > 1) {
        auto fac = arith::factorize(n);
        std::uint64_t radical = 1;
        for (const auto& [p, e] : fac) radical *= p;
        for (const auto& [p, e] : fac) {
            f = UniPoly::divexact(f.compose_power(static_cast<int>(p)), f);
        }
        if (n / radical > 1) f = f.compose_power(static_cast<int>(n / radical));
    }
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto [it, inserted] = cache.emplace(n, std::move(f));
    return it->second;
}

// ---------------------------------------------------------------------------
// BivarPoly

BivarPoly BivarPoly::constant(const Rational& c) {
    BivarPoly p;
    if (c != 0) p.m_[{0, 0}] = c;
    return p;
}

BivarPoly BivarPoly::term(const Rational& c, int i, int j) {
    BivarPoly p;
    if (c != 0) p.m_[{i, j}] = c;
    return p;
}

BivarPoly BivarPoly::from_unipoly_x(const UniPoly& p) {
    BivarPoly r;
    for (int i = 0; i <= p.degree(); ++i)
        if (p[i] != 0) r.m_[{i, 0}] = p[i];
    return r;
}

BivarPoly BivarPoly::from_unipoly_y(const UniPoly& p) {
    BivarPoly r;
    for (int j = 0; j <= p.degree(); ++j)
        if (p[j] != 0) r.m_[{0, j}] = p[j];
    return r;
}

bool BivarPoly::is_constant() const {
    return m_.empty() || (m_.size() == 1 && m_.begin()->first == Key{0, 0});
}

int BivarPoly::deg_x() const {
    int d = m_.empty() ? -1 : 0;
    for (const auto& [k, c] : m_) d = std::max(d, k.first);
    return d;
}

int BivarPoly::deg_y() const {
    int d = m_.empty() ? -1 : 0;
    for (const auto& [k, c] : m_) d = std::max(d, k.second);
    return d;
}

Rational BivarPoly::coeff(int i, int j) const {
    auto it = m_.find({i, j});
    return it == m_.end() ? Rational(0) : it->second;
}

void BivarPoly::set_coeff(int i, int j, const Rational& c) {
    if (c == 0)
        m_.erase({i, j});
    else
        m_[{i, j}] = c;
}

bool operator==(const BivarPoly& a, const BivarPoly& b) { return a.m_ == b.m_; }

BivarPoly BivarPoly::operator-() const {
    BivarPoly r = *this;
    for (auto& [k, c] : r.m_) c = -c;
    return r;
}

BivarPoly operator+(const BivarPoly& a, const BivarPoly& b) {
    BivarPoly r = a;
    for (const auto& [k, c] : b.m_) {
        auto it = r.m_.find(k);
        if (it == r.m_.end()) {
            r.m_[k] = c;
        } else {
            it->second += c;
            if (it->second == 0) r.m_.erase(it);
        }
    }
    return r;
}

BivarPoly operator-(const BivarPoly& a, const BivarPoly& b) { return a + (-b); }

BivarPoly operator*(const BivarPoly& a, const BivarPoly& b) {
    BivarPoly r;
    for (const auto& [ka, ca] : a.m_) {
        for (const auto& [kb, cb] : b.m_) {
            BivarPoly::Key k{ka.first + kb.first, ka.second + kb.second};
            auto it = r.m_.find(k);
            if (it == r.m_.end()) {
                r.m_[k] = ca * cb;
            } else {
                it->second += ca * cb;
            }
        }
    }
    for (auto it = r.m_.begin(); it != r.m_.end();) {
        if (it->second == 0)
            it = r.m_.erase(it);
        else
            ++it;
    }
    return r;
}

BivarPoly BivarPoly::scaled(const Rational& s) const {
    if (s == 0) return BivarPoly();
    BivarPoly r = *this;
    for (auto& [k, c] : r.m_) c *= s;
    return r;
}

std::vector<UniPoly> BivarPoly::coeffs_by_y() const {
    int dy = deg_y();
    std::vector<std::vector<Rational>> raw(dy + 1);
    int dx = deg_x();
    for (auto& v : raw) v.assign(dx + 1, Rational(0));
    for (const auto& [k, c] : m_) raw[k.second][k.first] = c;
    std::vector<UniPoly> out;
    out.reserve(raw.size());
    for (auto& v : raw) out.emplace_back(std::move(v));
    return out;
}

std::vector<UniPoly> BivarPoly::coeffs_by_x() const {
    int dx = deg_x();
    std::vector<std::vector<Rational>> raw(dx + 1);
    int dy = deg_y();
    for (auto& v : raw) v.assign(dy + 1, Rational(0));
    for (const auto& [k, c] : m_) raw[k.first][k.second] = c;
    std::vector<UniPoly> out;
    out.reserve(raw.size());
    for (auto& v : raw) out.emplace_back(std::move(v));
    return out;
}

BivarPoly BivarPoly::from_coeffs_by_y(const std::vector<UniPoly>& v) {
    BivarPoly r;
    for (int j = 0; j < static_cast<int>(v.size()); ++j) {
        for (int i = 0; i <= v[j].degree(); ++i) {
            if (v[j][i] != 0) r.m_[{i, j}] = v[j][i];
        }
    }
    return r;
}

UniPoly BivarPoly::eval_x(const Rational& x) const {
    auto by_x = coeffs_by_x();
    UniPoly acc;
    for (auto it = by_x.rbegin(); it != by_x.rend(); ++it) {
        acc = acc.scaled(x) + *it;
    }
    return acc;
}

UniPoly BivarPoly::eval_y(const Rational& y) const {
    auto by_y = coeffs_by_y();
    UniPoly acc;
    for (auto it = by_y.rbegin(); it != by_y.rend(); ++it) {
        acc = acc.scaled(y) + *it;
    }
    return acc;
}

Rational BivarPoly::eval(const Rational& x, const Rational& y) const {
    return eval_y(y).eval(x);
}

ball::BallComplex BivarPoly::eval_ball(const ball::BallComplex& x, const ball::BallComplex& y,
                                       mpfr_prec_t prec) const {
    using namespace ball;
    auto by_y = coeffs_by_y();
    BallComplex acc(prec);
    for (auto it = by_y.rbegin(); it != by_y.rend(); ++it) {
        acc = add(mul(acc, y), it->eval_ball(x, prec));
    }
    return acc;
}

std::string BivarPoly::str() const {
    if (m_.empty()) return "0";
    // Terms ordered by descending total weight (X first).
    std::vector<std::pair<Key, Rational>> terms(m_.begin(), m_.end());
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
        return a.first > b.first;
    });
    std::string out;
    for (const auto& [k, cq] : terms) {
        Rational a = cq;
        if (out.empty()) {
            if (a < 0) { out += "-"; a = -a; }
        } else {
            out += (a < 0) ? " - " : " + ";
            if (a < 0) a = -a;
        }
        bool has_var = k.first > 0 || k.second > 0;
        bool unit = (a == 1) && has_var;
        if (!unit) out += a.get_str();
        bool need_star = !unit;
        if (k.first > 0) {
            if (need_star) out += "*";
            out += "X";
            if (k.first > 1) out += "^" + std::to_string(k.first);
            need_star = true;
        }
        if (k.second > 0) {
            if (need_star) out += "*";
            out += "Y";
            if (k.second > 1) out += "^" + std::to_string(k.second);
        }
    }
    return out;
}

UniPoly content_in_x(const BivarPoly& f) {
    if (f.is_zero()) throw std::invalid_argument("content_in_x: zero polynomial");
    UniPoly g;
    for (const auto& c : f.coeffs_by_y()) {
        if (c.is_zero()) continue;
        g = g.is_zero() ? c.monic() : gcd_uni(g, c);
        if (g.is_constant()) return UniPoly::constant(Rational(1));
    }
    return g;
}

UniPoly content_in_y(const BivarPoly& f) {
    if (f.is_zero()) throw std::invalid_argument("content_in_y: zero polynomial");
    UniPoly g;
    for (const auto& c : f.coeffs_by_x()) {
        if (c.is_zero()) continue;
        g = g.is_zero() ? c.monic() : gcd_uni(g, c);
        if (g.is_constant()) return UniPoly::constant(Rational(1));
    }
    return g;
}

HeightInfo height_q(const BivarPoly& f) {
    if (f.is_zero()) throw std::invalid_argument("height_q: zero polynomial");
    mpz_class den(1), num(0);
    for (const auto& [k, c] : f.terms()) {
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
        mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), c.get_num().get_mpz_t());
    }
    Rational scale = Rational(den) / Rational(num);
    if (scale < 0) scale = -scale;
    BivarPoly prim = f.scaled(scale);
    mpz_class big(0);
    for (const auto& [k, c] : prim.terms()) {
        mpz_class a = abs(c.get_num());
        if (a > big) big = a;
    }
    mpfr_t t;
    mpfr_init2(t, 64);
    mpfr_set_z(t, big.get_mpz_t(), MPFR_RNDU);
    mpfr_log(t, t, MPFR_RNDU);
    double h = mpfr_get_d(t, MPFR_RNDU);
    mpfr_clear(t);
    return {big, h, prim};
}

// ---------------------------------------------------------------------------
// Number fields and norm forms

namespace {

// Dense polynomial arithmetic modulo a small prime, for the irreducibility
// certificate. Polynomials are little-endian coefficient vectors mod p.
using ModPoly = std::vector<std::uint64_t>;

void mp_norm(ModPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint64_t mp_powmod(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
    using u128 = unsigned __int128;
    std::uint64_t r = 1 % p;
    b %= p;
    while (e) {
        if (e & 1) r = static_cast<std::uint64_t>(u128(r) * b % p);
        b = static_cast<std::uint64_t>(u128(b) * b % p);
        e >>= 1;
    }
    return r;
}

// a mod f, f monic.
ModPoly mp_rem(ModPoly a, const ModPoly& f, std::uint64_t p) {
    using u128 = unsigned __int128;
    int df = static_cast<int>(f.size()) - 1;
    mp_norm(a);
    while (static_cast<int>(a.size()) - 1 >= df) {
        std::uint64_t top = a.back();
        int k = static_cast<int>(a.size()) - 1 - df;
        if (top) {
            for (int i = 0; i <= df; ++i) {
                u128 sub = u128(top) * f[i] % p;
                std::uint64_t& tgt = a[k + i];
                tgt = (tgt + p - static_cast<std::uint64_t>(sub)) % p;
            }
        }
        a.pop_back();
        mp_norm(a);
    }
    return a;
}

ModPoly mp_mulmod(const ModPoly& a, const ModPoly& b, const ModPoly& f, std::uint64_t p) {
    using u128 = unsigned __int128;
    if (a.empty() || b.empty()) return {};
    ModPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            r[i + j] = static_cast<std::uint64_t>((u128(a[i]) * b[j] + r[i + j]) % p);
        }
    }
    return mp_rem(std::move(r), f, p);
}

ModPoly mp_gcd(ModPoly a, ModPoly b, std::uint64_t p) {
    mp_norm(a);
    mp_norm(b);
    while (!b.empty()) {
        // Make b monic, then reduce.
        std::uint64_t inv = mp_powmod(b.back(), p - 2, p);
        ModPoly bm = b;
        using u128 = unsigned __int128;
        for (auto& c : bm) c = static_cast<std::uint64_t>(u128(c) * inv % p);
        a = mp_rem(std::move(a), bm, p);
        std::swap(a, b);
    }
    return a;
}

// X^(p^k) mod f via k successive p-th powers.
ModPoly mp_frobenius_power(const ModPoly& f, std::uint64_t p, int k) {
    ModPoly g = {0, 1};  // X
    g = mp_rem(std::move(g), f, p);
    for (int i = 0; i < k; ++i) {
        // g <- g^p mod f
        ModPoly r = {1};
        ModPoly base = g;
        std::uint64_t e = p;
        while (e) {
            if (e & 1) r = mp_mulmod(r, base, f, p);
            e >>= 1;
            if (e) base = mp_mulmod(base, base, f, p);
        }
        g = std::move(r);
    }
    return g;
}

bool mp_is_x(const ModPoly& g) { return g.size() == 2 && g[0] == 0 && g[1] == 1; }

// Rabin irreducibility test over F_p for monic f of degree d >= 2.
bool irreducible_mod_p(const UniPoly& f, std::uint64_t p) {
    int d = f.degree();
    ModPoly fp(d + 1);
    for (int i = 0; i <= d; ++i) {
        mpz_class c = f[i].get_num() % static_cast<long>(p);
        if (c < 0) c += static_cast<long>(p);
        fp[i] = c.get_ui();
    }
    if (fp[d] == 0) return false;  // degree dropped mod p
    ModPoly xpd = mp_frobenius_power(fp, p, d);
    if (!mp_is_x(xpd)) return false;
    auto fac = arith::factorize(static_cast<std::uint64_t>(d));
    for (const auto& [q, e] : fac) {
        int k = d / static_cast<int>(q);
        ModPoly g = mp_frobenius_power(fp, p, k);
        // gcd(g - X, f) must be constant.
        ModPoly diff = g;
        if (diff.size() < 2) diff.resize(2, 0);
        diff[1] = (diff[1] + p - 1) % p;
        mp_norm(diff);
        ModPoly gc = mp_gcd(fp, diff, p);
        if (static_cast<int>(gc.size()) - 1 > 0) return false;
    }
    return true;
}

}  // namespace

void validate_number_field(const NumberFieldSpec& k) {
    const UniPoly& m = k.min_poly;
    if (m.degree() < 1) throw std::invalid_argument("number field: min_poly must be nonconstant");
    if (!m.has_integer_coeffs()) throw std::invalid_argument("number field: min_poly must have integer coefficients");
    if (m.lc() != 1) throw std::invalid_argument("number field: min_poly must be monic");
    if (k.embedding_index < 0 || k.embedding_index >= m.degree())
        throw std::invalid_argument("number field: embedding_index out of range");
    int d = m.degree();
    if (d == 1) return;
    // Rational root exclusion: an integer root divides the constant term.
    mpz_class c0 = m[0].get_num();
    if (c0 == 0) throw std::invalid_argument("number field: min_poly is divisible by T");
    if (mpz_fits_ulong_p(mpz_class(abs(c0)).get_mpz_t())) {
        auto fac = arith::factorize(mpz_class(abs(c0)).get_ui());
        std::vector<std::uint64_t> divisors = {1};
        for (const auto& [p, e] : fac) {
            std::size_t sz = divisors.size();
            std::uint64_t pw = 1;
            for (unsigned i = 0; i < e; ++i) {
                pw *= p;
                for (std::size_t t = 0; t < sz; ++t) {
                    if (divisors.size() > 200000) break;
                    divisors.push_back(divisors[t] * pw);
                }
            }
        }
        for (std::uint64_t dv : divisors) {
            Rational r(static_cast<unsigned long>(dv));
            if (m.eval(r) == 0 || m.eval(-r) == 0)
                throw std::invalid_argument("number field: min_poly has a rational root");
        }
    }
    if (d <= 3) return;  // no rational root => irreducible for degrees 2 and 3
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull,
                            31ull, 37ull, 41ull, 43ull, 47ull, 53ull, 59ull, 61ull, 67ull, 71ull,
                            73ull, 79ull, 83ull, 89ull, 97ull, 101ull, 103ull, 107ull, 109ull, 113ull}) {
        if (irreducible_mod_p(m, p)) return;
    }
    if (!k.trusted)
        throw std::invalid_argument(
            "number field: could not certify irreducibility of min_poly; "
            "set trusted to accept it as given");
}

bool KBivarPoly::is_zero() const {
    for (const auto& [k, c] : m)
        if (!c.is_zero()) return false;
    return true;
}

void KBivarPoly::set_coeff(int i, int j, UniPoly c) {
    if (c.is_zero())
        m.erase({i, j});
    else
        m[{i, j}] = std::move(c);
}

int KBivarPoly::deg_x() const {
    int d = -1;
    for (const auto& [k, c] : m)
        if (!c.is_zero()) d = std::max(d, k.first);
    return d;
}

int KBivarPoly::deg_y() const {
    int d = -1;
    for (const auto& [k, c] : m)
        if (!c.is_zero()) d = std::max(d, k.second);
    return d;
}

BivarPoly norm_form(const KBivarPoly& f, const NumberFieldSpec& k) {
    if (f.is_zero()) throw std::invalid_argument("norm_form: zero polynomial");
    const UniPoly& m = k.min_poly;
    if (m.lc() != 1) throw std::invalid_argument("norm_form: min_poly must be monic");
    int d = m.degree();
    if (d < 1) throw std::invalid_argument("norm_form: min_poly must be nonconstant");
    if (d > 12) throw std::invalid_argument("norm_form: fields of degree > 12 are out of scope");

    // Reduce coefficients mod m and collect coordinates: col0[r] is the
    // BivarPoly coordinate of F on T^r.
    std::vector<BivarPoly> col(d);
    for (const auto& [key, c] : f.m) {
        UniPoly red = UniPoly::divrem(c, m).second;
        for (int r = 0; r <= red.degree(); ++r) {
            if (red[r] != 0) col[r] = col[r] + BivarPoly::term(red[r], key.first, key.second);
        }
    }
    if (d == 1) return col[0];

    // Matrix of multiplication by F on the basis 1, T, ..., T^(d-1).
    std::vector<std::vector<BivarPoly>> mat(d, std::vector<BivarPoly>(d));
    for (int r = 0; r < d; ++r) mat[r][0] = col[r];
    for (int c = 1; c < d; ++c) {
        std::vector<BivarPoly> next(d);
        const BivarPoly& top = mat[d - 1][c - 1];
        for (int r = 0; r < d; ++r) {
            if (r > 0) next[r] = mat[r - 1][c - 1];
            if (!top.is_zero()) next[r] = next[r] - top.scaled(m[r]);
        }
        for (int r = 0; r < d; ++r) mat[r][c] = next[r];
    }

    // Determinant by Laplace expansion over column subsets.
    std::vector<BivarPoly> dp(std::size_t(1) << d);
    dp[0] = BivarPoly::constant(Rational(1));
    for (unsigned mask = 1; mask < (1u << d); ++mask) {
        int row = __builtin_popcount(mask) - 1;
        BivarPoly acc;
        int pos = 0;
        for (int c = 0; c < d; ++c) {
            if (!(mask & (1u << c))) continue;
            const BivarPoly& entry = mat[row][c];
            if (!entry.is_zero()) {
                BivarPoly contrib = entry * dp[mask & ~(1u << c)];
                acc = (pos % 2 == 0) ? acc + contrib : acc - contrib;
            }
            ++pos;
        }
        // Sign: expanding along the last row; parity of (row + position).
        if (row % 2 == 1) acc = -acc;
        dp[mask] = std::move(acc);
    }
    return dp[(1u << d) - 1];
}

}  // namespace specpoint::poly
