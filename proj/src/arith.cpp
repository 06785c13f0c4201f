#include "specpoint/arith.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace specpoint::arith {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(u128(a) * b % m); }

u64 powmod(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

}  // namespace

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    // This base set decides primality for every n < 2^64.
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 0; i < s - 1; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

namespace {

u64 pollard_brent(u64 n) {
    if ((n & 1) == 0) return 2;
    u64 c = 1;
    while (true) {
        u64 x = 2, y = 2, d = 1;
        u64 q = 1;
        int lam = 1;
        auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
        // Brent cycle detection with batched gcds.
        x = f(x);
        while (d == 1) {
            y = x;
            for (int i = 0; i < lam; ++i) x = f(x);
            int k = 0;
            while (k < lam && d == 1) {
                u64 ys = x;
                int lim = std::min(128, lam - k);
                for (int i = 0; i < lim; ++i) {
                    x = f(x);
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                d = std::gcd(q, n);
                if (d == n) {
                    // Backtrack one step at a time.
                    d = 1;
                    x = ys;
                    do {
                        x = f(x);
                        d = std::gcd(x > y ? x - y : y - x, n);
                    } while (d == 1);
                    break;
                }
                k += lim;
            }
            lam *= 2;
        }
        if (d != n) return d;
        ++c;
    }
}

void factor_rec(u64 n, std::vector<u64>& primes) {
    if (n == 1) return;
    if (is_prime(n)) { primes.push_back(n); return; }
    u64 d = pollard_brent(n);
    factor_rec(d, primes);
    factor_rec(n / d, primes);
}

}  // namespace

Factorization factorize(u64 n) {
    if (n == 0) throw std::invalid_argument("factorize: n must be positive");
    Factorization out;
    if (n == 1) return out;
    for (u64 p = 2; p <= 61 && p * p <= n; p = (p == 2 ? 3 : p + 2)) {
        if (n % p == 0) {
            unsigned e = 0;
            while (n % p == 0) { n /= p; ++e; }
            out.push_back({p, e});
        }
    }
    if (n > 1) {
        std::vector<u64> rest;
        factor_rec(n, rest);
        std::sort(rest.begin(), rest.end());
        for (std::size_t i = 0; i < rest.size();) {
            std::size_t j = i;
            while (j < rest.size() && rest[j] == rest[i]) ++j;
            out.push_back({rest[i], static_cast<unsigned>(j - i)});
            i = j;
        }
    }
    return out;
}

u64 phi(const Factorization& f) {
    u64 r = 1;
    for (const auto& [p, e] : f) {
        r *= p - 1;
        for (unsigned i = 1; i < e; ++i) r *= p;
    }
    return r;
}

u64 phi(u64 n) { return phi(factorize(n)); }

unsigned omega(const Factorization& f) { return static_cast<unsigned>(f.size()); }

unsigned omega(u64 n) { return omega(factorize(n)); }

int c1(u64 n) {
    if (n == 0) throw std::invalid_argument("c1: n must be positive");
    int k = 0;
    while ((n & 1) == 0) { n >>= 1; ++k; }
    if (k == 0 || k == 2) return 0;
    if (k == 1) return 1;
    return -1;
}

int c2(const Factorization& f) {
    for (const auto& [p, e] : f) {
        if (p == 2 && e >= 2) return 1;
        if (p % 4 == 3) return 1;
    }
    return 0;
}

int c2(u64 n) {
    if (n == 0) throw std::invalid_argument("c2: n must be positive");
    if (n % 4 == 0) return 1;
    return c2(factorize(n));
}

u64 unit_square_class_order(u64 n) {
    if (n == 0 || n > 1000000) throw std::invalid_argument("unit_square_class_order: need 1 <= n <= 10^6");
    if (n == 1) return 1;
    std::vector<bool> is_square(n, false);
    u64 units = 0, squares = 0;
    for (u64 x = 0; x < n; ++x) {
        if (std::gcd(x, n) != 1) continue;
        ++units;
        u64 s = x * x % n;
        if (!is_square[s]) { is_square[s] = true; ++squares; }
    }
    return units / squares;
}

std::vector<std::uint32_t> spf_sieve(std::uint32_t limit) {
    std::vector<std::uint32_t> spf(limit + 1, 0);
    for (std::uint32_t i = 2; i <= limit; ++i) {
        if (spf[i] == 0) {
            for (std::uint64_t j = i; j <= limit; j += i) {
                if (spf[j] == 0) spf[j] = i;
            }
        }
    }
    return spf;
}

}  // namespace specpoint::arith
