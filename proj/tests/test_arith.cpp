#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <numeric>
#include <random>

#include "specpoint/arith.hpp"

using namespace specpoint::arith;

namespace {

// Independent trial-division oracle (quadratic, test-only).
Factorization trial_factor(std::uint64_t n) {
    Factorization out;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            unsigned e = 0;
            while (n % p == 0) { n /= p; ++e; }
            out.push_back({p, e});
        }
    }
    if (n > 1) out.push_back({n, 1});
    return out;
}

std::uint64_t reconstruct(const Factorization& f) {
    std::uint64_t n = 1;
    for (const auto& [p, e] : f)
        for (unsigned i = 0; i < e; ++i) n *= p;
    return n;
}

}  // namespace

TEST_CASE("factorize matches trial division oracle") {
    CHECK(factorize(1).empty());
    CHECK(factorize(12) == Factorization{{2, 2}, {3, 1}});
    CHECK(factorize(30030) == Factorization{{2, 1}, {3, 1}, {5, 1}, {7, 1}, {11, 1}, {13, 1}});
    CHECK(factorize(30030) == trial_factor(30030));
    for (std::uint64_t n = 1; n <= 3000; ++n) CHECK(factorize(n) == trial_factor(n));
}

TEST_CASE("factorize round-trips") {
    for (std::uint64_t n = 1; n <= 100000; ++n) {
        auto f = factorize(n);
        REQUIRE(reconstruct(f) == n);
        for (std::size_t i = 1; i < f.size(); ++i) CHECK(f[i - 1].prime < f[i].prime);
    }
    std::mt19937_64 rng(20240817);
    for (int t = 0; t < 1000; ++t) {
        std::uint64_t n = rng();
        if (n == 0) n = 1;
        auto f = factorize(n);
        CHECK(reconstruct(f) == n);
        for (const auto& [p, e] : f) CHECK(is_prime(p));
    }
}

TEST_CASE("primality spot checks") {
    CHECK(is_prime(2));
    CHECK(is_prime((1ull << 61) - 1));
    CHECK_FALSE(is_prime(561));        // Carmichael
    CHECK_FALSE(is_prime(3215031751)); // strong pseudoprime to first four bases
    CHECK(is_prime(18446744073709551557ull));
}

TEST_CASE("phi and omega") {
    CHECK(phi(8) == 4);
    CHECK(omega(8) == 1);
    CHECK(phi(1) == 1);
    CHECK(omega(1) == 0);
    CHECK(phi(30030) == 5760);
    CHECK(omega(30030) == 6);
}

TEST_CASE("phi multiplicative, omega additive on coprime pairs") {
    std::mt19937_64 rng(7);
    int done = 0;
    while (done < 300) {
        std::uint64_t a = rng() % 100000 + 1;
        std::uint64_t b = rng() % 100000 + 1;
        if (std::gcd(a, b) != 1) continue;
        CHECK(phi(a * b) == phi(a) * phi(b));
        CHECK(omega(a * b) == omega(a) + omega(b));
        ++done;
    }
}

TEST_CASE("c1 values") {
    CHECK(c1(1) == 0);
    CHECK(c1(4) == 0);
    CHECK(c1(2) == 1);
    CHECK(c1(8) == -1);
    CHECK(c1(48) == -1);
}

TEST_CASE("c2 values") {
    CHECK(c2(4) == 1);
    CHECK(c2(5) == 0);
    CHECK(c2(1) == 0);
    CHECK(c2(15) == 1);
}

TEST_CASE("c1 + c2 stays in {0,1,2}") {
    for (std::uint64_t n = 1; n <= 100000; ++n) {
        int s = c1(n) + c2(n);
        CHECK(s >= 0);
        CHECK(s <= 2);
    }
}

TEST_CASE("unit square class order examples") {
    CHECK(unit_square_class_order(1) == 1);
    CHECK(unit_square_class_order(8) == 4);
    CHECK(unit_square_class_order(12) == 4);
}

TEST_CASE("unit square class order equals 2^(omega - c1)") {
    for (std::uint64_t n = 1; n <= 2000; ++n) {
        int e = static_cast<int>(omega(n)) - c1(n);
        CHECK(unit_square_class_order(n) == (1ull << e));
    }
}
