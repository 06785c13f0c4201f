#ifndef SPECPOINT_ARITH_HPP
#define SPECPOINT_ARITH_HPP

#include <cstdint>
#include <vector>

namespace specpoint::arith {

struct FactorEntry {
    std::uint64_t prime;
    unsigned exponent;
    friend bool operator==(const FactorEntry&, const FactorEntry&) = default;
};

// Prime factorization sorted ascending by prime; factorize(1) is empty.
using Factorization = std::vector<FactorEntry>;

// Deterministic Miller-Rabin, valid for all 64-bit inputs.
bool is_prime(std::uint64_t n);

// Trial division for small factors, Pollard-Brent rho for the rest.
// Requires n >= 1.
Factorization factorize(std::uint64_t n);

std::uint64_t phi(std::uint64_t n);
std::uint64_t phi(const Factorization& f);
unsigned omega(std::uint64_t n);
unsigned omega(const Factorization& f);

// With n = 2^k (2m+1): 0 if k in {0,2}, 1 if k = 1, -1 if k >= 3.
int c1(std::uint64_t n);

// 1 iff 4 | n or some prime p = 3 (mod 4) divides n, else 0.
int c2(std::uint64_t n);
int c2(const Factorization& f);

// |(Z/NZ)^x| / |{x^2 : x in (Z/NZ)^x}| by direct residue enumeration.
// Oracle-grade: does not reuse c1/omega. Requires 1 <= n <= 10^6.
std::uint64_t unit_square_class_order(std::uint64_t n);

// Smallest-prime-factor sieve for batch work over [1, limit].
std::vector<std::uint32_t> spf_sieve(std::uint32_t limit);

}  // namespace specpoint::arith

#endif
