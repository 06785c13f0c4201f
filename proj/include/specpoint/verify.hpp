#ifndef SPECPOINT_VERIFY_HPP
#define SPECPOINT_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace specpoint::verify {

struct VerifyReport {
    std::string check_name;
    std::string range;
    std::vector<std::string> counterexamples;
    std::string notes;
    double elapsed_seconds = 0.0;

    bool pass() const { return counterexamples.empty(); }
};

// |(Z/NZ)^x / ((Z/NZ)^x)^2| == 2^(omega(N) - c1(N)) for all N <= max_n,
// with the left side enumerated from scratch. max_n <= 10^6.
VerifyReport check_lemma_unit_squares(std::uint64_t max_n);

// n < u(max(8, phi(n)/2^omega(n))) for all n <= max_n (max_n <= 10^7),
// plus the spot value u(8) > 2345 in directed rounding.
VerifyReport check_prop_n_bound(std::uint64_t max_n);

// The primorial case battery: for s = 6..12, (1/2) log(2^s A_s) < c_s/log c_s
// with c_s = log(M_s / (2^s A_s)); A_s < (e/2)^s for s = 6..12; and the
// constant check 90 > e^e. All in interval arithmetic.
VerifyReport check_primorial_cases();

// Certified |j(tau) e^{2 pi i tau}| in [1/2, 2] on random tau with
// Im tau in ((1/2 pi) log 6912, 10].
VerifyReport check_j_estimate(int samples);

// Certified |g(lambda)| >= (d2+1)^(1-N) (N+1)^(-d2/2) H^(1-N) for random
// integer polynomials with g(lambda) != 0 checked exactly.
VerifyReport check_liouville_bound(int trials);

// Square classes generating the multiquadratic field attached to N: the odd
// primes contribute p* = (-1)^((p-1)/2) p; 4 | N adds -1; 8 | N adds -1, 2.
std::vector<long long> e_field_generators(std::uint64_t n);

// Dispatch by CLI name ("unit-squares", "n-bound", "primorial", "j-bound",
// "liouville"); throws std::invalid_argument for unknown names.
VerifyReport run_check(const std::string& name, std::uint64_t max_n, int trials);

}  // namespace specpoint::verify

#endif
