#ifndef SPECPOINT_BOUNDS_HPP
#define SPECPOINT_BOUNDS_HPP

#include <cstdint>
#include <vector>

namespace specpoint::bounds {

struct BoundInput {
    int d = 1;          // [K:Q]
    int delta1 = 1;     // deg_X
    int delta2 = 1;     // deg_Y
    double h_f = 0.0;   // logarithmic height of F (an upper bound)
};

struct BoundReport {
    double a = 8.0;                          // max(8, d*delta2)
    std::vector<std::uint64_t> n_candidates; // all admissible orders N
    double n_cap = 0.0;                      // upper bound on N
    double delta_cap = 0.0;                  // upper bound on |Delta|
};

// a^(1 + 2/log log a), rounded upward. Requires a > e.
double u_func(double a);
// Same quantity rounded downward (for verification checks).
double u_func_lower(double a);

// Exact integer test of the candidate filter: phi(N) <= bound * 2^(omega - c1 - c2).
bool candidate_filter_holds(std::uint64_t n, std::uint64_t d_delta2);

// All N satisfying the filter, enumerated to ceil(u(max(8, d*delta2))).
std::vector<std::uint64_t> n_candidates(int d, int delta2);

// a^(2 + 5/log log a) * (d h(F) + (d-1)(delta1 + delta2) log 2 + 1)^2, upward.
double delta_cap(const BoundInput& in);

BoundReport compute_bounds(const BoundInput& in);

}  // namespace specpoint::bounds

#endif
