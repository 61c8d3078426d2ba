// analytic.hpp
// Explicit lower bound R(n) for the weighted count of primes p < sqrt(n)
// with n - p^2 square-free, assembled from four contribution terms:
//   cont1  moduli q in {3,...,97}, via tabulated progression constants
//   cont2  97 < q <= n^c, via Brun-Titchmarsh
//   cont3  n^c < q < A*sqrt(n), via trivial residue counts + a pi() bound
//   cont4  A*sqrt(n) <= q < sqrt(n), via quadratic-form solution counts
// R(n) = theta lower bound - cont1 - cont2 - cont3 - cont4; positivity
// certifies that every such n has a representation p^2 + square-free.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace psqf {

// sqrt(2.5e14): the progression constants eps(q^2, T) are valid for
// theta(x; q^2, l) with x >= T, i.e. for n >= T^2 = 2.5e14.
inline constexpr double kEpsilonT = 15811388.300841896;

// Free parameters of the analytic argument.
struct BoundParams {
    double c = 0.209;   // splits cases 2/3; must stay in (0, 1/4)
    double A = 0.0685;  // splits cases 3/4; must stay in (0, 1)
    double T = kEpsilonT;

    void validate() const;  // throws std::invalid_argument
};

// Per-prime-q explicit error constants. eps_1e10 and (for q <= 13)
// omega_1e10 are published data, stored as exact decimal strings and
// parsed once; omega_1e10 for 17 <= q <= 97 follows the closed form
// (ln 7 - 7/phi(q^2)) / sqrt(7).
struct EpsilonEntry {
    uint64_t q = 0;
    double eps_1e10 = 0;
    double omega_1e10 = 0;
    double eps_T = 0;  // max-formula value, rounded up at the 5th decimal
};

// The 24 odd primes 3..97 covered by the tables.
const std::vector<uint64_t>& epsilon_table_primes();
const std::vector<EpsilonEntry>& epsilon_table();

// phi(q^2) = q(q-1). Throws if q is not prime.
uint64_t euler_phi_prime_square(uint64_t q);

// Tabulated eps(q^2, 1e10); the string accessor echoes the stored decimal
// exactly. Throws for q outside the table.
double epsilon_1e10(uint64_t q);
const std::string& epsilon_1e10_string(uint64_t q);

double omega_1e10(uint64_t q);

// eps(q^2, T) = max(eps(q^2, 1e10), omega(q^2, 1e10) * phi(q^2) / sqrt(T)).
// Raw value feeds the bound; the rounded form (round-up at the 5th decimal,
// done in exact integer arithmetic) reproduces the published table.
double epsilon_T_raw(uint64_t q, const BoundParams& params);

enum class EpsBranch { eps, omega };
struct RoundedEpsilonT {
    double value = 0;
    std::string text;  // fixed 5 decimals
    EpsBranch branch = EpsBranch::eps;
};
RoundedEpsilonT epsilon_T_rounded(uint64_t q, const BoundParams& params);

// Coefficient of sqrt(n) contributed by the 24 small moduli:
// sum over q of 2 * (1 + eps(q^2, T)) / (q(q-1)). Known to be < 0.568.
double cont1_coefficient(const BoundParams& params);

// sum_{97 < q < 1000001, q prime} 1/(q(q-1)) + 1e-6, computed by actual
// prime summation (known to be < 0.00183). Cached after the first call.
double prime_tail_constant();

double cont2(double n, const BoundParams& params);

// Throws unless A * sqrt(n) > e (the embedded pi() bound needs
// log(A sqrt(n)) > 1).
double cont3(double n, const BoundParams& params);

// Throws unless n > e^e (needs log log n > 0).
double cont4(double n, const BoundParams& params);

// pi(x) <= x / log(x) * (1 + 1.2762 / log(x)).
double dusart_pi_upper(double x);

// theta(sqrt(n)) >= sqrt(n) * (1 - 0.8 / log^2 n), valid for n >= 1e14.
double theta_sqrt_lower(double n);

struct BoundBreakdown {
    double n = 0;
    double cont1 = 0;
    double cont2 = 0;
    double cont3 = 0;
    double cont4 = 0;
    double theta_lower = 0;
    double r_lower = 0;  // theta_lower - cont1 - cont2 - cont3 - cont4
};

// Requires n >= 1e14 (validity floor of theta_sqrt_lower) and valid params.
BoundBreakdown r_lower(double n, const BoundParams& params);

enum class ThresholdStatus {
    crossover,             // sign change located and refined
    positive_throughout,   // R > 0 at every grid point from 1e14 on
    negative_throughout,   // R <= 0 at n_max (no positive tail)
};

struct ThresholdResult {
    ThresholdStatus status = ThresholdStatus::crossover;
    double threshold = 0;        // first n with R > 0 (grid floor if
                                 // positive throughout, n_max if negative)
    uint64_t grid_points = 0;
    bool grid_positive_above = false;  // R > 0 at every grid point above
};

// Evaluate r_lower on a geometric grid (ratio 1.01) from 1e14 to n_max,
// refine the last sign change by bisection to relative width 1e-6, and
// check positivity at every grid point above the result.
ThresholdResult find_threshold(const BoundParams& params, double n_max);

struct GridSpec {
    double lo = 0;
    double hi = 0;
    double step = 0;
};

// Grid point maximizing r_lower(n, .); ties go to smaller c, then smaller A.
// Grids must be non-empty and lie within (0, 1/4) x (0, 1).
BoundParams optimize_params(double n, const GridSpec& c_grid,
                            const GridSpec& A_grid);

// Ceiling on solutions of p^2 + B q^2 = n counted with multiplicity:
// w * 2^(max(omega(n) - 2, 0)) + 1 with w = 4 for B = 1 and w = 2 otherwise
// (the max(.,0) clamp is a safety guard for omega(n) < 2).
uint64_t quadratic_form_solution_bound(uint64_t n, uint64_t B);

}  // namespace psqf
