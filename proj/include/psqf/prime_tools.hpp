// prime_tools.hpp
// Primitive number-theoretic services: prime generation, deterministic
// 64-bit primality, exact square-free testing, distinct-prime-factor counts.
// Everything here is a pure function; PrimeTable is immutable after
// construction and safe to share across threads.

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

namespace psqf {

// All primes <= limit, strictly increasing.
struct PrimeTable {
    uint64_t limit = 0;
    std::vector<uint64_t> primes;
};

// Sieve of Eratosthenes. limit < 2 yields an empty table.
PrimeTable primes_up_to(uint64_t limit);

// Visit every prime in [lo, hi] in ascending order without a hi-sized
// allocation (segmented; segment width 2^20).
void visit_primes(uint64_t lo, uint64_t hi,
                  const std::function<void(uint64_t)>& fn);

// Deterministic Miller-Rabin, correct for every 64-bit input (see the
// witness-set note in the implementation).
bool is_prime_u64(uint64_t m);

// True iff no prime square divides m; 1 is square-free by convention.
// Trial-divides by primes up to m^(1/3); the surviving cofactor is 1, a
// prime, a prime squared, or a product of two distinct primes, and is
// classified with a perfect-square test and is_prime_u64.
// Throws std::invalid_argument for m = 0 (every square divides 0).
bool is_squarefree_exact(uint64_t m);

// Number of distinct prime divisors; omega_distinct(1) = 0.
// Throws std::invalid_argument for m = 0.
int omega_distinct(uint64_t m);

// floor(sqrt(m)). Float-seeded, integer-corrected; no floating point in
// the decision path.
uint64_t isqrt_u64(uint64_t m);

// floor(cbrt(m)), same correction scheme.
uint64_t icbrt_u64(uint64_t m);

bool is_perfect_square(uint64_t m);

namespace detail {
// Shared grow-only prime cache used by the exact square-free test so the
// public signature stays (m) while repeated calls amortize sieving.
std::shared_ptr<const PrimeTable> cached_primes_at_least(uint64_t limit);
}  // namespace detail

}  // namespace psqf
