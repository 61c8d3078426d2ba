// sqfree_sieve.hpp
// Square-free flags for a contiguous integer interval, produced by crossing
// out multiples of prime squares.
//
// Storage is one byte per integer by default. Configuring the build with
// PSQF_PACKED_SIEVE=ON packs one bit per integer instead (8x smaller,
// measurably slower per lookup; numbers in the README).

#pragma once

#include <cstdint>
#include <vector>

#include "psqf/prime_tools.hpp"

namespace psqf {

// Flags for [lo, hi): squarefree(m) <=> no prime square divides m.
// Immutable after sieve_squarefree returns; distinct segments may be built
// concurrently against one shared PrimeTable.
class SieveSegment {
public:
    SieveSegment(uint64_t lo, uint64_t hi);

    uint64_t lo() const { return lo_; }
    uint64_t hi() const { return hi_; }
    uint64_t size() const { return hi_ - lo_; }

    // Requires lo() <= m < hi().
    bool squarefree(uint64_t m) const {
#if defined(PSQF_PACKED_SIEVE)
        uint64_t i = m - lo_;
        return (words_[i >> 6] >> (i & 63)) & 1u;
#else
        return flags_[m - lo_] != 0;
#endif
    }

    uint64_t count_squarefree() const;

private:
    friend SieveSegment sieve_squarefree(uint64_t, uint64_t,
                                         const PrimeTable&);

    void mark_not_squarefree(uint64_t m) {
#if defined(PSQF_PACKED_SIEVE)
        uint64_t i = m - lo_;
        words_[i >> 6] &= ~(uint64_t(1) << (i & 63));
#else
        flags_[m - lo_] = 0;
#endif
    }

    uint64_t lo_;
    uint64_t hi_;
#if defined(PSQF_PACKED_SIEVE)
    std::vector<uint64_t> words_;
#else
    std::vector<uint8_t> flags_;
#endif
};

// Sieve [lo, hi): for each prime p with p^2 < hi, marking starts at the
// least multiple of p^2 that is >= lo and steps by p^2.
// Requires 1 <= lo < hi and primes.limit >= floor(sqrt(hi - 1)); an
// insufficient table is a caller bug and throws std::invalid_argument.
SieveSegment sieve_squarefree(uint64_t lo, uint64_t hi,
                              const PrimeTable& primes);

}  // namespace psqf
