#include "psqf/sqfree_sieve.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace psqf {

SieveSegment::SieveSegment(uint64_t lo, uint64_t hi) : lo_(lo), hi_(hi) {
    if (lo < 1 || hi <= lo)
        throw std::invalid_argument("SieveSegment: need 1 <= lo < hi");
    const uint64_t n = hi - lo;
#if defined(PSQF_PACKED_SIEVE)
    words_.assign((n + 63) / 64, ~uint64_t(0));
#else
    flags_.assign(n, 1);
#endif
}

uint64_t SieveSegment::count_squarefree() const {
    uint64_t count = 0;
#if defined(PSQF_PACKED_SIEVE)
    const uint64_t n = hi_ - lo_;
    for (size_t w = 0; w < words_.size(); ++w) {
        uint64_t word = words_[w];
        if (w + 1 == words_.size() && (n & 63))
            word &= (uint64_t(1) << (n & 63)) - 1;  // drop padding bits
        count += std::popcount(word);
    }
#else
    for (uint8_t f : flags_) count += f;
#endif
    return count;
}

SieveSegment sieve_squarefree(uint64_t lo, uint64_t hi,
                              const PrimeTable& primes) {
    if (lo < 1) throw std::invalid_argument("sieve_squarefree: lo must be >= 1");
    if (hi <= lo) throw std::invalid_argument("sieve_squarefree: hi must exceed lo");
    const uint64_t need = isqrt_u64(hi - 1);
    if (primes.limit < need)
        throw std::invalid_argument(
            "sieve_squarefree: prime table covers " +
            std::to_string(primes.limit) + " but the segment needs " +
            std::to_string(need));

    SieveSegment seg(lo, hi);
    // Primes outermost, multiples innermost, to keep the segment in cache.
    for (uint64_t p : primes.primes) {
        if (p > need) break;
        const uint64_t p2 = p * p;
        uint64_t m = ((lo + p2 - 1) / p2) * p2;  // least multiple of p^2 >= lo
        while (m < hi) {
            seg.mark_not_squarefree(m);
            if (hi - m <= p2) break;  // overflow-proof step
            m += p2;
        }
    }
    return seg;
}

}  // namespace psqf
