#include "psqf/prime_tools.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace psqf {

uint64_t isqrt_u64(uint64_t m) {
    if (m == 0) return 0;
    auto r = static_cast<uint64_t>(std::sqrt(static_cast<double>(m)));
    // The double seed can be off by one either way near 2^52+.
    while (r > 0 && static_cast<unsigned __int128>(r) * r > m) --r;
    while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= m) ++r;
    return r;
}

uint64_t icbrt_u64(uint64_t m) {
    if (m == 0) return 0;
    auto r = static_cast<uint64_t>(std::cbrt(static_cast<double>(m)));
    r = std::min<uint64_t>(r + 2, 2642245);  // cbrt(2^64 - 1) = 2642245.9...
    auto cube = [](uint64_t x) {
        return static_cast<unsigned __int128>(x) * x * x;
    };
    while (r > 0 && cube(r) > m) --r;
    while (cube(r + 1) <= m) ++r;
    return r;
}

bool is_perfect_square(uint64_t m) {
    uint64_t r = isqrt_u64(m);
    return r * r == m;
}

PrimeTable primes_up_to(uint64_t limit) {
    PrimeTable table;
    table.limit = limit;
    if (limit < 2) return table;

    std::vector<uint8_t> composite(limit + 1, 0);
    for (uint64_t i = 2; i * i <= limit; ++i) {
        if (composite[i]) continue;
        for (uint64_t j = i * i; j <= limit; j += i) composite[j] = 1;
    }
    double est = limit < 17 ? 8.0
                            : 1.3 * static_cast<double>(limit) /
                                  std::log(static_cast<double>(limit));
    table.primes.reserve(static_cast<size_t>(est));
    for (uint64_t i = 2; i <= limit; ++i) {
        if (!composite[i]) table.primes.push_back(i);
    }
    return table;
}

void visit_primes(uint64_t lo, uint64_t hi,
                  const std::function<void(uint64_t)>& fn) {
    if (hi < 2 || hi < lo) return;
    lo = std::max<uint64_t>(lo, 2);

    const PrimeTable base = primes_up_to(isqrt_u64(hi));
    constexpr uint64_t kSegment = uint64_t(1) << 20;

    std::vector<uint8_t> composite;
    for (uint64_t seg_lo = lo; seg_lo <= hi;) {
        const uint64_t seg_hi = std::min(hi, seg_lo + kSegment - 1);
        composite.assign(seg_hi - seg_lo + 1, 0);
        for (uint64_t p : base.primes) {
            if (p * p > seg_hi) break;
            uint64_t start = std::max(p * p, ((seg_lo + p - 1) / p) * p);
            for (uint64_t m = start; m <= seg_hi; m += p)
                composite[m - seg_lo] = 1;
        }
        for (uint64_t m = seg_lo; m <= seg_hi; ++m) {
            if (!composite[m - seg_lo]) fn(m);
        }
        if (seg_hi == hi) break;
        seg_lo = seg_hi + 1;
    }
}

namespace {

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

uint64_t powmod(uint64_t base, uint64_t exp, uint64_t m) {
    uint64_t result = 1;
    base %= m;
    while (exp) {
        if (exp & 1) result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

}  // namespace

bool is_prime_u64(uint64_t m) {
    // Strong-probable-prime test to the first twelve prime bases. This set
    // is a proven deterministic witness set for every n < 3.3 * 10^24
    // (Sorenson-Webster), which covers the whole 64-bit range.
    static constexpr uint64_t kBases[] = {2,  3,  5,  7,  11, 13,
                                          17, 19, 23, 29, 31, 37};
    if (m < 2) return false;
    for (uint64_t p : kBases) {
        if (m % p == 0) return m == p;
    }
    uint64_t d = m - 1;
    const int s = std::countr_zero(d);
    d >>= s;
    for (uint64_t a : kBases) {
        uint64_t x = powmod(a, d, m);
        if (x == 1 || x == m - 1) continue;
        bool witness = true;
        for (int round = 1; round < s; ++round) {
            x = mulmod(x, x, m);
            if (x == m - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

namespace detail {

std::shared_ptr<const PrimeTable> cached_primes_at_least(uint64_t limit) {
    static std::mutex mu;
    static std::shared_ptr<const PrimeTable> cache;

    std::lock_guard<std::mutex> lock(mu);
    if (!cache || cache->limit < limit) {
        uint64_t grown = std::max<uint64_t>(limit, uint64_t(1) << 16);
        if (cache) grown = std::max(grown, cache->limit * 2);
        cache = std::make_shared<const PrimeTable>(primes_up_to(grown));
    }
    return cache;
}

}  // namespace detail

bool is_squarefree_exact(uint64_t m) {
    if (m == 0)
        throw std::invalid_argument(
            "is_squarefree_exact: m = 0 (every square divides 0)");
    if (m < 4) return true;

    const uint64_t cuberoot = icbrt_u64(m);
    const auto table = detail::cached_primes_at_least(cuberoot);

    uint64_t rest = m;
    for (uint64_t p : table->primes) {
        if (p > cuberoot) break;
        if (rest % p == 0) {
            rest /= p;
            if (rest % p == 0) return false;
        }
    }
    // Every prime factor of rest now exceeds m^(1/3), so rest is 1, a
    // prime, the square of a prime, or a product of two distinct primes.
    if (rest == 1) return true;
    if (is_prime_u64(rest)) return true;
    return !is_perfect_square(rest);
}

int omega_distinct(uint64_t m) {
    if (m == 0) throw std::invalid_argument("omega_distinct: m = 0");
    int count = 0;
    for (uint64_t d : {uint64_t(2), uint64_t(3)}) {
        if (m % d == 0) {
            ++count;
            do m /= d;
            while (m % d == 0);
        }
    }
    for (uint64_t d = 5; d * d <= m; d += 6) {
        for (uint64_t cand : {d, d + 2}) {
            if (m % cand == 0) {
                ++count;
                do m /= cand;
                while (m % cand == 0);
            }
        }
    }
    if (m > 1) ++count;
    return count;
}

}  // namespace psqf
