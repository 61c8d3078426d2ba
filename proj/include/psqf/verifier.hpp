// verifier.hpp
// Windowed verification that every n in a range with n % 4 != 1 can be
// written as p^2 + k with p prime and k square-free: sieve a shifted
// segment, walk the prime ladder per n, collect failures, recheck failures
// with larger primes, and checkpoint completed windows for resume.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "psqf/prime_tools.hpp"
#include "psqf/sqfree_sieve.hpp"

namespace psqf {

struct VerifierConfig {
    uint64_t start = 10;
    uint64_t end = 0;  // inclusive
    // Desk defaults. Production-scale runs of this algorithm have used
    // window_width = 2^31 with 16 parallel sieves; 2^24 fits modest RAM.
    uint64_t window_width = uint64_t(1) << 24;
    uint64_t prime_cap = 43;
    uint64_t recheck_cap = 1000;
    unsigned worker_count = 1;
    std::string checkpoint_path;
    std::string failure_path;

    // Throws std::invalid_argument unless start >= 10, end >= start,
    // window_width >= 16, prime_cap >= 3 and prime, recheck_cap >= prime_cap,
    // worker_count >= 1, and both paths are set.
    void validate() const;
};

enum class FailureStatus { unresolved, resolved, refuted };

// An n for which no ladder prime p <= cap yields square-free n - p^2.
// refuted means the ladder was exhausted for every p with p^2 < n; that
// never happens for valid inputs, and its presence fails the run.
struct FailureRecord {
    uint64_t n = 0;
    std::optional<uint64_t> resolved_by;
    FailureStatus status = FailureStatus::unresolved;
};

struct WindowResult {
    uint64_t window_start = 0;
    uint64_t window_width = 0;  // effective width, clipped to [start, end]
    uint64_t checked_count = 0;
    std::vector<FailureRecord> failures;  // ascending n
};

struct VerificationReport {
    uint64_t windows_total = 0;
    uint64_t windows_resumed = 0;  // already done per the checkpoint file
    uint64_t checked_count = 0;
    std::vector<FailureRecord> failures;  // ascending n, all unresolved
};

using PrimeHistogram = std::map<uint64_t, uint64_t>;

struct RecheckResult {
    std::vector<FailureRecord> records;    // every input record, annotated
    std::vector<FailureRecord> survivors;  // still unresolved (or refuted)
    PrimeHistogram histogram;              // resolving prime -> count
};

// Least prime p <= cap with p^2 < n and n - p^2 square-free, or nullopt.
// p = 2 is attempted only when n % 4 != 0 (when 4 | n, n - 4 is divisible
// by 4 and never square-free). Throws for n < 10 or n % 4 == 1.
// The first overload tests with is_squarefree_exact; the second looks up a
// caller-provided segment, which must cover every n - p^2 it probes.
std::optional<uint64_t> smallest_representing_prime(uint64_t n, uint64_t cap);
std::optional<uint64_t> smallest_representing_prime(uint64_t n, uint64_t cap,
                                                    const SieveSegment& seg);

// Check [window_start, window_start + width) clipped to [cfg.start, cfg.end]:
// builds one segment over [max(1, N - P^2), last - 3) and runs the ladder
// p in {2 (if n % 4 != 0), 3, 5, ..., P} per eligible n. Deterministic.
// primes must cover both the segment (sqrt of its upper end) and the ladder
// (primes up to cfg.prime_cap).
WindowResult verify_window(uint64_t window_start, const VerifierConfig& cfg,
                           const PrimeTable& primes);

// Partition [start, end] into windows of window_width, dispatch them to
// worker_count workers, and merge results in ascending window order. One
// checkpoint line (`SEG <start> <width> DONE <failures>`) and the window's
// `FAIL <n>` lines are appended per completed window. A re-run with an
// existing checkpoint resumes after the last completed window and produces
// a byte-identical failure file; a corrupt checkpoint aborts with a
// diagnostic (std::runtime_error), never silently skips work.
VerificationReport run_range(const VerifierConfig& cfg,
                             const std::function<void(const WindowResult&)>&
                                 progress = nullptr);

// Re-run the exact ladder up to recheck_cap for each (unresolved) record.
// Throws std::invalid_argument if any input record is not unresolved.
RecheckResult recheck_failures(const std::vector<FailureRecord>& records,
                               uint64_t recheck_cap);

struct RunSummary {
    uint64_t checked = 0;
    uint64_t failures = 0;    // ladder failures before recheck
    uint64_t unresolved = 0;  // survivors after recheck (includes refuted)
    bool refuted = false;
    PrimeHistogram histogram;
};

// Full pipeline behind the `verify` subcommand: run_range, recheck at
// cfg.recheck_cap, then rewrite the failure file with final statuses
// (`RESOLVED <n> <p>` / `FAIL <n>` / `REFUTED <n>`), sorted by n.
RunSummary run_and_recheck(const VerifierConfig& cfg,
                           const std::function<void(const WindowResult&)>&
                               progress = nullptr);

// Failure-file round trip. read accepts FAIL, RESOLVED and REFUTED lines.
std::vector<FailureRecord> read_failure_file(const std::string& path);
void write_failure_file(const std::string& path,
                        const std::vector<FailureRecord>& records);

}  // namespace psqf
