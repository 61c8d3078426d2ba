#include "psqf/verifier.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace psqf {

namespace {

// ---------------------------------------------------------------------
// Ladder: try p = 2 (when 4 does not divide n), 3, 5, ... while p^2 < n.
// ---------------------------------------------------------------------

void check_ladder_input(uint64_t n, uint64_t cap) {
    if (n < 10)
        throw std::invalid_argument("representing prime: n must be >= 10");
    if ((n & 3) == 1)
        throw std::invalid_argument(
            "representing prime: n = 1 mod 4 is outside the theorem");
    if (cap < 2) throw std::invalid_argument("representing prime: cap < 2");
}

template <typename SquarefreeFn>
std::optional<uint64_t> ladder_search(uint64_t n,
                                      const std::vector<uint64_t>& ladder,
                                      SquarefreeFn&& squarefree) {
    for (uint64_t p : ladder) {
        if (p == 2 && (n & 3) == 0) continue;  // 4 | n - 4, never square-free
        if (p * p >= n) break;
        if (squarefree(n - p * p)) return p;
    }
    return std::nullopt;
}

// Count of n in [a, b] with n % 4 != 1 (requires a >= 1).
uint64_t count_eligible(uint64_t a, uint64_t b) {
    auto ones_up_to = [](uint64_t x) {  // #{m <= x : m = 1 mod 4}
        return x >= 1 ? (x - 1) / 4 + 1 : uint64_t(0);
    };
    return (b - a + 1) - (ones_up_to(b) - ones_up_to(a - 1));
}

// ---------------------------------------------------------------------
// Window plan and checkpoint file
// ---------------------------------------------------------------------

struct WindowPlan {
    uint64_t start = 0;
    uint64_t width = 0;  // effective width, clipped at cfg.end
};

std::vector<WindowPlan> plan_windows(const VerifierConfig& cfg) {
    std::vector<WindowPlan> plan;
    for (uint64_t n = cfg.start; n <= cfg.end;) {
        uint64_t width = std::min(cfg.window_width, cfg.end - n + 1);
        plan.push_back({n, width});
        if (cfg.end - n < cfg.window_width) break;
        n += cfg.window_width;
    }
    return plan;
}

bool parse_u64(const std::string& tok, uint64_t* out) {
    if (tok.empty() || tok.size() > 20) return false;
    uint64_t v = 0;
    for (char ch : tok) {
        if (ch < '0' || ch > '9') return false;
        if (v > (UINT64_MAX - uint64_t(ch - '0')) / 10) return false;
        v = v * 10 + uint64_t(ch - '0');
    }
    *out = v;
    return true;
}

struct CheckpointLine {
    uint64_t window_start = 0;
    uint64_t width = 0;
    uint64_t failure_count = 0;
};

bool parse_checkpoint_line(const std::string& line, CheckpointLine* out) {
    std::istringstream in(line);
    std::string seg, done, extra;
    std::string a, b, c;
    if (!(in >> seg >> a >> b >> done >> c)) return false;
    if (in >> extra) return false;
    if (seg != "SEG" || done != "DONE") return false;
    return parse_u64(a, &out->window_start) && parse_u64(b, &out->width) &&
           parse_u64(c, &out->failure_count);
}

struct ResumePoint {
    size_t windows_done = 0;
    uint64_t failures_done = 0;
};

// Strictly validate the checkpoint against the window plan. A final line
// without a terminating newline is a torn append: the window's commit never
// completed, so the line is dropped and the window redone. Anything else
// that fails to parse or disagrees with the plan aborts.
ResumePoint load_checkpoint(const std::string& path,
                            const std::vector<WindowPlan>& plan) {
    ResumePoint rp;
    std::ifstream in(path, std::ios::binary);
    if (!in.is_open()) return rp;
    std::string content((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
    if (content.empty()) return rp;

    const bool terminated = content.back() == '\n';
    std::vector<std::string> lines;
    size_t pos = 0;
    while (pos < content.size()) {
        size_t nl = content.find('\n', pos);
        if (nl == std::string::npos) {
            lines.push_back(content.substr(pos));
            break;
        }
        lines.push_back(content.substr(pos, nl - pos));
        pos = nl + 1;
    }
    if (!terminated) lines.pop_back();  // torn tail, redo that window

    for (size_t k = 0; k < lines.size(); ++k) {
        CheckpointLine cl;
        if (!parse_checkpoint_line(lines[k], &cl))
            throw std::runtime_error("corrupt checkpoint " + path + " line " +
                                     std::to_string(k + 1) + ": '" + lines[k] +
                                     "'");
        if (k >= plan.size())
            throw std::runtime_error(
                "checkpoint " + path + " lists more windows than [start, end] "
                "contains; refusing to resume a mismatched run");
        if (cl.window_start != plan[k].start || cl.width != plan[k].width)
            throw std::runtime_error(
                "checkpoint " + path + " line " + std::to_string(k + 1) +
                " does not match the configured window plan (got SEG " +
                std::to_string(cl.window_start) + " " +
                std::to_string(cl.width) + ", expected SEG " +
                std::to_string(plan[k].start) + " " +
                std::to_string(plan[k].width) + ")");
        rp.failures_done += cl.failure_count;
    }
    rp.windows_done = lines.size();
    return rp;
}

std::string format_failure_line(const FailureRecord& rec) {
    switch (rec.status) {
        case FailureStatus::unresolved:
            return "FAIL " + std::to_string(rec.n) + "\n";
        case FailureStatus::resolved:
            return "RESOLVED " + std::to_string(rec.n) + " " +
                   std::to_string(*rec.resolved_by) + "\n";
        case FailureStatus::refuted:
            return "REFUTED " + std::to_string(rec.n) + "\n";
    }
    return {};
}

bool parse_failure_line(const std::string& line, FailureRecord* rec) {
    std::istringstream in(line);
    std::string tag, a, b, extra;
    if (!(in >> tag >> a)) return false;
    uint64_t n = 0;
    if (!parse_u64(a, &n)) return false;
    rec->n = n;
    rec->resolved_by.reset();
    if (tag == "FAIL") {
        rec->status = FailureStatus::unresolved;
        return !(in >> extra);
    }
    if (tag == "REFUTED") {
        rec->status = FailureStatus::refuted;
        return !(in >> extra);
    }
    if (tag != "RESOLVED") return false;
    uint64_t p = 0;
    if (!(in >> b) || !parse_u64(b, &p)) return false;
    if (in >> extra) return false;
    rec->status = FailureStatus::resolved;
    rec->resolved_by = p;
    return true;
}

// First `keep` lines of the failure file, which must all be FAIL records
// (mid-run state). Lines past `keep` belong to a window whose checkpoint
// commit never landed and are discarded.
std::vector<FailureRecord> reconcile_failure_file(const std::string& path,
                                                  uint64_t keep) {
    std::vector<FailureRecord> kept;
    std::ifstream in(path, std::ios::binary);
    if (!in.is_open()) {
        if (keep > 0)
            throw std::runtime_error("failure file " + path +
                                     " is missing but the checkpoint claims " +
                                     std::to_string(keep) + " failures");
        std::ofstream(path, std::ios::binary).flush();  // create empty
        return kept;
    }
    std::string line;
    while (kept.size() < keep && std::getline(in, line)) {
        FailureRecord rec;
        if (!parse_failure_line(line, &rec) ||
            rec.status != FailureStatus::unresolved)
            throw std::runtime_error("corrupt failure file " + path +
                                     " line " +
                                     std::to_string(kept.size() + 1) + ": '" +
                                     line + "'");
        kept.push_back(rec);
    }
    if (kept.size() < keep)
        throw std::runtime_error(
            "failure file " + path + " has " + std::to_string(kept.size()) +
            " lines but the checkpoint claims " + std::to_string(keep));
    in.close();

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    for (const auto& rec : kept) out << format_failure_line(rec);
    out.flush();
    if (!out) throw std::runtime_error("cannot rewrite " + path);
    return kept;
}

}  // namespace

// -----------------------------------------------------------------------
// Public operations
// -----------------------------------------------------------------------

void VerifierConfig::validate() const {
    if (start < 10)
        throw std::invalid_argument("verify: start must be >= 10");
    if (end < start) throw std::invalid_argument("verify: end < start");
    if (window_width < 16)
        throw std::invalid_argument("verify: window width must be >= 16");
    if (prime_cap < 3 || !is_prime_u64(prime_cap))
        throw std::invalid_argument(
            "verify: prime cap must be a prime >= 3");
    if (recheck_cap < prime_cap)
        throw std::invalid_argument(
            "verify: recheck cap must be >= prime cap");
    if (worker_count < 1)
        throw std::invalid_argument("verify: worker count must be >= 1");
    if (checkpoint_path.empty() || failure_path.empty())
        throw std::invalid_argument(
            "verify: checkpoint and failure paths are required");
}

std::optional<uint64_t> smallest_representing_prime(uint64_t n, uint64_t cap) {
    check_ladder_input(n, cap);
    // Primes beyond sqrt(n - 1) never satisfy p^2 < n; clamping keeps an
    // oversized cap from sieving far more than the ladder can use.
    const PrimeTable ladder = primes_up_to(std::min(cap, isqrt_u64(n - 1)));
    return ladder_search(n, ladder.primes,
                         [](uint64_t k) { return is_squarefree_exact(k); });
}

std::optional<uint64_t> smallest_representing_prime(uint64_t n, uint64_t cap,
                                                    const SieveSegment& seg) {
    check_ladder_input(n, cap);
    const PrimeTable ladder = primes_up_to(std::min(cap, isqrt_u64(n - 1)));
    return ladder_search(n, ladder.primes, [&seg, n](uint64_t k) {
        if (k < seg.lo() || k >= seg.hi())
            throw std::out_of_range(
                "segment does not cover lookup " + std::to_string(k) +
                " for n = " + std::to_string(n));
        return seg.squarefree(k);
    });
}

WindowResult verify_window(uint64_t window_start, const VerifierConfig& cfg,
                           const PrimeTable& primes) {
    if (window_start < 10)
        throw std::invalid_argument("verify_window: start below 10");
    if (window_start > cfg.end)
        throw std::invalid_argument("verify_window: start beyond cfg.end");
    const uint64_t N = window_start;
    const uint64_t last = std::min(N + cfg.window_width - 1, cfg.end);
    const uint64_t P = cfg.prime_cap;
    if (primes.limit < P)
        throw std::invalid_argument(
            "verify_window: prime table does not cover the ladder cap");

    // Shifted segment: every ladder lookup n - p^2 with n in [N, last] and
    // 2 <= p <= P lands in [max(1, N - P^2), last - 3).
    const uint64_t sieve_lo = N > P * P ? N - P * P : 1;
    const uint64_t sieve_hi = last - 3;
    const SieveSegment seg = sieve_squarefree(sieve_lo, sieve_hi, primes);

    std::vector<uint64_t> ladder;
    for (uint64_t p : primes.primes) {
        if (p > P) break;
        ladder.push_back(p);
    }

    WindowResult result;
    result.window_start = N;
    result.window_width = last - N + 1;
    for (uint64_t n = N; n <= last; ++n) {
        if ((n & 3) == 1) continue;
        ++result.checked_count;
        auto hit = ladder_search(
            n, ladder, [&seg](uint64_t k) { return seg.squarefree(k); });
        if (!hit)
            result.failures.push_back(
                {n, std::nullopt, FailureStatus::unresolved});
    }
    return result;
}

VerificationReport run_range(
    const VerifierConfig& cfg,
    const std::function<void(const WindowResult&)>& progress) {
    cfg.validate();

    const std::vector<WindowPlan> plan = plan_windows(cfg);
    const ResumePoint resume = load_checkpoint(cfg.checkpoint_path, plan);

    VerificationReport report;
    report.windows_total = plan.size();
    report.windows_resumed = resume.windows_done;
    report.checked_count = count_eligible(cfg.start, cfg.end);

    if (resume.windows_done == plan.size()) {
        // Nothing left to run. The failure file may already carry recheck
        // annotations; the set of n is the windowed-phase result either way.
        auto records = read_failure_file(cfg.failure_path);
        if (records.size() != resume.failures_done)
            throw std::runtime_error(
                "failure file " + cfg.failure_path + " has " +
                std::to_string(records.size()) +
                " records but the checkpoint claims " +
                std::to_string(resume.failures_done));
        for (auto& rec : records) {
            rec.status = FailureStatus::unresolved;
            rec.resolved_by.reset();
        }
        report.failures = std::move(records);
        return report;
    }

    report.failures =
        reconcile_failure_file(cfg.failure_path, resume.failures_done);

    std::ofstream failure_out(cfg.failure_path,
                              std::ios::binary | std::ios::app);
    std::ofstream checkpoint_out(cfg.checkpoint_path,
                                 std::ios::binary | std::ios::app);
    if (!failure_out.is_open())
        throw std::runtime_error("cannot open " + cfg.failure_path);
    if (!checkpoint_out.is_open())
        throw std::runtime_error("cannot open " + cfg.checkpoint_path);

    const PrimeTable primes =
        primes_up_to(std::max(isqrt_u64(cfg.end), cfg.prime_cap));

    // Workers pull window indices from a shared counter; the collector
    // (this thread) commits results strictly in ascending window order, so
    // any worker count produces identical files.
    std::atomic<size_t> next_window{resume.windows_done};
    std::atomic<bool> abort_workers{false};
    std::mutex mu;
    std::condition_variable cv;
    std::map<size_t, WindowResult> ready;
    std::exception_ptr worker_error;

    const unsigned workers =
        static_cast<unsigned>(std::min<size_t>(cfg.worker_count,
                                               plan.size() - resume.windows_done));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (!abort_workers.load(std::memory_order_relaxed)) {
                const size_t k = next_window.fetch_add(1);
                if (k >= plan.size()) return;
                try {
                    WindowResult res = verify_window(plan[k].start, cfg, primes);
                    std::lock_guard<std::mutex> lock(mu);
                    ready.emplace(k, std::move(res));
                } catch (...) {
                    std::lock_guard<std::mutex> lock(mu);
                    if (!worker_error) worker_error = std::current_exception();
                    abort_workers.store(true, std::memory_order_relaxed);
                }
                cv.notify_all();
            }
        });
    }
    auto join_all = [&] {
        for (auto& t : pool)
            if (t.joinable()) t.join();
    };

    try {
        for (size_t k = resume.windows_done; k < plan.size(); ++k) {
            WindowResult res;
            {
                std::unique_lock<std::mutex> lock(mu);
                cv.wait(lock, [&] {
                    return worker_error || ready.count(k) != 0;
                });
                if (worker_error) std::rethrow_exception(worker_error);
                res = std::move(ready.at(k));
                ready.erase(k);
            }
            // Failure lines land before the checkpoint line so a torn run
            // never commits a window whose failures were not recorded.
            for (const auto& rec : res.failures)
                failure_out << format_failure_line(rec);
            failure_out.flush();
            if (!failure_out)
                throw std::runtime_error("write failed on " +
                                         cfg.failure_path);
            checkpoint_out << "SEG " << res.window_start << " "
                           << res.window_width << " DONE "
                           << res.failures.size() << "\n";
            checkpoint_out.flush();
            if (!checkpoint_out)
                throw std::runtime_error("write failed on " +
                                         cfg.checkpoint_path);
            report.failures.insert(report.failures.end(),
                                   res.failures.begin(), res.failures.end());
            if (progress) progress(res);
        }
    } catch (...) {
        abort_workers.store(true, std::memory_order_relaxed);
        join_all();
        throw;
    }
    join_all();
    if (worker_error) std::rethrow_exception(worker_error);
    return report;
}

RecheckResult recheck_failures(const std::vector<FailureRecord>& records,
                               uint64_t recheck_cap) {
    for (const auto& rec : records) {
        if (rec.status != FailureStatus::unresolved)
            throw std::invalid_argument(
                "recheck_failures: record for n = " + std::to_string(rec.n) +
                " is not unresolved");
    }
    RecheckResult out;
    out.records = records;
    if (records.empty()) return out;

    uint64_t max_useful = 0;
    for (const auto& rec : records) {
        check_ladder_input(rec.n, recheck_cap);
        max_useful = std::max(max_useful, isqrt_u64(rec.n - 1));
    }
    const PrimeTable ladder =
        primes_up_to(std::min(recheck_cap, max_useful));
    for (auto& rec : out.records) {
        auto hit = ladder_search(rec.n, ladder.primes, [](uint64_t k) {
            return is_squarefree_exact(k);
        });
        if (hit) {
            rec.status = FailureStatus::resolved;
            rec.resolved_by = *hit;
            ++out.histogram[*hit];
        } else {
            // With cap >= isqrt(n - 1) every prime with p^2 < n was tried:
            // a genuine counterexample, not an inconclusive record.
            rec.status = recheck_cap >= isqrt_u64(rec.n - 1)
                             ? FailureStatus::refuted
                             : FailureStatus::unresolved;
            out.survivors.push_back(rec);
        }
    }
    return out;
}

RunSummary run_and_recheck(
    const VerifierConfig& cfg,
    const std::function<void(const WindowResult&)>& progress) {
    VerificationReport report = run_range(cfg, progress);
    RecheckResult rc = recheck_failures(report.failures, cfg.recheck_cap);
    write_failure_file(cfg.failure_path, rc.records);

    RunSummary summary;
    summary.checked = report.checked_count;
    summary.failures = report.failures.size();
    summary.unresolved = rc.survivors.size();
    summary.histogram = std::move(rc.histogram);
    for (const auto& rec : rc.survivors)
        if (rec.status == FailureStatus::refuted) summary.refuted = true;
    return summary;
}

std::vector<FailureRecord> read_failure_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.is_open())
        throw std::runtime_error("cannot open failure file " + path);
    std::vector<FailureRecord> records;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        FailureRecord rec;
        if (!parse_failure_line(line, &rec))
            throw std::runtime_error("corrupt failure file " + path +
                                     " line " + std::to_string(lineno) +
                                     ": '" + line + "'");
        records.push_back(rec);
    }
    return records;
}

void write_failure_file(const std::string& path,
                        const std::vector<FailureRecord>& records) {
    std::vector<FailureRecord> sorted = records;
    std::sort(sorted.begin(), sorted.end(),
              [](const FailureRecord& a, const FailureRecord& b) {
                  return a.n < b.n;
              });
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out.is_open()) throw std::runtime_error("cannot open " + tmp);
        for (const auto& rec : sorted) out << format_failure_line(rec);
        out.flush();
        if (!out) throw std::runtime_error("write failed on " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw std::runtime_error("cannot replace " + path + ": " +
                                 ec.message());
}

}  // namespace psqf
