// psqf: verify that integers n >= 10 with n % 4 != 1 split as a prime
// square plus a square-free number, and evaluate the explicit lower bound
// R(n) that certifies the property for large n.
//
// Results go to stdout in machine-parseable form; progress and diagnostics
// go to stderr. Exit codes: 0 success, 1 validation/usage error, 2 when a
// verification ends with unresolved (or refuted) n.

#include <cinttypes>
#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "psqf/analytic.hpp"
#include "psqf/prime_tools.hpp"
#include "psqf/verifier.hpp"

namespace {

struct GridArg {
    std::string text;
    psqf::GridSpec parse(const char* name) const {
        psqf::GridSpec g;
        const auto first = text.find(':');
        const auto second = text.find(':', first + 1);
        if (first == std::string::npos || second == std::string::npos ||
            text.find(':', second + 1) != std::string::npos)
            throw std::invalid_argument(std::string(name) +
                                        " grid must look like lo:hi:step");
        size_t used = 0;
        g.lo = std::stod(text.substr(0, first), &used);
        g.hi = std::stod(text.substr(first + 1, second - first - 1), &used);
        g.step = std::stod(text.substr(second + 1), &used);
        return g;
    }
};

int cmd_verify(const psqf::VerifierConfig& cfg) {
    const psqf::RunSummary summary = psqf::run_and_recheck(
        cfg, [](const psqf::WindowResult& w) {
            std::fprintf(stderr, "SEG %" PRIu64 " done failures=%zu\n",
                         w.window_start, w.failures.size());
        });
    for (const auto& [p, count] : summary.histogram)
        std::fprintf(stderr, "recheck: p=%" PRIu64 " resolved %" PRIu64 "\n",
                     p, count);
    if (summary.refuted)
        std::fprintf(stderr,
                     "REFUTED records present: an n admits no representation "
                     "at all. Check the failure file immediately.\n");
    std::printf("SUMMARY checked=%" PRIu64 " failures=%" PRIu64
                " unresolved=%" PRIu64 "\n",
                summary.checked, summary.failures, summary.unresolved);
    return summary.unresolved == 0 ? 0 : 2;
}

int cmd_check_n(uint64_t n, uint64_t cap) {
    const auto p = psqf::smallest_representing_prime(n, cap);
    if (p) {
        std::printf("%" PRIu64 " %" PRIu64 "\n", n, *p);
        return 0;
    }
    std::printf("%" PRIu64 " NONE\n", n);
    return 2;
}

int cmd_recheck(const std::string& path, uint64_t cap) {
    auto records = psqf::read_failure_file(path);
    // Only unresolved records are re-run; earlier annotations are kept.
    std::vector<psqf::FailureRecord> pending;
    for (const auto& rec : records)
        if (rec.status == psqf::FailureStatus::unresolved)
            pending.push_back(rec);
    const psqf::RecheckResult rc = psqf::recheck_failures(pending, cap);

    std::vector<psqf::FailureRecord> merged;
    size_t next = 0;
    for (const auto& rec : records) {
        if (rec.status == psqf::FailureStatus::unresolved)
            merged.push_back(rc.records[next++]);
        else
            merged.push_back(rec);
    }
    psqf::write_failure_file(path, merged);

    for (const auto& [p, count] : rc.histogram)
        std::printf("%" PRIu64 " %" PRIu64 "\n", p, count);
    uint64_t resolved = 0;
    for (const auto& rec : rc.records)
        if (rec.status == psqf::FailureStatus::resolved) ++resolved;
    std::printf("SUMMARY resolved=%" PRIu64 " unresolved=%zu\n", resolved,
                rc.survivors.size());
    return rc.survivors.empty() ? 0 : 2;
}

int cmd_bounds(double n, const psqf::BoundParams& params) {
    const psqf::BoundBreakdown b = psqf::r_lower(n, params);
    std::printf("n\t%.6f\n", b.n);
    std::printf("cont1\t%.6f\n", b.cont1);
    std::printf("cont2\t%.6f\n", b.cont2);
    std::printf("cont3\t%.6f\n", b.cont3);
    std::printf("cont4\t%.6f\n", b.cont4);
    std::printf("theta_lower\t%.6f\n", b.theta_lower);
    std::printf("r_lower\t%.6f\n", b.r_lower);
    return 0;
}

int cmd_threshold(const psqf::BoundParams& params, double n_max) {
    const psqf::ThresholdResult res = psqf::find_threshold(params, n_max);
    const char* status = nullptr;
    switch (res.status) {
        case psqf::ThresholdStatus::crossover: status = "crossover"; break;
        case psqf::ThresholdStatus::positive_throughout:
            status = "positive_throughout";
            break;
        case psqf::ThresholdStatus::negative_throughout:
            status = "negative_throughout";
            break;
    }
    std::printf("status\t%s\n", status);
    std::printf("threshold\t%.6f\n", res.threshold);
    std::printf("grid_points\t%" PRIu64 "\n", res.grid_points);
    return 0;
}

int cmd_optimize(double n, const GridArg& c_grid, const GridArg& A_grid) {
    const psqf::BoundParams best = psqf::optimize_params(
        n, c_grid.parse("c"), A_grid.parse("A"));
    const psqf::BoundBreakdown b = psqf::r_lower(n, best);
    std::printf("c\t%.6f\n", best.c);
    std::printf("A\t%.6f\n", best.A);
    std::printf("r_lower\t%.6f\n", b.r_lower);
    return 0;
}

int cmd_tables() {
    const psqf::BoundParams defaults;
    for (uint64_t q : psqf::epsilon_table_primes()) {
        const auto rounded = psqf::epsilon_T_rounded(q, defaults);
        std::printf("%" PRIu64 "\t%s\t%.6f\t%s\t%s\n", q,
                    psqf::epsilon_1e10_string(q).c_str(),
                    psqf::omega_1e10(q), rounded.text.c_str(),
                    rounded.branch == psqf::EpsBranch::eps ? "eps" : "omega");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"prime-square + square-free verifier and bound calculator"};
    app.require_subcommand(1);

    psqf::VerifierConfig cfg;
    cfg.checkpoint_path = "checkpoint.txt";
    cfg.failure_path = "failures.txt";
    auto* verify = app.add_subcommand(
        "verify", "check every n in [start, end] with n % 4 != 1");
    verify->add_option("--start", cfg.start, "first n (>= 10)")->required();
    verify->add_option("--end", cfg.end, "last n, inclusive")->required();
    verify->add_option("--width", cfg.window_width, "window width");
    verify->add_option("--prime-cap", cfg.prime_cap, "ladder prime cap P");
    verify->add_option("--workers", cfg.worker_count, "worker threads");
    verify->add_option("--checkpoint", cfg.checkpoint_path,
                       "checkpoint file (resumable)");
    verify->add_option("--failures", cfg.failure_path, "failure file");
    verify->add_option("--recheck-cap", cfg.recheck_cap,
                       "exact-ladder cap for failed n");

    uint64_t check_n = 0;
    uint64_t check_cap = 43;
    auto* check = app.add_subcommand(
        "check-n", "smallest representing prime for one n");
    check->add_option("n", check_n, "the integer to check")->required();
    check->add_option("--cap", check_cap, "ladder prime cap");

    std::string recheck_path;
    uint64_t recheck_cap = 1000;
    auto* recheck = app.add_subcommand(
        "recheck", "re-run a failure file with a larger exact ladder");
    recheck->add_option("path", recheck_path, "failure file")->required();
    recheck->add_option("--cap", recheck_cap, "ladder prime cap");

    psqf::BoundParams params;
    double bound_n = 0;
    auto* bounds = app.add_subcommand(
        "bounds", "evaluate the R(n) lower-bound breakdown");
    bounds->add_option("--n", bound_n, "n (>= 1e14)")->required();
    bounds->add_option("--c", params.c, "case 2/3 split exponent");
    bounds->add_option("--A", params.A, "case 3/4 split coefficient");

    double n_max = 1e20;
    auto* threshold = app.add_subcommand(
        "threshold", "locate where R(n) turns positive for good");
    threshold->add_option("--c", params.c, "case 2/3 split exponent");
    threshold->add_option("--A", params.A, "case 3/4 split coefficient");
    threshold->add_option("--n-max", n_max, "top of the search grid");

    double opt_n = 0;
    GridArg c_grid, A_grid;
    auto* optimize = app.add_subcommand(
        "optimize", "grid-search (c, A) maximizing R(n)");
    optimize->add_option("--n", opt_n, "n (>= 1e14)")->required();
    optimize->add_option("--c-grid", c_grid.text, "lo:hi:step")->required();
    optimize->add_option("--A-grid", A_grid.text, "lo:hi:step")->required();

    auto* tables = app.add_subcommand(
        "tables", "print the progression-constant tables");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*verify) return cmd_verify(cfg);
        if (*check) return cmd_check_n(check_n, check_cap);
        if (*recheck) return cmd_recheck(recheck_path, recheck_cap);
        if (*bounds) return cmd_bounds(bound_n, params);
        if (*threshold) return cmd_threshold(params, n_max);
        if (*optimize) return cmd_optimize(opt_n, c_grid, A_grid);
        if (*tables) return cmd_tables();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
