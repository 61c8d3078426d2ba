#include "psqf/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include "psqf/prime_tools.hpp"

namespace psqf {

namespace {

// Published progression constants, kept as exact decimal strings. The
// omega column for q <= 13 is tabulated data (the 5^2 entry carries the
// known corrected value); for 17 <= q <= 97 it follows the closed form
// (ln 7 - 7/phi(q^2)) / sqrt(7) and the string is absent.
struct TableRow {
    uint64_t q;
    const char* eps_1e10;
    const char* omega_1e10;  // nullptr: use the closed form
};

constexpr TableRow kRows[] = {
    {3, "0.003228", "1.109042"},  {5, "0.012214", "0.821891"},
    {7, "0.017015", "0.744132"},  {11, "0.031939", "0.711433"},
    {13, "0.042497", "0.718525"}, {17, "0.14271", nullptr},
    {19, "0.17641", nullptr},     {23, "0.25779", nullptr},
    {29, "0.41474", nullptr},     {31, "0.47695", nullptr},
    {37, "0.69397", nullptr},     {41, "0.86446", nullptr},
    {43, "0.95757", nullptr},     {47, "1.15923", nullptr},
    {53, "1.50179", nullptr},     {59, "1.89334", nullptr},
    {61, "2.03488", nullptr},     {67, "2.49293", nullptr},
    {71, "2.82639", nullptr},     {73, "3.00162", nullptr},
    {79, "3.56158", nullptr},     {83, "3.96363", nullptr},
    {89, "4.61023", nullptr},     {97, "5.55434", nullptr},
};
constexpr size_t kRowCount = sizeof(kRows) / sizeof(kRows[0]);

// Exact decimal parse into units of 1e-6. Every stored constant has at
// most six fractional digits, so this is lossless.
int64_t parse_micro(const char* text) {
    int64_t integral = 0;
    const char* p = text;
    while (*p && *p != '.') {
        integral = integral * 10 + (*p - '0');
        ++p;
    }
    int64_t frac = 0;
    int digits = 0;
    if (*p == '.') {
        ++p;
        while (*p) {
            frac = frac * 10 + (*p - '0');
            ++digits;
            ++p;
        }
    }
    while (digits < 6) {
        frac *= 10;
        ++digits;
    }
    return integral * 1000000 + frac;
}

const TableRow& row_for(uint64_t q) {
    for (const auto& row : kRows) {
        if (row.q == q) return row;
    }
    throw std::invalid_argument("q = " + std::to_string(q) +
                                " is outside the constant table (odd primes "
                                "3..97)");
}

std::string format_e5(int64_t e5) {
    std::string frac = std::to_string(e5 % 100000);
    return std::to_string(e5 / 100000) + "." +
           std::string(5 - frac.size(), '0') + frac;
}

double checked_log(double x, const char* what) {
    if (!(x > 0)) throw std::invalid_argument(std::string(what) + ": log of non-positive value");
    return std::log(x);
}

}  // namespace

void BoundParams::validate() const {
    if (!(c > 0.0 && c < 0.25))
        throw std::invalid_argument("c must lie in (0, 1/4)");
    if (!(A > 0.0 && A < 1.0))
        throw std::invalid_argument("A must lie in (0, 1)");
    if (!(T > 0.0)) throw std::invalid_argument("T must be positive");
}

const std::vector<uint64_t>& epsilon_table_primes() {
    static const std::vector<uint64_t> qs = [] {
        std::vector<uint64_t> v;
        for (const auto& row : kRows) v.push_back(row.q);
        return v;
    }();
    return qs;
}

uint64_t euler_phi_prime_square(uint64_t q) {
    if (!is_prime_u64(q))
        throw std::invalid_argument("phi(q^2): q = " + std::to_string(q) +
                                    " is not prime");
    return q * (q - 1);
}

double epsilon_1e10(uint64_t q) {
    return static_cast<double>(parse_micro(row_for(q).eps_1e10)) * 1e-6;
}

const std::string& epsilon_1e10_string(uint64_t q) {
    static const std::vector<std::string> strings = [] {
        std::vector<std::string> v;
        for (const auto& row : kRows) v.emplace_back(row.eps_1e10);
        return v;
    }();
    for (size_t i = 0; i < kRowCount; ++i)
        if (kRows[i].q == q) return strings[i];
    throw std::invalid_argument("q = " + std::to_string(q) +
                                " is outside the constant table");
}

double omega_1e10(uint64_t q) {
    const TableRow& row = row_for(q);
    if (row.omega_1e10)
        return static_cast<double>(parse_micro(row.omega_1e10)) * 1e-6;
    const double phi = static_cast<double>(q * (q - 1));
    return (std::log(7.0) - 7.0 / phi) / std::sqrt(7.0);
}

double epsilon_T_raw(uint64_t q, const BoundParams& params) {
    params.validate();
    const double eps = epsilon_1e10(q);
    const double omega_branch =
        omega_1e10(q) * static_cast<double>(q * (q - 1)) / std::sqrt(params.T);
    return std::max(eps, omega_branch);
}

RoundedEpsilonT epsilon_T_rounded(uint64_t q, const BoundParams& params) {
    params.validate();
    const TableRow& row = row_for(q);
    const int64_t eps_micro = parse_micro(row.eps_1e10);
    const double omega_branch =
        omega_1e10(q) * static_cast<double>(q * (q - 1)) / std::sqrt(params.T);

    RoundedEpsilonT out;
    if (static_cast<double>(eps_micro) * 1e-6 >= omega_branch) {
        // Round up at the fifth decimal in integer arithmetic; the stored
        // strings never exceed six decimals, so this is exact.
        const int64_t e5 = (eps_micro + 9) / 10;
        out.branch = EpsBranch::eps;
        out.value = static_cast<double>(e5) * 1e-5;
        out.text = format_e5(e5);
    } else {
        const auto e5 =
            static_cast<int64_t>(std::ceil(omega_branch * 1e5 - 1e-9));
        out.branch = EpsBranch::omega;
        out.value = static_cast<double>(e5) * 1e-5;
        out.text = format_e5(e5);
    }
    return out;
}

const std::vector<EpsilonEntry>& epsilon_table() {
    static const std::vector<EpsilonEntry> table = [] {
        const BoundParams defaults;
        std::vector<EpsilonEntry> v;
        for (const auto& row : kRows) {
            EpsilonEntry e;
            e.q = row.q;
            e.eps_1e10 = epsilon_1e10(row.q);
            e.omega_1e10 = omega_1e10(row.q);
            e.eps_T = epsilon_T_rounded(row.q, defaults).value;
            v.push_back(e);
        }
        return v;
    }();
    return table;
}

double cont1_coefficient(const BoundParams& params) {
    params.validate();
    double sum = 0.0;
    for (const auto& row : kRows) {
        const double phi = static_cast<double>(row.q * (row.q - 1));
        sum += 2.0 * (1.0 + epsilon_T_raw(row.q, params)) / phi;
    }
    return sum;
}

double prime_tail_constant() {
    static const double value = [] {
        double sum = 0.0;
        const PrimeTable table = primes_up_to(1000000);
        for (uint64_t q : table.primes) {
            if (q > 97) sum += 1.0 / static_cast<double>(q * (q - 1));
        }
        return sum + 1e-6;
    }();
    return value;
}

double cont2(double n, const BoundParams& params) {
    params.validate();
    if (!(n >= 1)) throw std::invalid_argument("cont2: n must be >= 1");
    return prime_tail_constant() * std::sqrt(n) / (0.25 - params.c);
}

double cont3(double n, const BoundParams& params) {
    params.validate();
    if (!(n >= 2)) throw std::invalid_argument("cont3: n must be >= 2");
    const double root = std::sqrt(n);
    const double log_n = std::log(n);
    const double a_root = params.A * root;
    if (!(a_root > std::exp(1.0)))
        throw std::invalid_argument(
            "cont3: A*sqrt(n) must exceed e for the pi() bound");
    const double tail =
        std::pow(n, -2.0 * params.c) + std::pow(n, -params.c);
    return root * tail * log_n +
           dusart_pi_upper(a_root) * log_n;
}

double cont4(double n, const BoundParams& params) {
    params.validate();
    const double ee = std::exp(std::exp(1.0));
    if (!(n > ee))
        throw std::invalid_argument("cont4: n must exceed e^e");
    const double log_n = std::log(n);
    const double loglog_n = std::log(log_n);
    const double a2 = params.A * params.A;
    const double solutions = std::pow(2.0, 1.3841 * log_n / loglog_n);
    return solutions * (1.5 + 1.0 / (48.0 * a2) + 9.0 / (2.0 * a2 * n)) *
           log_n;
}

double dusart_pi_upper(double x) {
    const double log_x = checked_log(x, "dusart_pi_upper");
    if (!(log_x > 0))
        throw std::invalid_argument("dusart_pi_upper: x must exceed 1");
    return x / log_x * (1.0 + 1.2762 / log_x);
}

double theta_sqrt_lower(double n) {
    if (!(n >= 1e14))
        throw std::invalid_argument(
            "theta_sqrt_lower: validity floor is n >= 1e14");
    const double log_n = std::log(n);
    return std::sqrt(n) * (1.0 - 0.8 / (log_n * log_n));
}

BoundBreakdown r_lower(double n, const BoundParams& params) {
    params.validate();
    BoundBreakdown b;
    b.n = n;
    b.theta_lower = theta_sqrt_lower(n);
    b.cont1 = cont1_coefficient(params) * std::sqrt(n);
    b.cont2 = cont2(n, params);
    b.cont3 = cont3(n, params);
    b.cont4 = cont4(n, params);
    b.r_lower = b.theta_lower - b.cont1 - b.cont2 - b.cont3 - b.cont4;
    return b;
}

ThresholdResult find_threshold(const BoundParams& params, double n_max) {
    params.validate();
    constexpr double kFloor = 1e14;
    if (!(n_max >= kFloor))
        throw std::invalid_argument("find_threshold: n_max must be >= 1e14");

    std::vector<double> grid;
    for (double n = kFloor; n < n_max; n *= 1.01) grid.push_back(n);
    grid.push_back(n_max);

    ThresholdResult out;
    out.grid_points = grid.size();

    // Longest all-positive suffix of the grid.
    size_t k = grid.size();
    while (k > 0 && r_lower(grid[k - 1], params).r_lower > 0) --k;

    if (k == grid.size()) {
        out.status = ThresholdStatus::negative_throughout;
        out.threshold = n_max;
        out.grid_positive_above = false;
        return out;
    }
    out.grid_positive_above = true;
    if (k == 0) {
        out.status = ThresholdStatus::positive_throughout;
        out.threshold = kFloor;
        return out;
    }

    // Bisect the bracket [grid[k-1], grid[k]] (non-positive -> positive)
    // down to relative width 1e-6; report the positive end.
    double lo = grid[k - 1];
    double hi = grid[k];
    while ((hi - lo) / hi > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        if (r_lower(mid, params).r_lower > 0)
            hi = mid;
        else
            lo = mid;
    }
    out.status = ThresholdStatus::crossover;
    out.threshold = hi;
    return out;
}

BoundParams optimize_params(double n, const GridSpec& c_grid,
                            const GridSpec& A_grid) {
    auto grid_points = [](const GridSpec& g, double lo_bound,
                          double hi_bound, const char* name) {
        if (!(g.step > 0) || !(g.lo <= g.hi))
            throw std::invalid_argument(std::string(name) +
                                        " grid is empty or inverted");
        if (!(g.lo > lo_bound && g.hi < hi_bound))
            throw std::invalid_argument(std::string(name) +
                                        " grid leaves the valid domain");
        std::vector<double> pts;
        const auto count =
            static_cast<size_t>((g.hi - g.lo) / g.step + 1e-9) + 1;
        for (size_t i = 0; i < count; ++i) pts.push_back(g.lo + static_cast<double>(i) * g.step);
        return pts;
    };
    const auto cs = grid_points(c_grid, 0.0, 0.25, "c");
    const auto as = grid_points(A_grid, 0.0, 1.0, "A");

    BoundParams best;
    double best_r = 0;
    bool have_best = false;
    for (double c : cs) {
        for (double A : as) {
            BoundParams p;
            p.c = c;
            p.A = A;
            const double r = r_lower(n, p).r_lower;
            // Ascending scan: strict improvement keeps the smallest c,
            // then the smallest A, on ties.
            if (!have_best || r > best_r) {
                best = p;
                best_r = r;
                have_best = true;
            }
        }
    }
    return best;
}

uint64_t quadratic_form_solution_bound(uint64_t n, uint64_t B) {
    if (n < 3)
        throw std::invalid_argument(
            "quadratic_form_solution_bound: n must be >= 3");
    if (B < 1)
        throw std::invalid_argument(
            "quadratic_form_solution_bound: B must be >= 1");
    const uint64_t w = (B == 1) ? 4 : 2;
    const int omega = omega_distinct(n);
    const int shift = omega >= 2 ? omega - 2 : 0;
    return (w << shift) + 1;
}

}  // namespace psqf
