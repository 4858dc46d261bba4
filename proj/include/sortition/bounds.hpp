#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sortition/errors.hpp"
#include "sortition/exact.hpp"

namespace sortition {

// Standard normal CDF via the Abramowitz & Stegun 7.1.26 rational
// approximation of erf (coefficients below; |erf error| <= 1.5e-7, so the CDF
// is accurate to 7.5e-8 absolute). Kept in-project so no special-function
// dependency is needed; tests validate it against a quadrature oracle.
inline double normal_cdf(double x) {
    constexpr double a1 = 0.254829592;
    constexpr double a2 = -0.284496736;
    constexpr double a3 = 1.421413741;
    constexpr double a4 = -1.453152027;
    constexpr double a5 = 1.061405429;
    constexpr double p = 0.3275911;
    const int sign = x < 0.0 ? -1 : 1;
    const double z = std::abs(x) / std::sqrt(2.0);
    const double t = 1.0 / (1.0 + p * z);
    const double erf_abs =
        1.0 - (((((a5 * t + a4) * t) + a3) * t + a2) * t + a1) * t * std::exp(-z * z);
    return 0.5 * (1.0 + sign * erf_abs);
}

// Upper bound on the k-sortition approximation ratio: 1 + 6 e^{-1/2} / sqrt(k).
inline double kmaj_upper_bound(long long k) {
    if (k < 1) throw validation_error("bound needs k >= 1");
    return 1.0 + 6.0 * std::exp(-0.5) / std::sqrt(double(k));
}

// Matching lower bound 1 + 2 (Phi(-1) - 1/sqrt(k)) / sqrt(k); only valid for
// populations with 2 (k+1)^2 <= n, and informative only once Phi(-1) > 1/sqrt(k).
inline double kmaj_lower_bound(long long k) {
    if (k < 1) throw validation_error("bound needs k >= 1");
    const double rk = std::sqrt(double(k));
    return 1.0 + 2.0 * (normal_cdf(-1.0) - 1.0 / rk) / rk;
}

inline bool kmaj_lower_bound_applicable(long long n, long long k) {
    return 2 * (k + 1) * (k + 1) <= n;
}

// Exact worst-case constant of 3-sortition with one issue, and the limiting
// worst minority fraction.
struct Kmaj3Limit {
    double ratio;           // 1 + (7 sqrt(7) - 10) / 27
    double worst_fraction;  // (4 - sqrt(7)) / 6
};

inline Kmaj3Limit kmaj3_exact_limit() {
    const double r7 = std::sqrt(7.0);
    return {1.0 + (7.0 * r7 - 10.0) / 27.0, (4.0 - r7) / 6.0};
}

// One-issue approximation ratio of weighted k-sortition:
// 1 + (1 / (k 2^{k-1})) (1 - 1/k)^{k-1}; k = 1 evaluates to 2 with the 0^0 = 1
// convention (the rule degenerates to a random dictator).
inline double krep_one_issue_ar(long long k) {
    if (k < 1) throw validation_error("bound needs k >= 1");
    if (k == 1) return 2.0;
    return 1.0 + std::pow(1.0 - 1.0 / double(k), double(k - 1)) /
                     (double(k) * std::pow(2.0, double(k - 1)));
}

// Upper bound for weighted k-sortition on i.i.d.-issue profiles:
// 1 + m^{m+1} exp(-k / (2m)^m).
inline double krep_iid_upper_bound(int m, long long k) {
    if (m < 1 || k < 1) throw validation_error("bound needs m >= 1 and k >= 1");
    const double md = double(m);
    return 1.0 + std::pow(md, md + 1.0) * std::exp(-double(k) / std::pow(2.0 * md, md));
}

// The intermediate form from the same derivation: 1 + m 2^{m+1} exp(-k/(2m)^m).
inline double krep_iid_upper_bound_intermediate(int m, long long k) {
    if (m < 1 || k < 1) throw validation_error("bound needs m >= 1 and k >= 1");
    const double md = double(m);
    return 1.0 + md * std::pow(2.0, md + 1.0) * std::exp(-double(k) / std::pow(2.0 * md, md));
}

// Many-issue lower bound for weighted k-sortition: the 9/8 constant and the
// parametric curve 2a + a^k - 2a^{k+1} behind it (maximized at a = 3/4 for
// k = 1; at a = 3/4 the curve equals 3/2 - (1/2)(3/4)^k).
inline double krep_many_issue_lower() { return 9.0 / 8.0; }
inline double krep_lower_curve_alpha() { return 0.75; }

inline double krep_lower_curve(double alpha, long long k) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw validation_error("curve needs 0 < alpha < 1");
    if (k < 1) throw validation_error("curve needs k >= 1");
    const double ak = std::pow(alpha, double(k));
    return 2.0 * alpha + ak - 2.0 * ak * alpha;
}

// Regret of a rule outcome with per-elicitation cost c: expected cost plus
// c * k * m, minus the optimal social cost.
inline double regret(double expected_cost, double optimal_cost, double c, long long k,
                     long long m) {
    if (!(c > 0.0)) throw validation_error("regret needs c > 0");
    return expected_cost + c * double(k) * double(m) - optimal_cost;
}

struct RegretScanRow {
    long long k = 0;
    double worst_regret = 0.0;  // max over one-issue profiles of regret at this k
    double worst_excess = 0.0;  // the c-independent part: max_n1 pi (n - 2 n1)
    long long worst_n1 = 0;
};

struct RegretScanResult {
    long long best_k = 0;
    std::vector<RegretScanRow> table;  // in k_grid order
};

// Worst-case one-issue regret per committee size (the one-issue family is the
// right worst case: cloning issues scales cost and optimum alike), minimized
// over the grid.
inline RegretScanResult optimal_k_scan(long long n, double c,
                                       const std::vector<long long>& k_grid) {
    if (!(c > 0.0)) throw validation_error("regret scan needs c > 0");
    if (k_grid.empty()) throw validation_error("regret scan needs a nonempty k grid");
    RegretScanResult result;
    result.table.reserve(k_grid.size());
    double best = 0.0;
    for (const long long k : k_grid) {
        const OneIssueRegretExcess excess = worst_one_issue_regret_excess(n, k);
        RegretScanRow row;
        row.k = k;
        row.worst_excess = excess.excess;
        row.worst_n1 = excess.worst_n1;
        row.worst_regret = excess.excess + c * double(k);  // m = 1
        if (result.table.empty() || row.worst_regret < best) {
            best = row.worst_regret;
            result.best_k = k;
        }
        result.table.push_back(row);
    }
    return result;
}

inline std::vector<long long> default_k_grid(long long n, long long step = 8,
                                             long long k_max = -1) {
    if (k_max < 1 || k_max > n / 2) k_max = n / 2;
    std::vector<long long> grid;
    for (long long k = step; k <= k_max; k += step) grid.push_back(k);
    if (grid.empty()) grid.push_back(1);
    return grid;
}

// Scaling probe for the optimal committee size: compares argmin k at n and 8n.
// An exponent of 2/3 makes the ratio 8^{2/3} = 4; [2.8, 5.8] brackets it.
struct ScalingCheck {
    long long n_small = 0, n_large = 0;
    long long k_small = 0, k_large = 0;
    double ratio = 0.0;
    bool consistent = false;
};

// Grids only need to reach k with c * k above the best regret seen: regret is
// at least c * k, so grid points beyond that can never win. The scan widens
// the grid until the argmin is interior.
inline long long optimal_k_interior(long long n, double c, long long grid_step) {
    long long k_max = std::max<long long>(4 * grid_step, 512);
    for (;;) {
        const auto grid = default_k_grid(n, grid_step, k_max);
        const RegretScanResult scan = optimal_k_scan(n, c, grid);
        double best_regret = 0.0;
        for (const auto& row : scan.table)
            if (row.k == scan.best_k) best_regret = row.worst_regret;
        if (scan.best_k != grid.back() && c * double(grid.back()) >= best_regret)
            return scan.best_k;
        if (k_max >= n / 2) return scan.best_k;
        k_max = std::min(n / 2, k_max * 4);
    }
}

inline ScalingCheck regret_scaling_check(long long n, double c, long long grid_step = 8) {
    ScalingCheck check;
    check.n_small = n;
    check.n_large = 8 * n;
    check.k_small = optimal_k_interior(n, c, grid_step);
    check.k_large = optimal_k_interior(8 * n, c, grid_step);
    check.ratio = double(check.k_large) / double(check.k_small);
    check.consistent = check.ratio >= 2.8 && check.ratio <= 5.8;
    return check;
}

// Report row shared by the bound emitters: the observed value, when present,
// is checked against the bound on the right side.
struct BoundReport {
    std::string name;
    std::vector<std::pair<std::string, double>> params;
    double bound_value = 0.0;
    bool upper = true;  // false = lower bound
    std::optional<double> compared_to;
    std::optional<bool> satisfied;
};

inline BoundReport make_bound_report(std::string name,
                                     std::vector<std::pair<std::string, double>> params,
                                     double bound_value, bool upper,
                                     std::optional<double> observed = std::nullopt) {
    BoundReport report;
    report.name = std::move(name);
    report.params = std::move(params);
    report.bound_value = bound_value;
    report.upper = upper;
    report.compared_to = observed;
    if (observed)
        report.satisfied = upper ? *observed <= bound_value : *observed >= bound_value;
    return report;
}

}  // namespace sortition
