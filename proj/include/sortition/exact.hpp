#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "sortition/caps.hpp"
#include "sortition/errors.hpp"
#include "sortition/hypergeom.hpp"
#include "sortition/metrics.hpp"
#include "sortition/profile.hpp"
#include "sortition/rng.hpp"
#include "sortition/rules.hpp"

namespace sortition {

enum class EvalMethod { exact_hypergeometric, exact_enumeration, monte_carlo };

inline std::string eval_method_name(EvalMethod m) {
    switch (m) {
        case EvalMethod::exact_hypergeometric: return "exact-hypergeometric";
        case EvalMethod::exact_enumeration: return "exact-enumeration";
        case EvalMethod::monte_carlo: return "monte-carlo";
    }
    return "?";
}

struct EvalReport {
    double expected_cost = 0.0;
    double optimal_cost = 0.0;
    CostRatio ratio;
    EvalMethod method = EvalMethod::exact_hypergeometric;
    // method-specific detail
    long long committees = -1;    // exact-enumeration
    long long columns = -1;       // exact-hypergeometric
    long long samples = -1;       // monte-carlo
    std::uint64_t seed = 0;       // monte-carlo
    double std_error = -1.0;      // monte-carlo
    double ci_low = 0.0, ci_high = 0.0;
};

// Exact expected cost of k-sortition. The same random committee votes on all
// issues, but expectations decompose by linearity: per issue, the chance of
// deciding 1 is the hypergeometric majority probability of its support count.
inline EvalReport kmaj_expected_cost_exact(const PreferenceProfile& x, int k,
                                           int exact_max_n = Caps{}.exact_binomial_max_n) {
    const long long n = x.voters();
    if (k < 1 || k > n) throw validation_error("k-sortition needs 1 <= k <= n");
    std::unordered_map<long long, double> pi_by_support;
    long double cost = 0.0L;
    for (const long long s : x.column_supports()) {
        auto it = pi_by_support.find(s);
        if (it == pi_by_support.end()) {
            const double pi = p_committee_selects_one({n, s, k}, exact_max_n);
            it = pi_by_support.emplace(s, pi).first;
        }
        const double pi = it->second;
        cost += (1.0 - pi) * s + pi * (n - s);
    }
    EvalReport report;
    report.expected_cost = double(cost);
    report.optimal_cost = double(optimal_outcome(x).cost);
    report.ratio = cost_ratio(report.expected_cost, report.optimal_cost);
    report.method = EvalMethod::exact_hypergeometric;
    report.columns = x.issues();
    return report;
}

// Brute-force oracle: exact average of the per-committee expected cost over
// all C(n,k) committees, ties counted as half-half mixtures.
inline EvalReport enumerate_expected_cost(const PreferenceProfile& x, int k, RuleId rule,
                                          long long enumeration_cap = Caps{}.enumeration_cap) {
    const int n = x.voters();
    if (k < 1 || k > n) throw validation_error("committee enumeration needs 1 <= k <= n");
    if (rule != RuleId::kmaj && rule != RuleId::krep)
        throw validation_error("enumeration oracle covers kmaj and krep only");
    const long long count = detail::binomial_clamped(n, k, enumeration_cap);
    if (count > enumeration_cap)
        throw cap_exceeded("C(n,k) exceeds the enumeration cap of " +
                           std::to_string(enumeration_cap));
    const auto supports = x.column_supports();
    const DistanceMatrix dm = rule == RuleId::krep ? distance_matrix(x) : DistanceMatrix{};
    long double acc = 0.0L;
    long long committees = 0;
    detail::for_each_combination(n, k, [&](const std::vector<int>& members) {
        ++committees;
        const std::vector<double> probs =
            rule == RuleId::kmaj ? committee_majority_probs(x, Committee{members, {}})
                                 : krep_outcome_probs(x, dm, members);
        acc += expected_social_cost(supports, n, probs);
    });
    EvalReport report;
    report.expected_cost = double(acc / (long double)committees);
    report.optimal_cost = double(optimal_outcome(x).cost);
    report.ratio = cost_ratio(report.expected_cost, report.optimal_cost);
    report.method = EvalMethod::exact_enumeration;
    report.committees = committees;
    return report;
}

struct OneIssueAr {
    double ratio = 1.0;
    long long worst_n1 = 0;  // 0 = the unanimity baseline was never beaten
};

// Worst-case one-issue approximation ratio of k-sortition: exact scan over all
// minority sizes n1 in {1..floor(n/2)} plus the ratio-1 unanimity baseline.
inline OneIssueAr ar_one_issue_kmaj(long long n, long long k) {
    if (k < 1 || k > n) throw validation_error("ar_one_issue_kmaj needs 1 <= k <= n");
    OneIssueAr best;
    long double best_ratio = 1.0L;
    detail::one_issue_pi_scan(n, k, [&](long long n1, long double pi) {
        const long double ratio = 1.0L + pi * (long double)(n - 2 * n1) / (long double)n1;
        if (ratio > best_ratio) {
            best_ratio = ratio;
            best.worst_n1 = n1;
        }
    });
    best.ratio = double(best_ratio);
    return best;
}

// max over n1 of pi * (n - 2 n1): the worst-case one-issue expected-cost
// excess of k-sortition over the optimum (the c-independent part of regret).
struct OneIssueRegretExcess {
    double excess = 0.0;
    long long worst_n1 = 0;
};

inline OneIssueRegretExcess worst_one_issue_regret_excess(long long n, long long k) {
    if (k < 1 || k > n) throw validation_error("regret scan needs 1 <= k <= n");
    OneIssueRegretExcess best;
    long double best_excess = 0.0L;
    detail::one_issue_pi_scan(n, k, [&](long long n1, long double pi) {
        const long double excess = pi * (long double)(n - 2 * n1);
        if (excess > best_excess) {
            best_excess = excess;
            best.worst_n1 = n1;
        }
    });
    best.excess = double(best_excess);
    return best;
}

// The issue-wise threshold family h_q of the optimality argument: minimize the
// summed social cost over an equidistant profile and its complement by
// comparing the coefficients C(n1,q) C(n-n1,k-q) against C(n-n1,q) C(n1,k-q).
enum class ThresholdChoice { zero, one, free_tie };

inline std::vector<ThresholdChoice> optimal_issue_wise_thresholds(long long n, long long n1,
                                                                  long long k) {
    if (n1 < 1 || 2 * n1 > n) throw validation_error("thresholds need 1 <= n1 <= n/2");
    if (k < 1 || k > n) throw validation_error("thresholds need 1 <= k <= n");
    std::vector<ThresholdChoice> h(std::size_t(k) + 1);
    for (long long q = 0; q <= k; ++q) {
        const BigUint direct = big_binomial(n1, q).mul(big_binomial(n - n1, k - q));
        const BigUint flipped = big_binomial(n - n1, q).mul(big_binomial(n1, k - q));
        const auto cmp = direct <=> flipped;
        h[q] = cmp > 0 ? ThresholdChoice::zero
                       : (cmp < 0 ? ThresholdChoice::one : ThresholdChoice::free_tie);
    }
    return h;
}

// q positions (other than an exact k/2 tie) where the optimal thresholds
// differ from the simple majority rule. free_tie never counts as a deviation:
// majority is among the optima there.
inline std::vector<long long> majority_threshold_deviations(const std::vector<ThresholdChoice>& h) {
    const long long k = (long long)h.size() - 1;
    std::vector<long long> deviations;
    for (long long q = 0; q <= k; ++q) {
        if (2 * q == k) continue;
        const bool majority_one = 2 * q > k;
        if (h[q] == ThresholdChoice::free_tie) continue;
        if ((h[q] == ThresholdChoice::one) != majority_one) deviations.push_back(q);
    }
    return deviations;
}

// Average expected cost of a rule over voter permutations of the profile:
// exact n! average for n <= exact_max_n, seeded sampling beyond. The rule is
// any expected-cost evaluator; anonymous rules must be invariant under this.
inline double permutation_average_cost(
    const PreferenceProfile& x, const std::function<double(const PreferenceProfile&)>& rule_cost,
    long long samples, std::uint64_t seed, int exact_max_n = 7) {
    if (samples < 1) throw validation_error("permutation average needs samples >= 1");
    const int n = x.voters(), m = x.issues();
    const auto permuted = [&](const std::vector<int>& perm) {
        std::vector<std::uint8_t> bits(std::size_t(n) * m);
        for (int i = 0; i < n; ++i)
            std::copy(x.row(perm[i]), x.row(perm[i]) + m, bits.begin() + std::size_t(i) * m);
        return PreferenceProfile(n, m, std::move(bits));
    };
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    long double acc = 0.0L;
    long long used = 0;
    if (n <= exact_max_n) {
        do {
            acc += rule_cost(permuted(perm));
            ++used;
        } while (std::next_permutation(perm.begin(), perm.end()));
    } else {
        Rng rng(seed);
        for (long long s = 0; s < samples; ++s) {
            rng.draw_prefix(perm, perm.size());
            acc += rule_cost(permuted(perm));
            ++used;
        }
    }
    return double(acc / (long double)used);
}

}  // namespace sortition
