#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "sortition/errors.hpp"
#include "sortition/profile.hpp"

namespace sortition {

// Length-m 0/1 decision vector.
using OutcomeVector = std::vector<std::uint8_t>;

inline long long hamming(const OutcomeVector& a, const OutcomeVector& b) {
    if (a.size() != b.size()) throw validation_error("hamming: length mismatch");
    long long d = 0;
    for (std::size_t j = 0; j < a.size(); ++j) d += (a[j] != b[j]);
    return d;
}

// Total number of voter-outcome disagreements.
inline long long social_cost(const PreferenceProfile& x, const OutcomeVector& z) {
    if (int(z.size()) != x.issues()) throw validation_error("social_cost: outcome length mismatch");
    long long cost = 0;
    for (int i = 0; i < x.voters(); ++i) {
        const std::uint8_t* r = x.row(i);
        for (int j = 0; j < x.issues(); ++j) cost += (r[j] != z[j]);
    }
    return cost;
}

struct OptimalOutcome {
    OutcomeVector outcome;
    long long cost = 0;
};

// Issue-wise population majority: z_j = 1 iff strictly more than n/2 voters
// hold 1; exact ties report 0 (the cost is tie-invariant, only the reported
// vector needs a convention). cost = sum_j min(n1_j, n - n1_j).
inline OptimalOutcome optimal_outcome(const PreferenceProfile& x) {
    const long long n = x.voters();
    const auto supports = x.column_supports();
    OptimalOutcome best;
    best.outcome.resize(x.issues());
    for (int j = 0; j < x.issues(); ++j) {
        const long long s = supports[j];
        best.outcome[j] = std::uint8_t(2 * s > n);
        best.cost += std::min<long long>(s, n - s);
    }
    return best;
}

inline DistanceMatrix distance_matrix(const PreferenceProfile& x) {
    const int n = x.voters();
    const int w = x.words_per_row();
    const auto packed = x.packed_rows();
    DistanceMatrix d;
    d.n = n;
    d.d.assign(std::size_t(n) * n, 0);
    for (int i = 0; i < n; ++i) {
        const std::uint64_t* ri = packed.data() + std::size_t(i) * w;
        for (int j = i + 1; j < n; ++j) {
            const std::uint64_t* rj = packed.data() + std::size_t(j) * w;
            long long dist = 0;
            for (int t = 0; t < w; ++t) dist += std::popcount(ri[t] ^ rj[t]);
            d.d[std::size_t(i) * n + j] = dist;
            d.d[std::size_t(j) * n + i] = dist;
        }
    }
    return d;
}

// Ratio of expected to optimal social cost under the 0/0 = 1 and C/0 = +inf
// agreement. Infinity is a tagged state, not a float special that appeared by
// accident; `value` is set to +inf for convenience but never NaN.
struct CostRatio {
    double numerator = 0.0;
    double denominator = 0.0;
    bool infinite = false;
    double value = 1.0;
};

inline CostRatio cost_ratio(double expected_cost, double optimal_cost) {
    if (!(expected_cost >= 0.0) || !(optimal_cost >= 0.0))
        throw validation_error("cost_ratio: costs must be nonnegative");
    CostRatio r;
    r.numerator = expected_cost;
    r.denominator = optimal_cost;
    if (optimal_cost > 0.0) {
        r.value = expected_cost / optimal_cost;
    } else if (expected_cost == 0.0) {
        r.value = 1.0;  // 0/0 = 1
    } else {
        r.infinite = true;
        r.value = std::numeric_limits<double>::infinity();
    }
    return r;
}

}  // namespace sortition
