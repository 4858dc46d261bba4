#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sortition/caps.hpp"
#include "sortition/errors.hpp"
#include "sortition/metrics.hpp"
#include "sortition/profile.hpp"
#include "sortition/rng.hpp"

namespace sortition {

// A size-k subset of the voters, optionally carrying per-member weights.
struct Committee {
    std::vector<int> members;     // sorted, distinct voter indices
    std::vector<double> weights;  // empty = unweighted; else one positive weight per member
};

inline void validate_committee(const PreferenceProfile& x, const Committee& c) {
    if (c.members.empty()) throw validation_error("committee must have k >= 1 members");
    for (std::size_t i = 0; i < c.members.size(); ++i) {
        if (c.members[i] < 0 || c.members[i] >= x.voters())
            throw validation_error("committee member index out of range");
        if (i > 0 && c.members[i] <= c.members[i - 1])
            throw validation_error("committee members must be sorted and distinct");
    }
    if (!c.weights.empty()) {
        if (c.weights.size() != c.members.size())
            throw validation_error("committee weights must match member count");
        for (const double w : c.weights)
            if (!(w > 0.0)) throw validation_error("committee weights must be positive");
    }
}

enum class RuleId { maj, rd, kmaj, krep, mindist };

inline std::optional<RuleId> parse_rule_id(std::string_view s) {
    if (s == "maj") return RuleId::maj;
    if (s == "rd") return RuleId::rd;
    if (s == "kmaj") return RuleId::kmaj;
    if (s == "krep") return RuleId::krep;
    if (s == "mindist") return RuleId::mindist;
    return std::nullopt;
}

inline std::string rule_id_name(RuleId id) {
    switch (id) {
        case RuleId::maj: return "maj";
        case RuleId::rd: return "rd";
        case RuleId::kmaj: return "kmaj";
        case RuleId::krep: return "krep";
        case RuleId::mindist: return "mindist";
    }
    return "?";
}

// Expected social cost of an issue-wise outcome distribution given per-issue
// probabilities of deciding 1. Linearity makes this exact regardless of any
// dependence between issues.
inline double expected_social_cost(const std::vector<long long>& supports, long long n,
                                   const std::vector<double>& probs) {
    if (probs.size() != supports.size())
        throw validation_error("expected_social_cost: probability vector length mismatch");
    long double cost = 0.0L;
    for (std::size_t j = 0; j < probs.size(); ++j)
        cost += probs[j] * (n - supports[j]) + (1.0 - probs[j]) * supports[j];
    return double(cost);
}

inline double expected_social_cost(const PreferenceProfile& x, const std::vector<double>& probs) {
    return expected_social_cost(x.column_supports(), x.voters(), probs);
}

// Whole-population referendum: per issue 1 on strict majority, 0 on strict
// minority, 1/2 on an exact tie.
inline std::vector<double> maj_outcome_probs(const PreferenceProfile& x) {
    const long long n = x.voters();
    const auto supports = x.column_supports();
    std::vector<double> probs(x.issues());
    for (int j = 0; j < x.issues(); ++j) {
        const long long s = supports[j];
        probs[j] = 2 * s > n ? 1.0 : (2 * s < n ? 0.0 : 0.5);
    }
    return probs;
}

inline double maj_expected_cost(const PreferenceProfile& x) {
    return expected_social_cost(x, maj_outcome_probs(x));
}

// Random dictator: (1/n) sum_i SC(x_i) = (2/n) sum_j s_j (n - s_j), computed
// from exact integer sums.
inline double rd_expected_cost(const PreferenceProfile& x) {
    const long long n = x.voters();
    long long total = 0;
    for (const long long s : x.column_supports()) total += s * (n - s);
    return 2.0 * double(total) / double(n);
}

// Uniform k-subset of [n]; deterministic in the seed; unweighted.
inline Committee sample_committee_uniform(int n, int k, std::uint64_t seed) {
    if (k < 1 || k > n) throw validation_error("committee sampling needs 1 <= k <= n");
    Rng rng(seed);
    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    rng.draw_prefix(pool, std::size_t(k));
    Committee c;
    c.members.assign(pool.begin(), pool.begin() + k);
    std::sort(c.members.begin(), c.members.end());
    return c;
}

// Per-issue majority vote of the committee members, weighted when weights are
// present: z_j = 1 iff the supporters of 1 hold more than half the weight,
// ties give 1/2. Weighted ties are detected with a relative tolerance
// (weights built from unit fractions can alias near-ties in floats).
inline std::vector<double> committee_majority_probs(const PreferenceProfile& x, const Committee& c,
                                                    double tie_tolerance = 1e-12) {
    validate_committee(x, c);
    const int k = int(c.members.size());
    std::vector<double> probs(x.issues());
    if (c.weights.empty()) {
        for (int j = 0; j < x.issues(); ++j) {
            int ones = 0;
            for (const int member : c.members) ones += x.at(member, j);
            probs[j] = 2 * ones > k ? 1.0 : (2 * ones < k ? 0.0 : 0.5);
        }
    } else {
        double total = 0.0;
        for (const double w : c.weights) total += w;
        for (int j = 0; j < x.issues(); ++j) {
            double ones = 0.0;
            for (int t = 0; t < k; ++t)
                if (x.at(c.members[t], j)) ones += c.weights[t];
            const double margin = 2.0 * ones - total;
            probs[j] = std::abs(margin) <= tie_tolerance * total ? 0.5 : (margin > 0.0 ? 1.0 : 0.0);
        }
    }
    return probs;
}

// Delegation weights of weighted k-sortition. Every voter (members included)
// splits one unit of weight equally over their closest committee members by
// Hamming distance, so the weights sum to n exactly. When the least common
// multiple of the tie-set sizes fits, weights are tracked as exact scaled
// integers; otherwise the double values carry a 1e-12 tie tolerance downstream.
struct DelegationWeights {
    std::vector<double> value;       // per member, sums to n
    std::vector<long long> scaled;   // value * scale when exact, else empty
    long long scale = 1;
    bool exact = false;
};

namespace detail {

// Distances from every voter to each committee member, one row per voter.
inline std::vector<long long> distances_to_members_packed(const std::vector<std::uint64_t>& packed,
                                                          int n, int w,
                                                          const std::vector<int>& members) {
    const int k = int(members.size());
    std::vector<long long> dist(std::size_t(n) * k);
    for (int t = 0; t < k; ++t) {
        const std::uint64_t* rm = packed.data() + std::size_t(members[t]) * w;
        for (int i = 0; i < n; ++i) {
            const std::uint64_t* ri = packed.data() + std::size_t(i) * w;
            long long d = 0;
            for (int u = 0; u < w; ++u) d += std::popcount(ri[u] ^ rm[u]);
            dist[std::size_t(i) * k + t] = d;
        }
    }
    return dist;
}

inline std::vector<long long> distances_to_members(const PreferenceProfile& x,
                                                   const std::vector<int>& members) {
    return distances_to_members_packed(x.packed_rows(), x.voters(), x.words_per_row(), members);
}

inline std::vector<long long> distances_to_members(const DistanceMatrix& dm,
                                                   const std::vector<int>& members) {
    const int n = dm.n, k = int(members.size());
    std::vector<long long> dist(std::size_t(n) * k);
    for (int i = 0; i < n; ++i)
        for (int t = 0; t < k; ++t) dist[std::size_t(i) * k + t] = dm.at(i, members[t]);
    return dist;
}

inline DelegationWeights delegation_from_distances(const std::vector<long long>& dist, int n,
                                                   int k) {
    // Pass 1: tie-set sizes and the lcm scale.
    std::vector<int> tie_size(n);
    long long scale = 1;
    bool exact = true;
    const long long scale_limit = (1LL << 62) / (n + 1);
    for (int i = 0; i < n; ++i) {
        const long long* row = dist.data() + std::size_t(i) * k;
        long long best = row[0];
        for (int t = 1; t < k; ++t) best = std::min(best, row[t]);
        int ties = 0;
        for (int t = 0; t < k; ++t) ties += (row[t] == best);
        tie_size[i] = ties;
        if (exact) {
            const long long g = std::gcd(scale, (long long)ties);
            if (scale / g > scale_limit / ties)
                exact = false;
            else
                scale = scale / g * ties;
        }
    }
    DelegationWeights out;
    out.exact = exact;
    out.scale = exact ? scale : 1;
    if (exact) out.scaled.assign(k, 0);
    out.value.assign(k, 0.0);
    // Pass 2: distribute each voter's unit.
    for (int i = 0; i < n; ++i) {
        const long long* row = dist.data() + std::size_t(i) * k;
        long long best = row[0];
        for (int t = 1; t < k; ++t) best = std::min(best, row[t]);
        for (int t = 0; t < k; ++t) {
            if (row[t] != best) continue;
            if (exact) out.scaled[t] += scale / tie_size[i];
            out.value[t] += 1.0 / tie_size[i];
        }
    }
    if (exact)
        for (int t = 0; t < k; ++t) out.value[t] = double(out.scaled[t]) / double(scale);
    return out;
}

}  // namespace detail

inline DelegationWeights delegation_weights(const PreferenceProfile& x,
                                            const std::vector<int>& members) {
    if (members.empty()) throw validation_error("delegation needs a nonempty member set");
    return detail::delegation_from_distances(detail::distances_to_members(x, members), x.voters(),
                                             int(members.size()));
}

inline DelegationWeights delegation_weights(const DistanceMatrix& dm,
                                            const std::vector<int>& members) {
    if (members.empty()) throw validation_error("delegation needs a nonempty member set");
    return detail::delegation_from_distances(detail::distances_to_members(dm, members), dm.n,
                                             int(members.size()));
}

namespace detail {

// Weighted majority per issue under delegation weights. Uses the exact scaled
// integers when available, so weight ties are decided exactly.
inline std::vector<double> krep_probs_from_weights(const PreferenceProfile& x,
                                                   const std::vector<int>& members,
                                                   const DelegationWeights& w) {
    const int k = int(members.size());
    std::vector<double> probs(x.issues());
    if (w.exact) {
        const __int128 total = (__int128)x.voters() * w.scale;
        for (int j = 0; j < x.issues(); ++j) {
            __int128 ones = 0;
            for (int t = 0; t < k; ++t)
                if (x.at(members[t], j)) ones += w.scaled[t];
            const __int128 margin = 2 * ones - total;
            probs[j] = margin == 0 ? 0.5 : (margin > 0 ? 1.0 : 0.0);
        }
        return probs;
    }
    Committee c{members, w.value};
    return committee_majority_probs(x, c);
}

}  // namespace detail

// Weighted k-sortition outcome distribution for a fixed committee: delegation
// weights composed with the weighted majority vote.
inline std::vector<double> krep_outcome_probs(const PreferenceProfile& x,
                                              const std::vector<int>& members) {
    return detail::krep_probs_from_weights(x, members, delegation_weights(x, members));
}

inline std::vector<double> krep_outcome_probs(const PreferenceProfile& x, const DistanceMatrix& dm,
                                              const std::vector<int>& members) {
    return detail::krep_probs_from_weights(x, members, delegation_weights(dm, members));
}

// The min-total-distance committee rule: uniform over the committees
// minimizing sum_i min_{c in C} d(x_i, x_c), each voting by weighted majority
// with weights w_c = sum_i d(x_i, x_c).
struct MinDistRule {
    std::vector<Committee> optima;  // weights attached; outcome is uniform over these
    long long best_total_distance = 0;
    long long committees_enumerated = 0;
};

namespace detail {

// Visits all k-subsets of [n] in lexicographic order.
template <typename Visit>
void for_each_combination(int n, int k, Visit&& visit) {
    std::vector<int> members(k);
    std::iota(members.begin(), members.end(), 0);
    const std::vector<int>& view = members;
    for (;;) {
        visit(view);
        int i = k - 1;
        while (i >= 0 && members[i] == n - k + i) --i;
        if (i < 0) return;
        ++members[i];
        for (int j = i + 1; j < k; ++j) members[j] = members[j - 1] + 1;
    }
}

// C(n,k) clamped to cap+1 to keep the overflow check cheap.
inline long long binomial_clamped(long long n, long long k, long long cap) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    long long c = 1;
    for (long long i = 1; i <= k; ++i) {
        if (c > cap || c > (1LL << 61) / (n + 1)) return cap + 1;
        c = c * (n - k + i) / i;  // exact: product of i consecutive integers
    }
    return std::min(c, cap + 1);
}

}  // namespace detail

inline MinDistRule mindist_committee_rule(const PreferenceProfile& x, int k,
                                          long long enumeration_cap = Caps{}.enumeration_cap) {
    const int n = x.voters();
    if (k < 1 || k > n) throw validation_error("mindist rule needs 1 <= k <= n");
    const long long count = detail::binomial_clamped(n, k, enumeration_cap);
    if (count > enumeration_cap)
        throw cap_exceeded("mindist rule: C(n,k) exceeds the enumeration cap of " +
                           std::to_string(enumeration_cap));
    const DistanceMatrix dm = distance_matrix(x);
    std::vector<long long> column_sum(n, 0);  // w_c = sum_i d(x_i, x_c)
    for (int c = 0; c < n; ++c)
        for (int i = 0; i < n; ++i) column_sum[c] += dm.at(i, c);

    MinDistRule rule;
    rule.best_total_distance = -1;
    detail::for_each_combination(n, k, [&](const std::vector<int>& members) {
        ++rule.committees_enumerated;
        long long total = 0;
        for (int i = 0; i < n; ++i) {
            long long best = dm.at(i, members[0]);
            for (int t = 1; t < k; ++t) best = std::min(best, dm.at(i, members[t]));
            total += best;
        }
        if (rule.best_total_distance < 0 || total < rule.best_total_distance) {
            rule.best_total_distance = total;
            rule.optima.clear();
        }
        if (total == rule.best_total_distance) {
            Committee c;
            c.members = members;
            // A zero distance-sum weight only happens when every voter is
            // identical; fall back to the unweighted vote there (equal
            // weights and no weights decide identically).
            bool positive = true;
            for (const int member : members) positive = positive && column_sum[member] > 0;
            if (positive) {
                c.weights.reserve(k);
                for (const int member : members) c.weights.push_back(double(column_sum[member]));
            }
            rule.optima.push_back(std::move(c));
        }
    });
    return rule;
}

// Expected cost of the mindist rule: exact average over the argmin committees.
inline double mindist_expected_cost(const PreferenceProfile& x, const MinDistRule& rule) {
    const auto supports = x.column_supports();
    long double acc = 0.0L;
    for (const Committee& c : rule.optima)
        acc += expected_social_cost(supports, x.voters(), committee_majority_probs(x, c));
    return double(acc / (long double)rule.optima.size());
}

}  // namespace sortition
