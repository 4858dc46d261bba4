#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "sortition/caps.hpp"
#include "sortition/errors.hpp"
#include "sortition/exact.hpp"
#include "sortition/metrics.hpp"
#include "sortition/parallel.hpp"
#include "sortition/profile.hpp"
#include "sortition/rng.hpp"
#include "sortition/rules.hpp"

namespace sortition {

struct MCEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long long samples = 0;
    double ci_low = 0.0, ci_high = 0.0;  // mean +- 1.96 std_error
    std::uint64_t seed = 0;
};

struct RuleSpec {
    RuleId id;
    int k = 1;  // ignored for maj and rd
};

namespace detail {

// One realized outcome's social cost. The stream order per sample is fixed:
// committee draws first, then tie coin-flips in issue index order, so runs
// replay identically at any parallelism level.
struct MCContext {
    const PreferenceProfile& x;
    const std::vector<long long>& supports;
    RuleSpec rule;
    const std::vector<std::uint64_t>& packed;  // for krep distances
    const MinDistRule* mindist = nullptr;      // optima, for RuleId::mindist
};

inline long long mc_sample_cost(const MCContext& ctx, Rng& rng, std::vector<int>& pool,
                                std::vector<int>& members) {
    const PreferenceProfile& x = ctx.x;
    const long long n = x.voters();
    const int m = x.issues();
    long long cost = 0;
    const auto issue_cost = [&](int j, bool one) {
        return one ? n - ctx.supports[j] : ctx.supports[j];
    };
    switch (ctx.rule.id) {
        case RuleId::maj: {
            for (int j = 0; j < m; ++j) {
                const long long s = ctx.supports[j];
                const bool one = 2 * s > n || (2 * s == n && rng.bernoulli(0.5));
                cost += issue_cost(j, one);
            }
            return cost;
        }
        case RuleId::rd: {
            rng.draw_prefix(pool, 1);
            const std::uint8_t* r = x.row(pool[0]);
            for (int j = 0; j < m; ++j) cost += issue_cost(j, r[j] != 0);
            return cost;
        }
        case RuleId::kmaj: {
            const int k = ctx.rule.k;
            rng.draw_prefix(pool, std::size_t(k));
            for (int j = 0; j < m; ++j) {
                int ones = 0;
                for (int t = 0; t < k; ++t) ones += x.at(pool[t], j);
                const bool one = 2 * ones > k || (2 * ones == k && rng.bernoulli(0.5));
                cost += issue_cost(j, one);
            }
            return cost;
        }
        case RuleId::krep: {
            const int k = ctx.rule.k;
            rng.draw_prefix(pool, std::size_t(k));
            members.assign(pool.begin(), pool.begin() + k);
            const auto dist =
                distances_to_members_packed(ctx.packed, int(n), x.words_per_row(), members);
            const DelegationWeights w = delegation_from_distances(dist, int(n), k);
            if (w.exact) {
                const __int128 total = (__int128)n * w.scale;
                for (int j = 0; j < m; ++j) {
                    __int128 ones = 0;
                    for (int t = 0; t < k; ++t)
                        if (x.at(members[t], j)) ones += w.scaled[t];
                    const __int128 margin = 2 * ones - total;
                    const bool one = margin > 0 || (margin == 0 && rng.bernoulli(0.5));
                    cost += issue_cost(j, one);
                }
            } else {
                double total = 0.0;
                for (const double v : w.value) total += v;
                for (int j = 0; j < m; ++j) {
                    double ones = 0.0;
                    for (int t = 0; t < k; ++t)
                        if (x.at(members[t], j)) ones += w.value[t];
                    const double margin = 2.0 * ones - total;
                    const bool tie = std::abs(margin) <= 1e-12 * total;
                    const bool one = tie ? rng.bernoulli(0.5) : margin > 0.0;
                    cost += issue_cost(j, one);
                }
            }
            return cost;
        }
        case RuleId::mindist: {
            const auto& optima = ctx.mindist->optima;
            const Committee& c = optima[std::size_t(rng.below(optima.size()))];
            const int k = int(c.members.size());
            const bool weighted = !c.weights.empty();
            double total = 0.0;
            for (const double v : c.weights) total += v;
            for (int j = 0; j < m; ++j) {
                bool one;
                if (weighted) {
                    double ones = 0.0;
                    for (int t = 0; t < k; ++t)
                        if (x.at(c.members[t], j)) ones += c.weights[t];
                    const double margin = 2.0 * ones - total;
                    const bool tie = std::abs(margin) <= 1e-12 * total;
                    one = tie ? rng.bernoulli(0.5) : margin > 0.0;
                } else {
                    int ones = 0;
                    for (const int member : c.members) ones += x.at(member, j);
                    one = 2 * ones > k || (2 * ones == k && rng.bernoulli(0.5));
                }
                cost += issue_cost(j, one);
            }
            return cost;
        }
    }
    return 0;
}

}  // namespace detail

// Seeded Monte Carlo estimate of the expected social cost. Samples are
// partitioned over 64 fixed shards with per-shard derived streams and merged
// as exact integer sums, so the estimate is byte-identical for a given
// (profile, rule, samples, seed) at any thread count.
inline MCEstimate mc_expected_cost(const PreferenceProfile& x, RuleSpec rule, long long samples,
                                   std::uint64_t seed, int threads = 1,
                                   const Caps& caps = Caps{}) {
    if (samples < 2) throw validation_error("monte carlo needs samples >= 2");
    if (rule.id == RuleId::maj || rule.id == RuleId::rd) rule.k = 1;
    if (rule.k < 1 || rule.k > x.voters())
        throw validation_error("monte carlo needs 1 <= k <= n");

    const auto supports = x.column_supports();
    const auto packed =
        rule.id == RuleId::krep ? x.packed_rows() : std::vector<std::uint64_t>{};
    MinDistRule mindist;
    if (rule.id == RuleId::mindist)
        mindist = mindist_committee_rule(x, rule.k, caps.enumeration_cap);
    const detail::MCContext ctx{x, supports, rule, packed,
                                rule.id == RuleId::mindist ? &mindist : nullptr};

    const long long shards = std::min<long long>(64, samples);
    std::vector<__int128> shard_sum(shards, 0), shard_sumsq(shards, 0);
    parallel_for(shards, threads, [&](long long s) {
        Rng rng = Rng::derived(seed, std::uint64_t(s));
        std::vector<int> pool(x.voters());
        std::iota(pool.begin(), pool.end(), 0);
        std::vector<int> members;
        const long long begin = samples * s / shards;
        const long long end = samples * (s + 1) / shards;
        __int128 sum = 0, sumsq = 0;
        for (long long i = begin; i < end; ++i) {
            const long long cost = detail::mc_sample_cost(ctx, rng, pool, members);
            sum += cost;
            sumsq += (__int128)cost * cost;
        }
        shard_sum[s] = sum;
        shard_sumsq[s] = sumsq;
    });

    __int128 sum = 0, sumsq = 0;
    for (long long s = 0; s < shards; ++s) {
        sum += shard_sum[s];
        sumsq += shard_sumsq[s];
    }
    const long double n = (long double)samples;
    const long double mean = (long double)sum / n;
    long double var = ((long double)sumsq - (long double)sum * (long double)sum / n) / (n - 1.0L);
    if (var < 0.0L) var = 0.0L;  // rounding guard for constant samples
    MCEstimate est;
    est.mean = double(mean);
    est.std_error = double(std::sqrt(var / n));
    est.samples = samples;
    est.ci_low = est.mean - 1.96 * est.std_error;
    est.ci_high = est.mean + 1.96 * est.std_error;
    est.seed = seed;
    return est;
}

// Monte Carlo cost estimate paired with the ratio against the exact optimum
// (the denominator is never estimated).
inline std::pair<MCEstimate, CostRatio> mc_ratio(const PreferenceProfile& x, RuleSpec rule,
                                                 long long samples, std::uint64_t seed,
                                                 int threads = 1, const Caps& caps = Caps{}) {
    const MCEstimate est = mc_expected_cost(x, rule, samples, seed, threads, caps);
    return {est, cost_ratio(est.mean, double(optimal_outcome(x).cost))};
}

// EvalReport view of a Monte Carlo run, for the common report format.
inline EvalReport mc_eval_report(const PreferenceProfile& x, RuleSpec rule, long long samples,
                                 std::uint64_t seed, int threads = 1, const Caps& caps = Caps{}) {
    const auto [est, ratio] = mc_ratio(x, rule, samples, seed, threads, caps);
    EvalReport report;
    report.expected_cost = est.mean;
    report.optimal_cost = ratio.denominator;
    report.ratio = ratio;
    report.method = EvalMethod::monte_carlo;
    report.samples = est.samples;
    report.seed = est.seed;
    report.std_error = est.std_error;
    report.ci_low = est.ci_low;
    report.ci_high = est.ci_high;
    return report;
}

}  // namespace sortition
