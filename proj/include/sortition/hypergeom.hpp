#pragma once

#include <algorithm>
#include <vector>

#include "sortition/bigint.hpp"
#include "sortition/caps.hpp"
#include "sortition/errors.hpp"

namespace sortition {

// Law of the number of minority supporters in a uniformly drawn committee:
// k draws without replacement from a population of n with K successes.
struct HypergeomParams {
    long long population;  // n
    long long successes;   // K, the supporters of alternative 1
    long long draws;       // k, the committee size

    void validate() const {
        if (population < 1) throw validation_error("hypergeometric: population must be >= 1");
        if (successes < 0 || successes > population)
            throw validation_error("hypergeometric: need 0 <= K <= n");
        if (draws < 1 || draws > population)
            throw validation_error("hypergeometric: need 1 <= k <= n");
    }
};

namespace detail {

inline bool hypergeom_feasible(long long n, long long K, long long k, long long q) {
    return q >= 0 && q <= k && q <= K && k - q <= n - K;
}

// pmf via a balanced product of fraction factors in long double: multiply a
// numerator factor while the running value is below 1, divide otherwise, so
// the intermediate never strays far from the final probability and cannot
// overflow. Relative error is a few units of 2^-64 per factor.
inline long double pmf_product(long long n, long long K, long long k, long long q) {
    if (!hypergeom_feasible(n, K, k, q)) return 0.0L;
    // C(K,q) C(n-K,k-q) / C(n,k) = C(k,q) * prod(K-i) * prod(n-K-j) / prod(n-t)
    std::vector<long long> num, den;
    num.reserve(std::size_t(k + q));
    den.reserve(std::size_t(k + q));
    for (long long i = 0; i < q; ++i) num.push_back(K - i);
    for (long long j = 0; j < k - q; ++j) num.push_back(n - K - j);
    for (long long i = 1; i <= q; ++i) {  // C(k,q)
        num.push_back(k - q + i);
        den.push_back(i);
    }
    for (long long t = 0; t < k; ++t) den.push_back(n - t);
    long double r = 1.0L;
    std::size_t ni = 0, di = 0;
    while (ni < num.size() || di < den.size()) {
        if (di == den.size() || (ni < num.size() && r <= 1.0L))
            r *= num[ni++];
        else
            r /= den[di++];
    }
    return r;
}

// Exact integer route: correctly rounded up to the bignum-ratio conversion.
inline double pmf_bigint(long long n, long long K, long long k, long long q) {
    if (!hypergeom_feasible(n, K, k, q)) return 0.0;
    const BigUint num = big_binomial(K, q).mul(big_binomial(n - K, k - q));
    return BigUint::ratio(num, big_binomial(n, k));
}

}  // namespace detail

// C(K,q) C(n-K,k-q) / C(n,k), zero when infeasible. Exact big-integer
// binomials for populations up to exact_max_n, long-double products beyond;
// relative error stays below 1e-12 either way.
inline double hypergeom_pmf(const HypergeomParams& h, long long q,
                            int exact_max_n = Caps{}.exact_binomial_max_n) {
    h.validate();
    if (h.population <= exact_max_n)
        return detail::pmf_bigint(h.population, h.successes, h.draws, q);
    return double(detail::pmf_product(h.population, h.successes, h.draws, q));
}

// Pr(xi > k/2) + (1/2) Pr(xi = k/2): the chance a uniformly random committee's
// majority vote lands on alternative 1, ties split evenly.
inline double p_committee_selects_one(const HypergeomParams& h,
                                      int exact_max_n = Caps{}.exact_binomial_max_n) {
    h.validate();
    const long long n = h.population, K = h.successes, k = h.draws;
    const bool even = (k % 2 == 0);
    const long long first = even ? k / 2 : k / 2 + 1;  // first index with positive weight
    const long long qmax = std::min(k, K);
    if (qmax < first) return 0.0;
    // Start at the feasibility floor so the recurrence never steps across a
    // zero-probability index.
    const long long q0 = std::max(first, k - (n - K));

    long double cur = (n <= exact_max_n) ? (long double)detail::pmf_bigint(n, K, k, q0)
                                         : detail::pmf_product(n, K, k, q0);
    long double acc = (even && q0 == k / 2) ? 0.5L * cur : cur;
    for (long long q = q0; q < qmax; ++q) {
        // pmf(q+1)/pmf(q)
        cur *= (long double)(K - q) * (long double)(k - q) /
               ((long double)(q + 1) * (long double)(n - K - k + q + 1));
        acc += cur;
    }
    if (acc > 1.0L) acc = 1.0L;  // rounding guard: a probability, by construction
    return double(acc);
}

namespace detail {

// Walks K = n1 over the nonzero range up to floor(n/2) and reports
// pi(K) = Pr(xi > k/2) + (1/2) Pr(xi = k/2) for xi ~ Hypergeom(n, K, k).
//
// Incremental in K: recoloring one more ball from white to red couples the
// urns, giving  T(K+1) = T(K) + pmf(t-1; K) * (k-t+1)/(n-K)  for the strict
// tail T = Pr(xi >= t), t = floor(k/2)+1, while the maintained pmf obeys
// pmf(q; K+1) = pmf(q; K) * (K+1)/(K+1-q) * (n-K-k+q)/(n-K). This makes a
// full n1 scan O(n + k) instead of O(n k).
template <typename Visit>
void one_issue_pi_scan(long long n, long long k, Visit&& visit) {
    const long long t = k / 2 + 1;  // smallest strict-majority support
    const bool even = (k % 2 == 0);
    const long long q_lead = t - 1;  // tie point for even k, t-1 for odd
    const long long k0 = even ? k / 2 : t;
    const long long k_top = n / 2;
    if (k0 > k_top) return;  // pi = 0 everywhere in range

    long double tail = even ? 0.0L : pmf_product(n, t, k, t);
    long double lead = pmf_product(n, k0, k, q_lead);
    for (long long K = k0;; ++K) {
        visit(K, tail + (even ? 0.5L * lead : 0.0L));
        if (K == k_top) break;
        tail += lead * (long double)(k - t + 1) / (long double)(n - K);
        lead *= ((long double)(K + 1) / (long double)(K + 1 - q_lead)) *
                ((long double)(n - K - k + q_lead) / (long double)(n - K));
    }
}

}  // namespace detail

}  // namespace sortition
