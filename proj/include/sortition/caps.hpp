#pragma once

namespace sortition {

// Resource limits shared across modules. Defaults are deliberate choices, not
// tuning knobs: enumeration work is bounded by C(n,k), the equidistant
// construction materializes n! issues, and the two-cluster generator is a
// rejection sampler.
struct Caps {
    long long enumeration_cap = 1'000'000;  // max C(n,k) for exhaustive committee walks
    int exact_binomial_max_n = 1000;        // bignum binomials below, products above
    int equidistant_max_n = 8;              // 8! = 40320 issues
    int two_cluster_max_attempts = 1000;
};

}  // namespace sortition
