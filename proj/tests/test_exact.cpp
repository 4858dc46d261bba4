#include <doctest.h>

#include <cmath>
#include <vector>

#include "sortition/bounds.hpp"
#include "sortition/exact.hpp"
#include "sortition/profile.hpp"
#include "sortition/rng.hpp"

using namespace sortition;

namespace {

PreferenceProfile random_profile(int n, int m, Rng& rng) {
    std::vector<std::uint8_t> bits(std::size_t(n) * m);
    for (auto& b : bits) b = std::uint8_t(rng.below(2));
    return PreferenceProfile(n, m, std::move(bits));
}

}  // namespace

TEST_SUITE("exact") {

TEST_CASE("kmaj exact expected cost, pinned cases") {
    // k = 1 is the random dictator
    const auto x = make_single_issue({10, 1});
    const auto rep = kmaj_expected_cost_exact(x, 1);
    CHECK(rep.expected_cost == doctest::Approx(1.8).epsilon(1e-14));
    CHECK(rep.ratio.value == doctest::Approx(1.8).epsilon(1e-14));
    CHECK(rep.method == EvalMethod::exact_hypergeometric);

    // tie-heavy case: n=4, n1=2, k=3 costs 2 either way
    const auto tie = kmaj_expected_cost_exact(make_single_issue({4, 2}), 3);
    CHECK(tie.expected_cost == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(tie.ratio.value == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("kmaj with the full committee is the population majority") {
    Rng rng(101);
    for (int rep = 0; rep < 15; ++rep) {
        const int n = 2 + int(rng.below(9));
        const auto x = random_profile(n, 1 + int(rng.below(5)), rng);
        CHECK(kmaj_expected_cost_exact(x, n).expected_cost ==
              doctest::Approx(maj_expected_cost(x)).epsilon(1e-12));
    }
}

TEST_CASE("hypergeometric evaluation matches the enumeration oracle") {
    Rng rng(2024);
    int cases = 0;
    for (int rep = 0; rep < 25; ++rep) {
        const int n = 2 + int(rng.below(11));
        const int m = 1 + int(rng.below(6));
        const auto x = random_profile(n, m, rng);
        for (int k = 1; k <= n; ++k) {
            const double a = kmaj_expected_cost_exact(x, k).expected_cost;
            const double b = enumerate_expected_cost(x, k, RuleId::kmaj).expected_cost;
            CHECK(std::abs(a - b) <= 1e-10);
            ++cases;
        }
    }
    CHECK(cases >= 150);
}

TEST_CASE("unanimous profiles cost nothing under either rule") {
    const auto x = PreferenceProfile(6, 3, std::vector<std::uint8_t>(18, 1));
    for (const RuleId rule : {RuleId::kmaj, RuleId::krep}) {
        const auto rep = enumerate_expected_cost(x, 3, rule);
        CHECK(rep.expected_cost == 0.0);
        CHECK(rep.ratio.value == 1.0);  // 0/0 convention
        CHECK_FALSE(rep.ratio.infinite);
    }
}

TEST_CASE("enumeration cap") {
    Rng rng(5);
    const auto x = random_profile(30, 2, rng);
    CHECK_THROWS_AS(enumerate_expected_cost(x, 15, RuleId::kmaj, 100000), cap_exceeded);
}

TEST_CASE("one-issue AR of k-sortition") {
    // k=1: 2 - 2/n at n1 = 1
    const auto rd = ar_one_issue_kmaj(10, 1);
    CHECK(rd.ratio == doctest::Approx(1.8).epsilon(1e-14));
    CHECK(rd.worst_n1 == 1);

    // k=3 at large n approaches 1 + (7 sqrt 7 - 10)/27 with the worst minority
    // fraction near (4 - sqrt 7)/6
    const auto big = ar_one_issue_kmaj(30000, 3);
    CHECK(std::abs(big.ratio - 1.316) <= 1e-2);
    CHECK(std::abs(double(big.worst_n1) / 30000 - 0.226) <= 0.01);

    // full odd committee is the majority rule
    CHECK(ar_one_issue_kmaj(7, 7).ratio == 1.0);
    CHECK_THROWS_AS(ar_one_issue_kmaj(5, 6), validation_error);
}

TEST_CASE("kmaj expected cost is complement-symmetric") {
    Rng rng(808);
    for (int rep = 0; rep < 15; ++rep) {
        const int n = 2 + int(rng.below(10));
        const auto x = random_profile(n, 1 + int(rng.below(4)), rng);
        const int k = 1 + int(rng.below(std::uint64_t(n)));
        const auto a = kmaj_expected_cost_exact(x, k);
        const auto b = kmaj_expected_cost_exact(complement(x), k);
        CHECK(a.expected_cost == doctest::Approx(b.expected_cost).epsilon(1e-10));
        CHECK(a.optimal_cost == b.optimal_cost);
        if (!a.ratio.infinite)
            CHECK(a.ratio.value == doctest::Approx(b.ratio.value).epsilon(1e-10));
    }
}

TEST_CASE("issue cloning leaves the kmaj ratio unchanged") {
    Rng rng(606);
    for (int rep = 0; rep < 20; ++rep) {
        const int n = 3 + int(rng.below(40));
        const int n1 = int(rng.below(std::uint64_t(n + 1)));
        const int k = 1 + int(rng.below(std::uint64_t(n)));
        const auto x = make_single_issue({n, n1});
        const auto base = kmaj_expected_cost_exact(x, k).ratio;
        for (const int copies : {2, 5, 17}) {
            const auto cloned = kmaj_expected_cost_exact(clone_issues(x, copies), k).ratio;
            CHECK(base.infinite == cloned.infinite);
            if (!base.infinite)
                CHECK(cloned.value ==
                      doctest::Approx(base.value).epsilon(1e-14));  // exact at double precision
        }
    }
}

TEST_CASE("optimal issue-wise thresholds, pinned grids") {
    const auto h = optimal_issue_wise_thresholds(10, 3, 3);
    REQUIRE(h.size() == 4);
    CHECK(h[0] == ThresholdChoice::zero);
    CHECK(h[1] == ThresholdChoice::zero);
    CHECK(h[2] == ThresholdChoice::one);
    CHECK(h[3] == ThresholdChoice::one);

    // independent small-integer oracle for the same grid
    const auto choose = [](long long a, long long b) {
        if (b < 0 || b > a) return 0LL;
        long long c = 1;
        for (long long i = 1; i <= b; ++i) c = c * (a - b + i) / i;
        return c;
    };
    for (long long q = 0; q <= 3; ++q) {
        const long long direct = choose(3, q) * choose(7, 3 - q);
        const long long flipped = choose(7, q) * choose(3, 3 - q);
        const ThresholdChoice expect =
            direct > flipped ? ThresholdChoice::zero
                             : (direct < flipped ? ThresholdChoice::one : ThresholdChoice::free_tie);
        CHECK(h[q] == expect);
    }

    // balanced population: the symmetric point is a free tie
    const auto balanced = optimal_issue_wise_thresholds(8, 4, 2);
    CHECK(balanced[1] == ThresholdChoice::free_tie);
    CHECK(majority_threshold_deviations(balanced).empty());

    // k = 1 is trivially the majority rule
    const auto dictator = optimal_issue_wise_thresholds(9, 2, 1);
    CHECK(dictator[0] == ThresholdChoice::zero);
    CHECK(dictator[1] == ThresholdChoice::one);
}

TEST_CASE("optimal thresholds equal the majority rule across the grid") {
    for (long long n = 2; n <= 30; ++n) {
        for (long long k = 1; k <= std::min<long long>(9, n); ++k) {
            for (long long n1 = 1; 2 * n1 <= n; ++n1) {
                const auto h = optimal_issue_wise_thresholds(n, n1, k);
                CHECK(majority_threshold_deviations(h).empty());
                if (2 * n1 < n) {
                    // strict imbalance: every feasible non-tie entry is forced
                    for (long long q = 0; q <= k; ++q) {
                        if (2 * q == k) continue;
                        if (q <= n1 && k - q <= n - n1 && q <= n - n1 && k - q <= n1)
                            CHECK(h[q] != ThresholdChoice::free_tie);
                    }
                }
            }
        }
    }
}

TEST_CASE("upper bound conformance on a reduced grid") {
    for (long long n = 1; n <= 300; ++n)
        for (long long k = 1; k <= n; ++k)
            CHECK(ar_one_issue_kmaj(n, k).ratio <= kmaj_upper_bound(k));
}

TEST_CASE("lower bound is met where it is informative") {
    // Phi(-1) > 1/sqrt(k) needs k >= 40; check one informative point
    const long long k = 49, n = 2 * (k + 1) * (k + 1);
    const double bound = kmaj_lower_bound(k);
    CHECK(bound > 1.0);
    CHECK(ar_one_issue_kmaj(n, k).ratio >= bound);
}

TEST_CASE("permutation averaging") {
    Rng rng(313);
    const auto x = random_profile(5, 3, rng);

    // kmaj is anonymous: the exact n! average equals the plain cost
    const auto kmaj_cost = [](const PreferenceProfile& p) {
        return kmaj_expected_cost_exact(p, 3).expected_cost;
    };
    CHECK(permutation_average_cost(x, kmaj_cost, 1, 0) ==
          doctest::Approx(kmaj_cost(x)).epsilon(1e-12));

    // n = 1: identity
    const auto single = PreferenceProfile(1, 2, {1, 0});
    const auto dictator1_cost = [](const PreferenceProfile& p) {
        return kmaj_expected_cost_exact(p, 1).expected_cost;
    };
    CHECK(permutation_average_cost(single, dictator1_cost, 1, 0) ==
          doctest::Approx(dictator1_cost(single)).epsilon(1e-15));

    // a deliberately non-anonymous rule: voter 0 dictates
    const auto dictator_cost = [](const PreferenceProfile& p) {
        OutcomeVector z(p.row(0), p.row(0) + p.issues());
        return double(social_cost(p, z));
    };
    const auto skew = make_single_issue({3, 1});
    const double averaged = permutation_average_cost(skew, dictator_cost, 1, 0);
    CHECK(averaged == doctest::Approx(rd_expected_cost(skew)).epsilon(1e-12));
    CHECK(std::abs(averaged - dictator_cost(skew)) > 0.1);
}

TEST_CASE("anonymization can only lower the worst-case ratio") {
    // over the one-issue family at n = 7, the exact permutation average of the
    // voter-0 dictatorship (= random dictator) has a worst ratio no bigger
    // than the dictatorship's own
    const int n = 7;
    const auto dictator_cost = [](const PreferenceProfile& p) {
        OutcomeVector z(p.row(0), p.row(0) + p.issues());
        return double(social_cost(p, z));
    };
    double worst_plain = 1.0, worst_averaged = 1.0;
    for (int n1 = 1; 2 * n1 <= n; ++n1) {
        const auto x = make_single_issue({n, n1});
        const double opt = double(optimal_outcome(x).cost);
        worst_plain = std::max(worst_plain, dictator_cost(x) / opt);
        worst_averaged =
            std::max(worst_averaged, permutation_average_cost(x, dictator_cost, 1, 0) / opt);
    }
    CHECK(worst_averaged <= worst_plain + 1e-12);
    CHECK(worst_averaged == doctest::Approx(2.0 - 2.0 / n).epsilon(1e-12));
}

}  // TEST_SUITE
