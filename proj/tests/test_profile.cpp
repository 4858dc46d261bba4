#include <doctest.h>

#include <sstream>

#include "sortition/metrics.hpp"
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

TEST_SUITE("profiles") {

TEST_CASE("profile validation") {
    CHECK_THROWS_AS(PreferenceProfile(0, 1, {}), validation_error);
    CHECK_THROWS_AS(PreferenceProfile(2, 2, {0, 1, 0}), validation_error);
    CHECK_THROWS_AS(PreferenceProfile(1, 2, {0, 2}), validation_error);
}

TEST_CASE("single-issue construction") {
    const auto x = make_single_issue({10, 1});
    CHECK(x.voters() == 10);
    CHECK(x.issues() == 1);
    int ones = 0;
    for (int i = 0; i < 10; ++i) ones += x.at(i, 0);
    CHECK(ones == 1);
    CHECK(x.at(0, 0) == 1);

    const auto y = make_single_issue({4, 2});
    CHECK(y.at(0, 0) == 1);
    CHECK(y.at(1, 0) == 1);
    CHECK(y.at(2, 0) == 0);
    CHECK(y.at(3, 0) == 0);

    const auto z = make_single_issue({5, 0});
    for (int i = 0; i < 5; ++i) CHECK(z.at(i, 0) == 0);

    CHECK_THROWS_AS(make_single_issue({4, 5}), validation_error);
}

TEST_CASE("issue cloning") {
    const auto x = make_single_issue({3, 1});
    const auto cloned = clone_issues(x, 3);
    CHECK(cloned.issues() == 3);
    for (int j = 0; j < 3; ++j) {
        CHECK(cloned.at(0, j) == 1);
        CHECK(cloned.at(1, j) == 0);
        CHECK(cloned.at(2, j) == 0);
    }
    const auto d1 = distance_matrix(x);
    const auto d3 = distance_matrix(cloned);
    CHECK(d1.at(0, 1) == 1);
    CHECK(d3.at(0, 1) == 3);

    // optimal cost scales with the number of copies
    Rng rng(91);
    for (int rep = 0; rep < 10; ++rep) {
        const auto p = random_profile(5, 4, rng);
        const long long base = optimal_outcome(p).cost;
        for (int c : {2, 5}) CHECK(optimal_outcome(clone_issues(p, c)).cost == c * base);
    }
    CHECK_THROWS_AS(clone_issues(x, 0), validation_error);
}

TEST_CASE("complement") {
    const auto zero = PreferenceProfile(3, 2, {0, 0, 0, 0, 0, 0});
    const auto flipped = complement(zero);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 2; ++j) CHECK(flipped.at(i, j) == 1);

    Rng rng(7);
    const auto x = random_profile(6, 5, rng);
    CHECK(distance_matrix(complement(x)).d == distance_matrix(x).d);
    CHECK(complement(complement(x)).bits() == x.bits());
}

TEST_CASE("equidistant profile: n=3, n1=1") {
    const auto x = equidistant_profile(3, 1);
    CHECK(x.voters() == 3);
    CHECK(x.issues() == 6);
    const auto d = distance_matrix(x);
    CHECK(d.at(0, 1) == 4);
    CHECK(d.at(0, 2) == 4);
    CHECK(d.at(1, 2) == 4);
    for (const long long s : x.column_supports()) CHECK(s == 1);
}

TEST_CASE("equidistant profile: unanimous case and column sums") {
    const auto all = equidistant_profile(3, 3);
    const auto d = distance_matrix(all);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(d.at(i, j) == 0);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 6; ++j) CHECK(all.at(i, j) == 1);

    const auto x = equidistant_profile(4, 2);
    for (const long long s : x.column_supports()) CHECK(s == 2);
}

TEST_CASE("equidistant profile: common distance matches the counting argument") {
    // (n^2 - n) d = n! * 2 n1 (n - n1), i.e. d = n! * 2p(1-p) / (1 - 1/n).
    for (int n = 2; n <= 6; ++n) {
        long long fact = 1;
        for (int i = 2; i <= n; ++i) fact *= i;
        for (int n1 = 1; n1 <= n; ++n1) {
            const auto x = equidistant_profile(n, n1);
            const auto d = distance_matrix(x);
            const long long expected = fact * 2 * n1 * (n - n1) / (1LL * n * n - n);
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) CHECK(d.at(i, j) == expected);
        }
    }
}

TEST_CASE("equidistant profile: issue cap") {
    CHECK_THROWS_AS(equidistant_profile(9, 2), cap_exceeded);
    const auto x = equidistant_profile(9, 2, 9);  // explicit override
    CHECK(x.issues() == 362880);
    CHECK_THROWS_AS(equidistant_profile(4, 0), validation_error);
}

TEST_CASE("two-cluster generator") {
    // The regime the construction needs: every P-P distance above every P-Q
    // distance, so committee members from Q soak up all delegated weight.
    const TwoClusterSpec spec{40, 20000, 0.75, 0.05, 0.04, 0.1, 7, 1000};
    const auto result = two_cluster_profile(spec);
    CHECK(result.p_size == 30);
    const auto d = distance_matrix(result.profile);
    long long min_pp = 1LL << 60, max_pq = 0;
    for (int i = 0; i < result.p_size; ++i) {
        for (int j = i + 1; j < 40; ++j) {
            if (j < result.p_size)
                min_pp = std::min(min_pp, d.at(i, j));
            else
                max_pq = std::max(max_pq, d.at(i, j));
        }
    }
    CHECK(min_pp > max_pq);

    // the concentration sandwich the generator promises
    const double m = 20000;
    const double exp_pp = 2 * 0.05 * 0.95 * m;
    const double exp_pq = (0.05 * 0.96 + 0.04 * 0.95) * m;
    for (int i = 0; i < result.p_size; ++i) {
        for (int j = i + 1; j < 40; ++j) {
            const double expect = j < result.p_size ? exp_pp : exp_pq;
            CHECK(d.at(i, j) >= 0.9 * expect);
            CHECK(d.at(i, j) <= 1.1 * expect);
        }
    }

    // Q block is unanimous
    for (int i = result.p_size; i < 40; ++i)
        for (int j = i + 1; j < 40; ++j) CHECK(d.at(i, j) == 0);

    // determinism
    const auto again = two_cluster_profile(spec);
    CHECK(again.profile.bits() == result.profile.bits());

    CHECK_THROWS_AS(two_cluster_profile({40, 100, 0.75, 0.05, 0.05, 0.1, 7, 10}),
                    validation_error);  // q = p forbidden
    CHECK_THROWS_AS(two_cluster_profile({40, 50, 0.75, 0.05, 0.04, 1e-5, 7, 3}),
                    generation_failure);
}

TEST_CASE("iid profile") {
    const auto zero = iid_issue_profile(4, 3, 0.0, 1);
    for (const auto b : zero.bits()) CHECK(b == 0);
    const auto one = iid_issue_profile(4, 3, 1.0, 1);
    for (const auto b : one.bits()) CHECK(b == 1);

    // column-sum mean within 4 standard deviations of p*n
    const int n = 1000, m = 100;
    const double p = 0.3;
    const auto x = iid_issue_profile(n, m, p, 13);
    double mean = 0;
    for (const long long s : x.column_supports()) mean += double(s);
    mean /= m;
    const double sigma = std::sqrt(n * p * (1 - p) / m);
    CHECK(std::abs(mean - p * n) <= 4 * sigma);

    CHECK(iid_issue_profile(5, 5, 0.4, 99).bits() == iid_issue_profile(5, 5, 0.4, 99).bits());
}

TEST_CASE("profile file round trip") {
    Rng rng(5);
    const auto x = random_profile(5, 7, rng);
    std::ostringstream os;
    format_profile(x, os);
    std::istringstream is(os.str());
    const auto back = parse_profile(is);
    CHECK(back.voters() == 5);
    CHECK(back.issues() == 7);
    CHECK(back.bits() == x.bits());
}

TEST_CASE("profile parse errors carry positions") {
    {
        std::istringstream in("3,2\n0,1\n1,2\n0,0\n");
        try {
            parse_profile(in);
            FAIL("expected parse_error");
        } catch (const parse_error& e) {
            CHECK(e.row == 2);
            CHECK(e.col == 2);
        }
    }
    {
        std::istringstream in("3,2\n0,1\n1,0\n");  // header says 3 rows, data has 2
        CHECK_THROWS_AS(parse_profile(in), parse_error);
    }
    {
        std::istringstream in("2,2\n0,1\n1,0\n1,1\n");  // extra row
        CHECK_THROWS_AS(parse_profile(in), parse_error);
    }
    {
        std::istringstream in("2,2\n0,1,\n1,0\n");  // trailing comma
        CHECK_THROWS_AS(parse_profile(in), parse_error);
    }
    {
        std::istringstream in("nonsense\n");
        CHECK_THROWS_AS(parse_profile(in), parse_error);
    }
    {
        std::istringstream in("2,2\n0, 1\n1,0\n");  // stray space byte in a cell
        CHECK_THROWS_AS(parse_profile(in), parse_error);
    }
}

}  // TEST_SUITE
