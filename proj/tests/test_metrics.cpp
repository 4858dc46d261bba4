#include <doctest.h>

#include <cmath>

#include "sortition/metrics.hpp"
#include "sortition/profile.hpp"
#include "sortition/rng.hpp"

using namespace sortition;

namespace {

OutcomeVector random_outcome(int m, Rng& rng) {
    OutcomeVector z(m);
    for (auto& b : z) b = std::uint8_t(rng.below(2));
    return z;
}

PreferenceProfile random_profile(int n, int m, Rng& rng) {
    std::vector<std::uint8_t> bits(std::size_t(n) * m);
    for (auto& b : bits) b = std::uint8_t(rng.below(2));
    return PreferenceProfile(n, m, std::move(bits));
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("hamming distance") {
    CHECK(hamming({0, 1, 1}, {0, 1, 1}) == 0);
    CHECK(hamming({0, 0, 0}, {1, 1, 1}) == 3);
    CHECK(hamming({1, 0, 1, 0}, {1, 1, 1, 1}) == 2);
    CHECK_THROWS_AS(hamming({0, 1}, {0, 1, 1}), validation_error);
}

TEST_CASE("hamming is a metric") {
    Rng rng(17);
    for (int rep = 0; rep < 50; ++rep) {
        const auto a = random_outcome(20, rng);
        const auto b = random_outcome(20, rng);
        const auto c = random_outcome(20, rng);
        CHECK(hamming(a, b) == hamming(b, a));
        CHECK(hamming(a, a) == 0);
        if (a != b) CHECK(hamming(a, b) > 0);
        CHECK(hamming(a, c) <= hamming(a, b) + hamming(b, c));
    }
}

TEST_CASE("social cost") {
    const auto zeros = PreferenceProfile(4, 3, std::vector<std::uint8_t>(12, 0));
    CHECK(social_cost(zeros, {0, 0, 0}) == 0);

    const auto x = make_single_issue({10, 1});
    CHECK(social_cost(x, {0}) == 1);
    CHECK(social_cost(x, {1}) == 9);

    const auto y = PreferenceProfile(2, 2, {1, 0, 0, 1});
    CHECK(social_cost(y, {0, 0}) == 2);
    CHECK_THROWS_AS(social_cost(y, {0}), validation_error);
}

TEST_CASE("social cost is complement-symmetric") {
    Rng rng(23);
    for (int rep = 0; rep < 30; ++rep) {
        const auto x = random_profile(6, 8, rng);
        const auto z = random_outcome(8, rng);
        CHECK(social_cost(x, z) == social_cost(complement(x), complement_outcome(z)));
    }
}

TEST_CASE("optimal outcome") {
    const auto x = make_single_issue({10, 1});
    const auto opt = optimal_outcome(x);
    CHECK(opt.outcome == OutcomeVector{0});
    CHECK(opt.cost == 1);

    const auto tie = optimal_outcome(make_single_issue({4, 2}));
    CHECK(tie.outcome == OutcomeVector{0});  // deterministic tie report
    CHECK(tie.cost == 2);

    const auto zeros = PreferenceProfile(5, 2, std::vector<std::uint8_t>(10, 0));
    CHECK(optimal_outcome(zeros).cost == 0);
}

TEST_CASE("optimal outcome beats every outcome vector") {
    Rng rng(41);
    const auto x = random_profile(5, 8, rng);
    const long long best = optimal_outcome(x).cost;
    for (int mask = 0; mask < (1 << 8); ++mask) {
        OutcomeVector z(8);
        for (int j = 0; j < 8; ++j) z[j] = std::uint8_t((mask >> j) & 1);
        CHECK(best <= social_cost(x, z));
    }
}

TEST_CASE("optimal cost is invariant under voter and issue permutation") {
    Rng rng(4242);
    const auto x = random_profile(6, 5, rng);
    const long long base = optimal_outcome(x).cost;

    std::vector<std::uint8_t> voter_permuted(x.bits().size());
    const std::vector<int> vperm = {3, 0, 5, 1, 4, 2};
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 5; ++j) voter_permuted[i * 5 + j] = x.at(vperm[i], j);
    CHECK(optimal_outcome(PreferenceProfile(6, 5, voter_permuted)).cost == base);

    std::vector<std::uint8_t> issue_permuted(x.bits().size());
    const std::vector<int> iperm = {4, 2, 0, 1, 3};
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 5; ++j) issue_permuted[i * 5 + j] = x.at(i, iperm[j]);
    CHECK(optimal_outcome(PreferenceProfile(6, 5, issue_permuted)).cost == base);
}

TEST_CASE("distance matrix") {
    Rng rng(3);
    const auto x = random_profile(7, 9, rng);
    const auto d = distance_matrix(x);
    for (int i = 0; i < 7; ++i) CHECK(d.at(i, i) == 0);
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) {
            CHECK(d.at(i, j) == d.at(j, i));
            CHECK(d.at(i, j) <= 9);
            for (int t = 0; t < 7; ++t) CHECK(d.at(i, j) <= d.at(i, t) + d.at(t, j));
        }

    const auto pair = PreferenceProfile(2, 2, {0, 0, 1, 1});
    CHECK(distance_matrix(pair).at(0, 1) == 2);
}

TEST_CASE("cost ratio convention") {
    const auto unit = cost_ratio(0.0, 0.0);
    CHECK(unit.value == 1.0);
    CHECK_FALSE(unit.infinite);

    const auto inf = cost_ratio(5.0, 0.0);
    CHECK(inf.infinite);
    CHECK(std::isinf(inf.value));

    const auto plain = cost_ratio(18.0, 10.0);
    CHECK(plain.value == doctest::Approx(1.8));
    CHECK_FALSE(std::isnan(plain.value));

    CHECK_THROWS_AS(cost_ratio(-1.0, 2.0), validation_error);
    CHECK_THROWS_AS(cost_ratio(1.0, -2.0), validation_error);
}

}  // TEST_SUITE
