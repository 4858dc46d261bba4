#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "sortition/caps.hpp"
#include "sortition/errors.hpp"
#include "sortition/rng.hpp"

namespace sortition {

// Binary preference profile: row i is voter i's position on each of m issues.
// Immutable after construction, safe to share across threads.
class PreferenceProfile {
  public:
    PreferenceProfile(int n, int m, std::vector<std::uint8_t> bits)
        : n_(n), m_(m), bits_(std::move(bits)) {
        if (n_ < 1 || m_ < 1) throw validation_error("profile needs n >= 1 and m >= 1");
        if (bits_.size() != std::size_t(n_) * std::size_t(m_))
            throw validation_error("profile bit matrix does not match declared n x m");
        for (const auto b : bits_)
            if (b > 1) throw validation_error("profile entries must be 0 or 1");
    }

    int voters() const { return n_; }
    int issues() const { return m_; }
    std::uint8_t at(int voter, int issue) const {
        return bits_[std::size_t(voter) * m_ + issue];
    }
    const std::uint8_t* row(int voter) const { return bits_.data() + std::size_t(voter) * m_; }
    const std::vector<std::uint8_t>& bits() const { return bits_; }

    // Number of supporters of alternative 1, per issue.
    std::vector<long long> column_supports() const {
        std::vector<long long> s(m_, 0);
        for (int i = 0; i < n_; ++i) {
            const std::uint8_t* r = row(i);
            for (int j = 0; j < m_; ++j) s[j] += r[j];
        }
        return s;
    }

    int words_per_row() const { return (m_ + 63) / 64; }

    // Rows packed into 64-bit words, for popcount-based Hamming distances.
    std::vector<std::uint64_t> packed_rows() const {
        const int w = words_per_row();
        std::vector<std::uint64_t> packed(std::size_t(n_) * w, 0);
        for (int i = 0; i < n_; ++i) {
            const std::uint8_t* r = row(i);
            std::uint64_t* out = packed.data() + std::size_t(i) * w;
            for (int j = 0; j < m_; ++j)
                if (r[j]) out[j >> 6] |= std::uint64_t(1) << (j & 63);
        }
        return packed;
    }

  private:
    int n_;
    int m_;
    std::vector<std::uint8_t> bits_;
};

// Symmetric matrix of pairwise Hamming distances between voters.
struct DistanceMatrix {
    int n = 0;
    std::vector<long long> d;  // row-major n x n

    long long at(int i, int j) const { return d[std::size_t(i) * n + j]; }
};

struct SingleIssueSpec {
    int n;
    int n1;  // supporters of alternative 1
};

// n x 1 profile: voters 0..n1-1 hold 1, the rest hold 0.
inline PreferenceProfile make_single_issue(const SingleIssueSpec& spec) {
    if (spec.n < 1) throw validation_error("single-issue profile needs n >= 1");
    if (spec.n1 < 0 || spec.n1 > spec.n)
        throw validation_error("single-issue profile needs 0 <= n1 <= n");
    std::vector<std::uint8_t> bits(std::size_t(spec.n), 0);
    std::fill(bits.begin(), bits.begin() + spec.n1, std::uint8_t(1));
    return PreferenceProfile(spec.n, 1, std::move(bits));
}

// Repeats every issue `copies` times; pairwise distances scale by `copies`.
inline PreferenceProfile clone_issues(const PreferenceProfile& x, int copies) {
    if (copies < 1) throw validation_error("clone_issues needs copies >= 1");
    const int n = x.voters(), m = x.issues();
    std::vector<std::uint8_t> bits(std::size_t(n) * m * copies);
    for (int i = 0; i < n; ++i) {
        const std::uint8_t* r = x.row(i);
        std::uint8_t* out = bits.data() + std::size_t(i) * m * copies;
        for (int j = 0; j < m; ++j)
            for (int c = 0; c < copies; ++c) out[std::size_t(j) * copies + c] = r[j];
    }
    return PreferenceProfile(n, m * copies, std::move(bits));
}

// Flips every entry. The distance matrix is unchanged.
inline PreferenceProfile complement(const PreferenceProfile& x) {
    std::vector<std::uint8_t> bits(x.bits());
    for (auto& b : bits) b = std::uint8_t(1 - b);
    return PreferenceProfile(x.voters(), x.issues(), std::move(bits));
}

// Complement of an outcome vector (same flip, applied to a length-m 0/1 vector).
inline std::vector<std::uint8_t> complement_outcome(std::vector<std::uint8_t> z) {
    for (auto& b : z) b = std::uint8_t(1 - b);
    return z;
}

// The n!-issue construction in which all pairwise voter distances coincide.
// Issues are indexed by the permutations of [n] in lexicographic order; voter i
// supports 1 on issue pi exactly when pi(i) < n1. Every issue has exactly n1
// supporters, and every pair of distinct voters is at distance
// n! * 2p(1-p) / (1 - 1/n) with p = n1/n.
inline PreferenceProfile equidistant_profile(int n, int n1, int max_n = Caps{}.equidistant_max_n) {
    if (n < 1 || n1 < 1 || n1 > n)
        throw validation_error("equidistant profile needs 1 <= n1 <= n");
    if (n > max_n)
        throw cap_exceeded("equidistant profile with n = " + std::to_string(n) +
                           " exceeds the issue cap (n! issues, cap n <= " +
                           std::to_string(max_n) + "); raise the cap to override");
    long long m = 1;
    for (int i = 2; i <= n; ++i) {
        m *= i;
        if (m * n > 1'000'000'000LL)
            throw cap_exceeded("equidistant profile would need " + std::to_string(m) +
                               "+ issues; refusing to allocate");
    }
    std::vector<std::uint8_t> bits(std::size_t(n) * std::size_t(m));
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    long long col = 0;
    do {
        for (int i = 0; i < n; ++i)
            bits[std::size_t(i) * m + col] = std::uint8_t(perm[i] < n1);
        ++col;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return PreferenceProfile(n, int(m), std::move(bits));
}

// Entries are i.i.d. Bernoulli(p); deterministic in the seed.
inline PreferenceProfile iid_issue_profile(int n, int m, double p, std::uint64_t seed) {
    if (n < 1 || m < 1) throw validation_error("iid profile needs n >= 1 and m >= 1");
    if (!(p >= 0.0 && p <= 1.0)) throw validation_error("iid profile needs 0 <= p <= 1");
    Rng rng(seed);
    std::vector<std::uint8_t> bits(std::size_t(n) * m);
    for (auto& b : bits) b = std::uint8_t(rng.bernoulli(p));
    return PreferenceProfile(n, m, std::move(bits));
}

struct TwoClusterSpec {
    int n;
    int m;
    double alpha;    // fraction of voters in the diffuse cluster P
    double p;        // Bernoulli rate of P entries
    double q;        // Bernoulli rate of the shared Q vector
    double epsilon;  // concentration tolerance
    std::uint64_t seed;
    int max_attempts = Caps{}.two_cluster_max_attempts;
};

struct TwoClusterResult {
    PreferenceProfile profile;
    int p_size;    // voters 0..p_size-1 form P, the rest are the unanimous Q
    int attempts;  // rejection-sampling attempts used
};

// Two groups: |P| = round(alpha n) voters with i.i.d. Bernoulli(p) entries and
// a unanimous group Q holding one shared Bernoulli(q) vector. Resamples until
// every realized distance among the voter vectors and the zero vector lies
// within (1 +- epsilon) of its expectation:
//   P-P:  2p(1-p)m,  P-Q:  (p(1-q)+q(1-p))m,  P-0:  pm,  Q-0:  qm.
inline TwoClusterResult two_cluster_profile(const TwoClusterSpec& spec) {
    if (spec.n < 2 || spec.m < 1) throw validation_error("two-cluster profile needs n >= 2, m >= 1");
    if (!(spec.q > 0.0 && spec.p > spec.q && spec.p < 0.5))
        throw validation_error("two-cluster profile needs 0 < q < p < 1/2");
    if (!(spec.alpha > 0.0 && spec.alpha < 1.0))
        throw validation_error("two-cluster profile needs 0 < alpha < 1");
    if (!(spec.epsilon > 0.0)) throw validation_error("two-cluster profile needs epsilon > 0");
    const int n = spec.n, m = spec.m;
    const int np = int(std::lround(spec.alpha * n));
    if (np < 1 || np >= n)
        throw validation_error("two-cluster profile: round(alpha*n) must leave both groups nonempty");

    const double exp_pp = 2.0 * spec.p * (1.0 - spec.p) * m;
    const double exp_pq = (spec.p * (1.0 - spec.q) + spec.q * (1.0 - spec.p)) * m;
    const double exp_p0 = spec.p * m;
    const double exp_q0 = spec.q * m;
    const auto within = [&](long long dist, double expect) {
        return dist >= (1.0 - spec.epsilon) * expect && dist <= (1.0 + spec.epsilon) * expect;
    };

    Rng rng(spec.seed);
    const int w = (m + 63) / 64;
    std::vector<std::uint64_t> rows(std::size_t(np + 1) * w);  // P rows then xi
    const auto hamming_words = [&](int a, int b) {
        long long dist = 0;
        const std::uint64_t* ra = rows.data() + std::size_t(a) * w;
        const std::uint64_t* rb = rows.data() + std::size_t(b) * w;
        for (int t = 0; t < w; ++t) dist += std::popcount(ra[t] ^ rb[t]);
        return dist;
    };

    for (int attempt = 1; attempt <= spec.max_attempts; ++attempt) {
        std::fill(rows.begin(), rows.end(), 0);
        for (int i = 0; i < np; ++i)
            for (int j = 0; j < m; ++j)
                if (rng.bernoulli(spec.p))
                    rows[std::size_t(i) * w + (j >> 6)] |= std::uint64_t(1) << (j & 63);
        for (int j = 0; j < m; ++j)
            if (rng.bernoulli(spec.q))
                rows[std::size_t(np) * w + (j >> 6)] |= std::uint64_t(1) << (j & 63);

        bool ok = true;
        std::vector<long long> ones(np + 1);
        for (int i = 0; i <= np && ok; ++i) {
            ones[i] = 0;
            for (int t = 0; t < w; ++t) ones[i] += std::popcount(rows[std::size_t(i) * w + t]);
            ok = within(ones[i], i < np ? exp_p0 : exp_q0);
        }
        for (int i = 0; i < np && ok; ++i) {
            for (int j = i + 1; j <= np && ok; ++j)
                ok = within(hamming_words(i, j), j < np ? exp_pp : exp_pq);
        }
        if (!ok) continue;

        std::vector<std::uint8_t> bits(std::size_t(n) * m);
        for (int i = 0; i < n; ++i) {
            const std::uint64_t* r = rows.data() + std::size_t(std::min(i, np)) * w;
            for (int j = 0; j < m; ++j)
                bits[std::size_t(i) * m + j] = std::uint8_t((r[j >> 6] >> (j & 63)) & 1);
        }
        return TwoClusterResult{PreferenceProfile(n, m, std::move(bits)), np, attempt};
    }
    throw generation_failure(
        "two-cluster profile: concentration not reached within " +
        std::to_string(spec.max_attempts) + " attempts; a larger m concentrates better");
}

// --- profile file format ---------------------------------------------------
// Line 1: "n,m". Then n lines of m comma-separated 0/1 digits. UTF-8, LF line
// endings, no trailing commas.

namespace detail {

inline long long parse_count_field(const std::string& field, const char* what) {
    if (field.empty() || field.size() > 9) throw parse_error(std::string("bad ") + what + " in header", 0, 0);
    long long v = 0;
    for (const char c : field) {
        if (c < '0' || c > '9') throw parse_error(std::string("bad ") + what + " in header", 0, 0);
        v = v * 10 + (c - '0');
    }
    return v;
}

}  // namespace detail

inline PreferenceProfile parse_profile(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw parse_error("missing header line", 0, 0);
    const auto comma = header.find(',');
    if (comma == std::string::npos || header.find(',', comma + 1) != std::string::npos)
        throw parse_error("header must be 'n,m'", 0, 0);
    const long long n = detail::parse_count_field(header.substr(0, comma), "voter count");
    const long long m = detail::parse_count_field(header.substr(comma + 1), "issue count");
    if (n < 1 || m < 1) throw parse_error("header requires n >= 1 and m >= 1", 0, 0);

    std::vector<std::uint8_t> bits;
    bits.reserve(std::size_t(n) * std::size_t(m));
    std::string line;
    long long rows = 0;
    while (std::getline(in, line)) {
        if (rows == n && line.empty()) continue;  // tolerate one trailing newline
        ++rows;
        if (rows > n) throw parse_error("more data rows than declared n", int(rows), 1);
        long long col = 0;
        std::size_t pos = 0;
        while (true) {
            const auto next = line.find(',', pos);
            const std::string cell = line.substr(pos, next == std::string::npos ? next : next - pos);
            ++col;
            if (col > m) throw parse_error("more columns than declared m", int(rows), int(col));
            if (cell != "0" && cell != "1")
                throw parse_error("cell must be a single 0 or 1 digit", int(rows), int(col));
            bits.push_back(std::uint8_t(cell == "1"));
            if (next == std::string::npos) break;
            pos = next + 1;
        }
        if (col < m) throw parse_error("fewer columns than declared m", int(rows), int(col));
    }
    if (rows < n) throw parse_error("fewer data rows than declared n", int(rows), 1);
    return PreferenceProfile(int(n), int(m), std::move(bits));
}

inline PreferenceProfile read_profile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open profile file: " + path);
    return parse_profile(in);
}

inline void format_profile(const PreferenceProfile& x, std::ostream& out) {
    out << x.voters() << ',' << x.issues() << '\n';
    for (int i = 0; i < x.voters(); ++i) {
        const std::uint8_t* r = x.row(i);
        for (int j = 0; j < x.issues(); ++j) {
            if (j) out << ',';
            out << char('0' + r[j]);
        }
        out << '\n';
    }
}

inline void write_profile(const PreferenceProfile& x, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    format_profile(x, out);
    if (!out) throw std::runtime_error("failed writing profile to " + path);
}

}  // namespace sortition
