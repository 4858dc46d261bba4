#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <vector>

#include "sortition/errors.hpp"

namespace sortition {

// Minimal unsigned bignum: just enough for exact binomial coefficients and
// correctly-rounded ratios of them. Limbs are base 2^64, little-endian, no
// leading zero limbs (zero = empty vector).
class BigUint {
  public:
    BigUint() = default;
    explicit BigUint(std::uint64_t v) {
        if (v != 0) limbs_.push_back(v);
    }

    bool is_zero() const { return limbs_.empty(); }

    void mul_u64(std::uint64_t f) {
        if (f == 0 || is_zero()) {
            limbs_.clear();
            return;
        }
        unsigned __int128 carry = 0;
        for (auto& limb : limbs_) {
            const unsigned __int128 prod = (unsigned __int128)limb * f + carry;
            limb = std::uint64_t(prod);
            carry = prod >> 64;
        }
        if (carry != 0) limbs_.push_back(std::uint64_t(carry));
    }

    // Exact division by a nonzero u64; the remainder must be zero.
    void div_u64_exact(std::uint64_t d) {
        unsigned __int128 rem = 0;
        for (std::size_t i = limbs_.size(); i-- > 0;) {
            const unsigned __int128 cur = (rem << 64) | limbs_[i];
            limbs_[i] = std::uint64_t(cur / d);
            rem = cur % d;
        }
        while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
    }

    BigUint mul(const BigUint& other) const {
        BigUint out;
        if (is_zero() || other.is_zero()) return out;
        out.limbs_.assign(limbs_.size() + other.limbs_.size(), 0);
        for (std::size_t i = 0; i < limbs_.size(); ++i) {
            std::uint64_t carry = 0;
            for (std::size_t j = 0; j < other.limbs_.size(); ++j) {
                const unsigned __int128 cur =
                    (unsigned __int128)limbs_[i] * other.limbs_[j] + out.limbs_[i + j] + carry;
                out.limbs_[i + j] = std::uint64_t(cur);
                carry = std::uint64_t(cur >> 64);
            }
            out.limbs_[i + other.limbs_.size()] += carry;
        }
        while (!out.limbs_.empty() && out.limbs_.back() == 0) out.limbs_.pop_back();
        return out;
    }

    std::strong_ordering operator<=>(const BigUint& other) const {
        if (limbs_.size() != other.limbs_.size())
            return limbs_.size() <=> other.limbs_.size();
        for (std::size_t i = limbs_.size(); i-- > 0;) {
            if (limbs_[i] != other.limbs_[i]) return limbs_[i] <=> other.limbs_[i];
        }
        return std::strong_ordering::equal;
    }
    bool operator==(const BigUint& other) const = default;

    int bit_length() const {
        if (is_zero()) return 0;
        int top = 64;
        std::uint64_t high = limbs_.back();
        while (!(high >> 63)) {
            high <<= 1;
            --top;
        }
        return int(64 * (limbs_.size() - 1)) + top;
    }

    // Most significant 64 bits (value shifted right by bit_length() - 64;
    // returns the full value when shorter than 64 bits).
    std::uint64_t top64() const {
        if (is_zero()) return 0;
        const int bits = bit_length();
        if (bits <= 64) return limbs_[0];
        const int shift = (bits - 64) % 64;
        const std::size_t hi = limbs_.size() - 1;
        if (shift == 0) return limbs_[hi];
        return (limbs_[hi] << (64 - shift)) | (limbs_[hi - 1] >> shift);
    }

    // a / b as a double. Both mantissas are truncated to 64 bits, so the
    // relative error is below 2^-62.
    static double ratio(const BigUint& a, const BigUint& b) {
        if (a.is_zero()) return 0.0;
        const int ea = a.bit_length(), eb = b.bit_length();
        const long double m = (long double)a.top64() / (long double)b.top64();
        const int sa = ea > 64 ? ea - 64 : 0;
        const int sb = eb > 64 ? eb - 64 : 0;
        return double(std::ldexp(m, sa - sb));
    }

  private:
    std::vector<std::uint64_t> limbs_;
};

// Exact binomial coefficient; every intermediate division is exact.
inline BigUint big_binomial(long long n, long long k) {
    if (k < 0 || k > n) return BigUint();
    if (k > n - k) k = n - k;
    BigUint b(1);
    for (long long i = 1; i <= k; ++i) {
        b.mul_u64(std::uint64_t(n - k + i));
        b.div_u64_exact(std::uint64_t(i));
    }
    return b;
}

}  // namespace sortition
