#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace sortition {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seeded random stream. All draw primitives are spelled out here instead of
// going through <random> distributions (whose algorithms are
// implementation-defined), so a seed produces the same stream on every
// platform and compiler. mt19937_64 itself is fully specified by the standard.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Independent stream derived from a base seed and a stream index.
    static Rng derived(std::uint64_t seed, std::uint64_t stream) {
        return Rng(splitmix64(seed ^ splitmix64(stream + 1)));
    }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1), 53 random bits.
    double next_unit() { return double(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return next_unit() < p; }

    // Uniform in [0, bound), unbiased via rejection.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
        for (;;) {
            const std::uint64_t x = engine_();
            if (x >= threshold) return x % bound;
        }
    }

    // Partial Fisher-Yates: afterwards pool[0..k) is a uniform k-subset of the
    // pool's elements. The pool is only reordered, never shrunk, so it can be
    // reused across draws.
    template <typename T>
    void draw_prefix(std::vector<T>& pool, std::size_t k) {
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t j = i + std::size_t(below(std::uint64_t(pool.size() - i)));
            std::swap(pool[i], pool[j]);
        }
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace sortition
