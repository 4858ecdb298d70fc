#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace hgc {

/// Philox4x32-10 counter-based generator.
///
/// Every draw is a pure function of (key, counter), so any sampling decision
/// can be addressed directly by its coordinates (seed, level, attempt, j,
/// vertex) without sharing generator state across threads.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter block(Counter ctr, Key key) {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85;
};

/// Random stream identified by a 64-bit seed. Draws are addressed by four
/// 32-bit coordinates.
class CounterRng {
public:
    constexpr explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t bits(std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t d) const {
        const auto out = Philox4x32::block({a, b, c, d}, key());
        return (std::uint64_t{out[0]} << 32) | out[1];
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform(std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t d) const {
        return static_cast<double>(bits(a, b, c, d) >> 11) * 0x1.0p-53;
    }

    /// Bernoulli(p) draw; p >= 1 always succeeds and p <= 0 never does.
    bool bernoulli(double p, std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t d) const {
        if (p >= 1.0) return true;
        if (p <= 0.0) return false;
        return uniform(a, b, c, d) < p;
    }

    /// Independent child stream, e.g. one per family member or trial.
    CounterRng derive(std::uint32_t tag, std::uint32_t index) const {
        return CounterRng(bits(0xFFFFFFFFu, tag, index, 0x5eed5eedu));
    }

private:
    Philox4x32::Key key() const {
        return {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)};
    }

    std::uint64_t seed_;
};

/// Sequential engine over a `CounterRng`, for code that wants a
/// UniformRandomBitGenerator (shuffles, generators in tests and tools).
class CounterEngine {
public:
    using result_type = std::uint64_t;
    explicit CounterEngine(std::uint64_t seed, std::uint32_t stream = 0) : rng_(seed), stream_(stream) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        const auto v = rng_.bits(stream_, static_cast<std::uint32_t>(next_ >> 32), static_cast<std::uint32_t>(next_), 0);
        ++next_;
        return v;
    }

    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound) {
        // rejection sampling, unbiased
        const std::uint64_t limit = max() - max() % bound;
        std::uint64_t x;
        do {
            x = (*this)();
        } while (x >= limit);
        return x % bound;
    }

private:
    CounterRng rng_;
    std::uint32_t stream_;
    std::uint64_t next_ = 0;
};

}  // namespace hgc
