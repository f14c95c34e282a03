#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string_view>

namespace erwalk {

/// Identifier of the deterministic generator family. Stored in graph metadata
/// and experiment reports so that any artifact can be regenerated bit-exactly.
inline constexpr std::string_view kRngId = "xoshiro256ss-splitmix64";

/// One scramble round of the splitmix64 sequence (Steele/Lea/Flood finalizer).
/// Also serves as the published integer-mixing function for derived streams.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for a derived stream, e.g. derive_seed(master, n, replication, attempt).
/// Chained splitmix64 keeps streams decorrelated and order-independent, so
/// replications can run on any schedule and still reproduce bit-identically.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a = 0,
                                    std::uint64_t b = 0, std::uint64_t c = 0) noexcept {
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ b);
    h = splitmix64(h ^ c);
    return h;
}

/// xoshiro256** (Blackman and Vigna, public domain), state expanded from a
/// 64-bit seed through splitmix64. Fully portable: identical bit streams on
/// every platform for a given seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept {
        std::uint64_t x = seed;
        for (auto& w : state_) {
            x += 0x9e3779b97f4a7c15ULL;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            w = z ^ (z >> 31);
        }
    }

    std::uint64_t next() noexcept {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1), 53 random bits.
    double uniform01() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Bernoulli(p) draw; consumes exactly one 64-bit word.
    bool bernoulli(double p) noexcept { return uniform01() < p; }

    /// Uniform integer in [0, bound) by 128-bit multiply (Lemire reduction).
    std::uint64_t below(std::uint64_t bound) noexcept {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * bound) >> 64);
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
};

/// Standard normal draw via Box-Muller; consumes a deterministic number of
/// uniforms per call (two, plus rare rejections of u == 0).
inline double standard_normal(Rng& rng) noexcept {
    double u = rng.uniform01();
    while (u == 0.0) u = rng.uniform01();
    const double v = rng.uniform01();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586476925286766559 * v);
}

}  // namespace erwalk
