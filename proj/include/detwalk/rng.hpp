#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace detwalk {

inline constexpr const char* kPrngName = "xoshiro256** (SplitMix64-seeded streams)";

class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t state) : state_(state) {}
    constexpr std::uint64_t operator()() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

// xoshiro256** 1.0 (Blackman & Vigna). Stream k of a seed is keyed by
// SplitMix64 from the mixed pair (seed, k).
class Xoshiro256StarStar {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256StarStar(std::uint64_t seed, std::uint64_t stream = 0) {
        SplitMix64 key(seed);
        const std::uint64_t mixed = key() ^ SplitMix64(stream ^ 0xd1b54a32d192ed03ULL)();
        SplitMix64 sm(mixed);
        for (auto& s : s_) s = sm();
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::array<std::uint64_t, 4> s_{};
};

using Rng = Xoshiro256StarStar;

}  // namespace detwalk
