#pragma once

#include <cmath>
#include <cstdint>

namespace gpz {

// SplitMix64 mixing step. Used both as a stand-alone seeder and to derive
// independent substreams from (master_seed, stream index) pairs.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256++ with Box-Muller normals. Streams are derived from
// (master_seed, stream_index) through SplitMix64, so replication r of an
// experiment owns its generator independently of scheduling or thread count.
class Rng {
public:
    explicit Rng(std::uint64_t seed) { reseed(seed); }

    Rng(std::uint64_t master_seed, std::uint64_t stream_index) {
        std::uint64_t s = master_seed;
        std::uint64_t h = splitmix64(s);
        s = h ^ (0x6a09e667f3bcc909ULL + stream_index);
        reseed(splitmix64(s));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on (0,1): 53-bit mantissa offset by half an ulp so log() is safe.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; the companion draw is cached.
    double next_normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    void reseed(std::uint64_t seed) {
        std::uint64_t s = seed;
        for (auto& w : s_) w = splitmix64(s);
        have_cached_ = false;
        cached_ = 0.0;
    }

    std::uint64_t s_[4]{};
    bool have_cached_ = false;
    double cached_ = 0.0;
};

} // namespace gpz
