#pragma once

#include <cstdint>
#include <cmath>

namespace covreg {

/// SplitMix64 stream with substream keying. Substreams are derived by
/// hashing (seed, stream) into the initial state, so row-, split- and
/// replication-level streams can be drawn in any order (or in parallel)
/// and still produce identical values.
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    static uint64_t mix(uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Stream keyed by (seed, stream id); independent of call order.
    static SplitMix64 substream(uint64_t seed, uint64_t stream) {
        return SplitMix64(mix(seed) ^ mix(mix(stream) + 0x632be59bd9b4e019ULL));
    }

    uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Unbiased integer in [0, bound) via 128-bit multiply-shift.
    uint64_t next_below(uint64_t bound) {
        return static_cast<uint64_t>(
            (static_cast<__uint128_t>(next_u64()) * bound) >> 64);
    }

    /// Standard normal via Box-Muller; generates pairs and caches the spare.
    double next_gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - next_uniform();  // (0, 1], keeps log finite
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        spare_ = r * std::sin(angle);
        has_spare_ = true;
        return r * std::cos(angle);
    }

private:
    uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// In-place Fisher-Yates shuffle of indices [0, n).
template <typename T>
void shuffle(T* data, int n, SplitMix64& rng) {
    for (int i = n - 1; i > 0; --i) {
        const int j = static_cast<int>(rng.next_below(static_cast<uint64_t>(i) + 1));
        auto tmp = data[i];
        data[i] = data[j];
        data[j] = tmp;
    }
}

}  // namespace covreg
