#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

namespace prlab {

/// splitmix64 generator. The algorithm is fixed so that seeded frames and
/// experiments reproduce bit-for-bit across platforms and implementations:
///
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
///
/// bounded(n) draws by rejection: reject r < 2^64 mod n, return r mod n.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Unbiased uniform draw from [0, n).
    std::uint64_t bounded(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n; // 2^64 mod n
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }

    /// Uniform integer in [lo, hi], inclusive.
    long long int_in(long long lo, long long hi) {
        return lo + static_cast<long long>(bounded(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    /// Uniform double in [0, 1), 53 bits of randomness.
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Derives an independent stream for a tagged sub-task of this seed.
    static SplitMix64 derived(std::uint64_t seed, std::uint64_t tag) {
        return SplitMix64(seed ^ (0x9E3779B97F4A7C15ULL * (tag + 1)));
    }

private:
    std::uint64_t state_;
};

/// Uniform random k-subset of {0, ..., n-1}, returned sorted. Partial
/// Fisher-Yates with a fixed draw count, so the stream advance is
/// reproducible.
inline std::vector<std::size_t> random_subset(SplitMix64& rng, std::size_t n, std::size_t k) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.bounded(n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
}

} // namespace prlab
