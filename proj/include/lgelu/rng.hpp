#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace lgelu {

// SplitMix64: seedable, portable, and fast. All randomness in the library
// flows through this generator so that runs are bit-reproducible across
// platforms; std::random distributions are implementation-defined and are
// deliberately not used.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Standard normal via Box-Muller; one deviate per call, no cached spare.
    double normal() {
        double u1 = next_double();
        while (u1 <= 0.0) {
            u1 = next_double();
        }
        const double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
    }

    // Unbiased integer in [0, n), n >= 1.
    std::uint64_t next_below(std::uint64_t n) {
        const std::uint64_t limit = n * (UINT64_MAX / n);
        std::uint64_t x = next_u64();
        while (x >= limit) {
            x = next_u64();
        }
        return x % n;
    }

    // Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[next_below(i)]);
        }
    }

private:
    static constexpr double kTwoPi = 6.28318530717958647692;
    std::uint64_t state_;
};

// Purposes a run draws randomness for. Each purpose gets its own stream so
// adding draws to one (say, an extra diagnostic) cannot shift another.
enum class Stream : std::uint64_t { Init = 0, Shuffle = 1, Data = 2 };

// Stream derivation: successive outputs of a SplitMix64 rooted at the run
// seed become the stream seeds.
inline SplitMix64 stream_rng(std::uint64_t run_seed, Stream purpose) {
    SplitMix64 root(run_seed);
    std::uint64_t s = root.next_u64();
    for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(purpose); ++i) {
        s = root.next_u64();
    }
    return SplitMix64(s);
}

}  // namespace lgelu
