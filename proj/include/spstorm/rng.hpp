#pragma once

#include <cstdint>
#include <limits>

namespace spstorm {

/// Counter-based generator: the stream produced for (seed, stream, counter)
/// depends on nothing else, so draws for iteration k are reproducible no
/// matter what happened before k. SplitMix64 underneath.
class CounterRng {
public:
    using result_type = std::uint64_t;

    CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter)
        : state_(mix(seed ^ mix(stream * 0xD1B54A32D192ED03ull ^ mix(counter + 0x632BE59BD9B4E019ull))))
    {
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()()
    {
        state_ += 0x9E3779B97F4A7C15ull;
        return mix(state_);
    }

    /// Uniform integer in [0, bound), unbiased (Lemire's method).
    std::uint64_t below(std::uint64_t bound)
    {
        unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                m = static_cast<unsigned __int128>((*this)()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    static constexpr std::uint64_t mix(std::uint64_t z)
    {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

// Stream tags keep independent uses of one seed apart.
inline constexpr std::uint64_t kBatchStream = 1;
inline constexpr std::uint64_t kSnapshotStream = 2;

}  // namespace spstorm
