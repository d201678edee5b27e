#pragma once

#include <cstdint>

namespace ri {

// Counter-based generator: every output is a pure function of
// (seed, stream, counter), so corpus instance i can be regenerated without
// replaying the stream and results are identical across platforms.
// Mixer is the splitmix64 finalizer.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
        : seed_(seed ^ mix(stream, 0x5851f42d4c957f2dULL)), counter_(0) {}

    std::uint64_t next_u64() noexcept { return mix(seed_, counter_++); }

    // uniform in [0,1), 53 random bits
    double next_double() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform integer in [lo, hi], inclusive; rejection keeps it unbiased
    std::int64_t next_int(std::int64_t lo, std::int64_t hi) noexcept {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        if (span == 0) return static_cast<std::int64_t>(next_u64());  // full range
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % span);
        std::uint64_t u;
        do { u = next_u64(); } while (u >= limit);
        return lo + static_cast<std::int64_t>(u % span);
    }

    bool next_bool() noexcept { return (next_u64() >> 63) != 0; }

    static std::uint64_t mix(std::uint64_t seed, std::uint64_t ctr) noexcept {
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (ctr + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t seed_;
    std::uint64_t counter_;
};

}  // namespace ri
