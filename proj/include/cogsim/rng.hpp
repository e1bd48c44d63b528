#ifndef COGSIM_RNG_HPP
#define COGSIM_RNG_HPP

#include <cmath>
#include <cstdint>

namespace cogsim {

// What a stream is used for. Each (node, purpose) pair gets its own stream so
// that adding a node, or toggling a feature, never shifts the draws seen by
// unrelated parts of a run.
enum class RngPurpose : std::uint32_t {
    Backoff = 0,
    Traffic,
    ListenSector,
    EstimateNoise,
    SensorNoise,
    Placement,
    Count
};

// PCG32 with a per-stream increment. Integer core only, so the same
// (seed, stream_id) replays the same sequence on any platform.
class RngStream {
public:
    RngStream() : RngStream(1, 0) {}
    RngStream(std::uint64_t seed, std::uint64_t stream_id) {
        inc_ = (stream_id << 1u) | 1u;
        state_ = 0;
        next_u32();
        state_ += splitmix64(seed ^ (0x9e3779b97f4a7c15ULL * (stream_id + 1)));
        next_u32();
    }

    static RngStream for_node(std::uint64_t seed, std::uint32_t node_id, RngPurpose purpose) {
        const auto id = static_cast<std::uint64_t>(node_id) *
                            static_cast<std::uint64_t>(RngPurpose::Count) +
                        static_cast<std::uint64_t>(purpose);
        return RngStream(seed, id);
    }

    std::uint32_t next_u32() {
        const std::uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + inc_;
        const auto xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
        const auto rot = static_cast<std::uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
    }

    // Unbiased integer in [0, bound), bound >= 1. Rejection sampling keeps the
    // draw sequence identical everywhere.
    std::uint32_t uniform_below(std::uint32_t bound) {
        if (bound <= 1) return 0;
        const std::uint32_t threshold = (0u - bound) % bound;
        for (;;) {
            const std::uint32_t r = next_u32();
            if (r >= threshold) return r % bound;
        }
    }

    // Integer in [lo, hi] inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(uniform_below(static_cast<std::uint32_t>(hi - lo + 1)));
    }

    double uniform01() {
        return (static_cast<double>(next_u32()) + 0.5) * (1.0 / 4294967296.0);
    }

    double exponential(double mean) { return -mean * std::log(uniform01()); }

    double gaussian(double mean, double sigma) {
        // Box-Muller; the spare value is discarded to keep stream state simple.
        const double u1 = uniform01();
        const double u2 = uniform01();
        return mean + sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

private:
    static std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::uint64_t state_;
    std::uint64_t inc_;
};

} // namespace cogsim

#endif
