#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace neusoc {

/// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed for the substream identified by a path of indices below `seed`.
/// Streams depend only on their path, never on draw order elsewhere.
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = splitmix64(seed);
    for (auto p : path) s = splitmix64(s ^ splitmix64(p + 0xD1B54A32D192ED03ULL));
    return s;
}

/// mt19937_64 with portable uniform / exponential draws (the std::
/// distributions are implementation-defined, so they are avoided).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Exponential variate with the given rate (> 0).
    double exponential(double rate);

private:
    std::mt19937_64 engine_;
};

}  // namespace neusoc
