#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace priorpaint {

// splitmix64; used to derive independent seeds from a master seed.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives a per-purpose seed from (master seed, tag, index). Stable across
/// runs and platforms, so every stream in a run is reproducible.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag, std::uint64_t index = 0);

/// Deterministic RNG. Uniform/normal draws are hand-rolled on top of
/// mt19937_64 so the bit stream does not depend on the standard library's
/// distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0,1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n); n must be > 0.
    std::uint64_t uniform_int(std::uint64_t n);

    /// Box-Muller normal draw.
    double normal(double mean = 0.0, double stddev = 1.0);

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace priorpaint
