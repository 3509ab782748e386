#include "priorpaint/rng.hpp"

#include <cmath>

namespace priorpaint {

std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag, std::uint64_t index) {
    // FNV-1a over the tag, folded with the seed and index through splitmix64.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return splitmix64(seed ^ splitmix64(h) ^ splitmix64(index * 0x9e3779b97f4a7c15ULL + 1));
}

std::uint64_t Rng::uniform_int(std::uint64_t n) {
    // Rejection sampling to avoid modulo bias.
    const std::uint64_t limit = n * ((~0ULL) / n);
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % n;
}

double Rng::normal(double mean, double stddev) {
    if (has_spare_) {
        has_spare_ = false;
        return mean + stddev * spare_;
    }
    double u1, u2;
    do {
        u1 = uniform01();
    } while (u1 <= 0.0);
    u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return mean + stddev * r * std::cos(a);
}

}  // namespace priorpaint
