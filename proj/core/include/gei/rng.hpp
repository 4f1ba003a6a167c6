#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace gei {

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives a child seed from a root seed and a path of counters.
/// Distinct paths give statistically independent streams.
std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path) noexcept;

/// Maps 64 random bits to a double in the open interval (0, 1).
constexpr double bits_to_open_unit(std::uint64_t bits) noexcept {
    return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

/// Seeded engine with the handful of variates the library needs.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return bits_to_open_unit(engine_()); }
    double normal() { return normal_(engine_); }
    double exponential() { return -std::log(uniform()); }
    double gamma(double shape) { return std::gamma_distribution<double>(shape, 1.0)(engine_); }
    std::uint64_t bits() { return engine_(); }
    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace gei
