#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace deba {

/// splitmix64 finalizer, used to derive independent stream seeds from one master seed.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seeded random source with platform-stable draws.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The std:: distributions are not, so uniform and normal draws
/// are computed here to keep CSV output byte-identical across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(mix_seed(seed)), engine_(seed_) {}

    /// Independent child stream; the parent is not advanced.
    [[nodiscard]] Rng stream(std::uint64_t tag) const { return Rng(seed_ ^ mix_seed(tag + 1)); }

    /// Uniform in [0, 1) with 53 bits of resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t next() { return engine_(); }

    /// Standard normal via Box-Muller; one draw per call (the sine branch is discarded).
    double normal()
    {
        double u1 = uniform();
        while (u1 <= 0.0) {
            u1 = uniform();
        }
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

} // namespace deba
