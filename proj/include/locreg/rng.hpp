#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace locreg {

/// splitmix64 step (Steele, Lea & Flood 2014); used only to derive sub-stream
/// seeds, never as the sampling engine.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seed for sub-stream `index` of a master seed: the (index+1)-th splitmix64
/// output. Distinct indices give statistically independent streams.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t state = master;
    std::uint64_t out = 0;
    for (std::uint64_t i = 0; i <= index; ++i) out = splitmix64_next(state);
    return out;
}

/// Standard-normal stream: mt19937_64 seeded via derive_seed(seed, channel),
/// Box-Muller transform with the sine draw cached. Fully specified by
/// (seed, channel) and the draw count, independent of platform RNG libraries.
class NormalStream {
public:
    NormalStream(std::uint64_t seed, std::uint64_t channel)
        : engine_(derive_seed(seed, channel)) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // u1 in (0,1], u2 in [0,1)
        const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(angle);
        have_spare_ = true;
        return r * std::cos(angle);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace locreg
