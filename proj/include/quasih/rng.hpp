// rng.hpp — counter-based deterministic random source.
//
// Output i is mix64(seed + i*GAMMA) with the splitmix64 finalizer, so streams
// are reproducible across platforms and independent draws can be addressed by
// counter. All randomness in the library flows through this type.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "quasih/linalg.hpp"

namespace quasih {

class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = seed_ + (++counter_) * 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_double();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    cplx next_cgauss() {
        const double re = next_gaussian();
        const double im = next_gaussian();
        return {re, im};
    }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace quasih
