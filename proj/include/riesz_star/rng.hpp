#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace riesz {

// Seeded uniform generator. mt19937_64's integer sequence is pinned by the
// standard; the mapping to doubles is done here explicitly (ldexp of the top
// 53 bits) because std::uniform_real_distribution is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // Uniform in [0, 1).
    double uniform() { return std::ldexp(static_cast<double>(eng_() >> 11), -53); }

    // Uniform in [a, b).
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // Uniform integer in [0, n).
    std::uint64_t uniform_index(std::uint64_t n) { return eng_() % n; }

    // Standard normal via Box-Muller (deterministic given the seed).
    double normal() {
        double u1 = 0.0;
        do { u1 = uniform(); } while (u1 <= 0.0);
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

private:
    std::mt19937_64 eng_;
};

} // namespace riesz
