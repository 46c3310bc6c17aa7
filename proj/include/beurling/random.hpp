#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string_view>

namespace beurling {

/// Seeded, splittable random source.
///
/// Uses std::mt19937_64 (whose output sequence is fixed by the standard) and
/// converts bits to doubles by hand, so streams are identical across standard
/// library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }

    /// Independent child stream keyed by a label.
    Rng split(std::string_view label) const {
        std::uint64_t h = 1469598103934665603ULL;
        for (unsigned char c : label) {
            h ^= c;
            h *= 1099511628211ULL;
        }
        return Rng(mix(seed_ + 0x9e3779b97f4a7c15ULL * (h | 1ULL)));
    }

    Rng split(std::uint64_t index) const { return Rng(mix(seed_ ^ mix(index + 0x632be59bd9b4e019ULL))); }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n).
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n; }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * M_PI * u2);
        has_spare_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

    std::complex<double> complex_normal() { return {normal(), normal()}; }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace beurling
