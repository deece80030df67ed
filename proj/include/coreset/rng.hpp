#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace coreset {

// Seeded random stream with explicit uniform/normal mappings. The standard
// distributions are implementation-defined, so we map engine output ourselves
// to keep artifacts byte-identical for a given seed.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform on (0, 1]; safe as a log() argument.
    double uniform_open() {
        return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; one spare is cached per pair.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform_open();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    // Uniform integer in [0, n).
    std::uint64_t uniform_index(std::uint64_t n) {
        // Rejection-free modulo is biased for huge n; our n are tiny.
        return engine_() % n;
    }

    // Derive an independent stream (for per-trial seeding in harnesses).
    std::uint64_t derive() { return engine_(); }

  private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace coreset
