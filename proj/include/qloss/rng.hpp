#pragma once

#include <cstdint>
#include <string_view>

namespace qloss {

// SplitMix64 (Steele, Lea & Flood 2014), the fixed generator behind every
// synthetic-data stream. The integer stream is bit-exact on any platform;
// Gaussian variates come from the trigonometric Box-Muller transform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal variate.
    double normal();

    // Log-uniform in [lo, hi), lo > 0.
    double log_uniform(double lo, double hi);

    // Deterministically derived generator for an independent task stream.
    Rng split(std::uint64_t stream) const {
        Rng r(state_ ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
        r.next_u64();
        return r;
    }

private:
    std::uint64_t state_;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

// Per-task seed derived from a base seed and a text label (FNV-1a mixing).
std::uint64_t derive_seed(std::uint64_t base, std::string_view label);

}  // namespace qloss
