#include "qloss/rng.hpp"

#include <cmath>
#include <numbers>

namespace qloss {

double Rng::normal() {
    if (have_cached_) {
        have_cached_ = false;
        return cached_;
    }
    // u1 in (0, 1] keeps the log finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(angle);
    have_cached_ = true;
    return r * std::cos(angle);
}

double Rng::log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
}

std::uint64_t derive_seed(std::uint64_t base, std::string_view label) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : label) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    Rng r(base ^ h);
    return r.next_u64();
}

}  // namespace qloss
