#pragma once

#include <numbers>

namespace qloss::constants {

// CODATA 2018. h and k_B are exact by SI definition.
inline constexpr double planck_h = 6.62607015e-34;        // J s
inline constexpr double boltzmann_kb = 1.380649e-23;      // J/K
inline constexpr double hbar = planck_h / (2.0 * std::numbers::pi);  // J s
inline constexpr double vacuum_permittivity = 8.8541878128e-12;     // F/m

}  // namespace qloss::constants
