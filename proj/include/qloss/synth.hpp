#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qloss/types.hpp"

namespace qloss {

// Noise applied by the synthetic-data generators.
//
// kIsotropicComplex adds sigma * (g1 + i g2) to complex traces; on scalar
// quantities it degrades to an absolute Gaussian of width sigma.
// kRelative scales the perturbation by the model value (fraction * |model|).
struct NoiseModel {
    enum class Kind { kNone, kIsotropicComplex, kRelative };
    Kind kind = Kind::kNone;
    double sigma = 0.0;     // absolute scale for kIsotropicComplex
    double fraction = 0.0;  // relative scale for kRelative
    std::uint64_t seed = 0;

    static NoiseModel none() { return {}; }
    static NoiseModel isotropic(double sigma, std::uint64_t seed) {
        return {Kind::kIsotropicComplex, sigma, 0.0, seed};
    }
    static NoiseModel relative(double fraction, std::uint64_t seed) {
        return {Kind::kRelative, 0.0, fraction, seed};
    }
};

struct FrequencyGrid {
    double f_start_hz = 0.0;
    double f_stop_hz = 0.0;
    std::size_t count = 0;
};

// Synthetic notch trace from known ground truth. The grid must span at
// least 6 linewidths with the resonance in the middle half, and carry at
// least 16 points; otherwise GridTooNarrow is thrown.
FrequencyTrace synth_trace(const ResonanceParams& res, const BackgroundModel& bg,
                           const FrequencyGrid& grid, const NoiseModel& noise,
                           std::optional<double> power_w = std::nullopt,
                           std::optional<double> temperature_k = std::nullopt,
                           const std::string& label = "synthetic");

// Synthetic power sweep: delta_i = tls_loss(n) perturbed per the noise model,
// with sigma recording the per-point noise scale (0 when noiseless).
std::vector<PowerSweepPoint> synth_power_sweep(const TLSModelParams& p,
                                               const std::vector<double>& n_grid,
                                               const NoiseModel& noise);

// Log-spaced photon-number grid, `per_decade` points per decade inclusive of
// both endpoints.
std::vector<double> log_grid(double n_start, double n_stop, std::size_t per_decade);

// Idealized temperature sweep of the loss at fixed photon number. This is
// the plain tanh-factor model; measured devices are known to show extra
// temperature structure that no parameter choice of this law reproduces.
std::vector<std::pair<double, double>> synth_temperature_sweep(const TLSModelParams& p,
                                                               const std::vector<double>& t_grid,
                                                               double n_fixed);

}  // namespace qloss
