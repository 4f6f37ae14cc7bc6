#include "qloss/synth.hpp"

#include <cmath>
#include <string>

#include "qloss/errors.hpp"
#include "qloss/model.hpp"
#include "qloss/rng.hpp"

namespace qloss {

FrequencyTrace synth_trace(const ResonanceParams& res, const BackgroundModel& bg,
                           const FrequencyGrid& grid, const NoiseModel& noise,
                           std::optional<double> power_w, std::optional<double> temperature_k,
                           const std::string& label) {
    validate(res);
    validate(bg);
    if (grid.count < kMinTracePoints) {
        throw GridTooNarrow("grid must carry at least " + std::to_string(kMinTracePoints) +
                            " points, got " + std::to_string(grid.count));
    }
    const double span = grid.f_stop_hz - grid.f_start_hz;
    const double linewidth = res.f_r_hz / res.q_loaded;
    if (!(span >= 6.0 * linewidth)) {
        throw GridTooNarrow("grid span must cover at least 6 linewidths");
    }
    const double lo_quarter = grid.f_start_hz + 0.25 * span;
    const double hi_quarter = grid.f_stop_hz - 0.25 * span;
    if (!(res.f_r_hz >= lo_quarter && res.f_r_hz <= hi_quarter)) {
        throw GridTooNarrow("resonance must lie in the middle half of the grid");
    }

    Rng rng(noise.seed);
    FrequencyTrace trace;
    trace.label = label;
    if (power_w) trace.applied_power_w = *power_w;
    if (temperature_k) trace.temperature_k = *temperature_k;
    trace.points.reserve(grid.count);
    const double step = span / static_cast<double>(grid.count - 1);
    for (std::size_t k = 0; k < grid.count; ++k) {
        const double f = grid.f_start_hz + step * static_cast<double>(k);
        Complex value = s21_forward(f, res, bg);
        switch (noise.kind) {
            case NoiseModel::Kind::kNone:
                break;
            case NoiseModel::Kind::kIsotropicComplex:
                value += noise.sigma * Complex(rng.normal(), rng.normal());
                break;
            case NoiseModel::Kind::kRelative:
                value += noise.fraction * std::abs(value) * Complex(rng.normal(), rng.normal());
                break;
        }
        trace.points.push_back({f, value});
    }
    return trace;
}

std::vector<double> log_grid(double n_start, double n_stop, std::size_t per_decade) {
    const double lo = std::log10(n_start);
    const double hi = std::log10(n_stop);
    const auto count =
        static_cast<std::size_t>(std::llround((hi - lo) * static_cast<double>(per_decade))) + 1;
    std::vector<double> grid;
    grid.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(count - 1);
        grid.push_back(std::pow(10.0, lo + (hi - lo) * t));
    }
    return grid;
}

std::vector<PowerSweepPoint> synth_power_sweep(const TLSModelParams& p,
                                               const std::vector<double>& n_grid,
                                               const NoiseModel& noise) {
    validate(p);
    double prev = 0.0;
    for (double n : n_grid) {
        if (!(n > prev)) throw ValidationError("photon-number grid must be positive, increasing");
        prev = n;
    }

    Rng rng(noise.seed);
    std::vector<PowerSweepPoint> sweep;
    sweep.reserve(n_grid.size());
    for (double n : n_grid) {
        const double model = tls_loss(n, p);
        double value = model;
        double scale = 0.0;
        switch (noise.kind) {
            case NoiseModel::Kind::kNone:
                break;
            case NoiseModel::Kind::kIsotropicComplex:
                scale = noise.sigma;
                value += scale * rng.normal();
                break;
            case NoiseModel::Kind::kRelative:
                scale = noise.fraction * model;
                value += scale * rng.normal();
                break;
        }
        // Reflect the rare excursion below zero so points stay physical.
        if (value <= 0.0) value = std::abs(value);
        if (value == 0.0) value = 1e-300;
        sweep.push_back({n, value, scale});
    }
    return sweep;
}

std::vector<std::pair<double, double>> synth_temperature_sweep(const TLSModelParams& p,
                                                               const std::vector<double>& t_grid,
                                                               double n_fixed) {
    validate(p);
    double prev = 0.0;
    for (double t : t_grid) {
        if (!(t > prev)) throw ValidationError("temperature grid must be positive, increasing");
        prev = t;
    }
    std::vector<std::pair<double, double>> sweep;
    sweep.reserve(t_grid.size());
    TLSModelParams q = p;
    for (double t : t_grid) {
        q.t_k = t;
        sweep.emplace_back(t, tls_loss(n_fixed, q));
    }
    return sweep;
}

}  // namespace qloss
