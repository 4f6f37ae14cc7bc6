#include "qloss/types.hpp"

#include <cmath>
#include <numbers>

#include "qloss/errors.hpp"

namespace qloss {

double wrap_angle(double rad) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double w = std::remainder(rad, two_pi);
    if (w <= -std::numbers::pi) w += two_pi;  // remainder returns [-pi, pi]
    return w;
}

void validate_for_fit(const FrequencyTrace& trace) {
    if (trace.points.size() < kMinTracePoints) {
        throw ValidationError("trace '" + trace.label + "': need at least " +
                              std::to_string(kMinTracePoints) + " points, got " +
                              std::to_string(trace.points.size()));
    }
    double prev = -1.0;
    for (std::size_t i = 0; i < trace.points.size(); ++i) {
        const auto& pt = trace.points[i];
        if (!(pt.frequency_hz > prev)) {
            throw ValidationError("trace '" + trace.label +
                                  "': frequencies must be strictly increasing at point " +
                                  std::to_string(i));
        }
        if (!std::isfinite(pt.frequency_hz) || !std::isfinite(pt.s21.real()) ||
            !std::isfinite(pt.s21.imag())) {
            throw ValidationError("trace '" + trace.label + "': non-finite value at point " +
                                  std::to_string(i));
        }
        prev = pt.frequency_hz;
    }
    if (trace.applied_power_w && !(*trace.applied_power_w > 0.0)) {
        throw ValidationError("trace '" + trace.label + "': applied power must be > 0");
    }
    if (trace.temperature_k && !(*trace.temperature_k > 0.0)) {
        throw ValidationError("trace '" + trace.label + "': temperature must be > 0");
    }
}

void validate(const BackgroundModel& bg) {
    if (!(bg.amplitude > 0.0) || !std::isfinite(bg.amplitude)) {
        throw ValidationError("background amplitude must be > 0");
    }
    if (!(bg.phase_offset_rad > -std::numbers::pi) ||
        !(bg.phase_offset_rad <= std::numbers::pi)) {
        throw ValidationError("background phase offset must lie in (-pi, pi]");
    }
    if (!std::isfinite(bg.cable_delay_s)) {
        throw ValidationError("cable delay must be finite");
    }
}

void validate(const ResonanceParams& res) {
    if (!(res.f_r_hz > 0.0)) throw ValidationError("f_r must be > 0");
    if (!(res.q_loaded > 0.0)) throw ValidationError("Q_l must be > 0");
    if (!(res.qc_mag > 0.0)) throw ValidationError("|Q_c| must be > 0");
    if (!(std::abs(res.phi_rad) < std::numbers::pi / 2.0)) {
        throw ValidationError("asymmetry angle phi must satisfy |phi| < pi/2");
    }
}

void validate(const TLSModelParams& p) {
    if (!(p.f_delta0_tls >= 0.0)) throw ValidationError("F delta0_TLS must be >= 0");
    if (!(p.delta_other >= 0.0)) throw ValidationError("delta_other must be >= 0");
    if (!(p.n_c > 0.0)) throw ValidationError("n_c must be > 0");
    if (!(p.beta > 0.0 && p.beta <= 2.0)) throw ValidationError("beta must lie in (0, 2]");
    if (!(p.f_hz > 0.0)) throw ValidationError("frequency must be > 0");
    if (!(p.t_k >= 0.0)) throw ValidationError("temperature must be >= 0");
}

void validate(const PowerSweepPoint& point) {
    if (!(point.photon_number > 0.0)) throw ValidationError("photon number must be > 0");
    if (!(point.delta_i > 0.0)) throw ValidationError("delta_i must be > 0");
    if (!(point.sigma >= 0.0)) throw ValidationError("sigma must be >= 0");
}

void validate(const std::vector<PowerSweepPoint>& sweep) {
    for (std::size_t i = 0; i < sweep.size(); ++i) {
        try {
            validate(sweep[i]);
        } catch (const ValidationError& e) {
            throw ValidationError("sweep point " + std::to_string(i) + ": " + e.what());
        }
    }
}

}  // namespace qloss
