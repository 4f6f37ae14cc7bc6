#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace qloss {

using Complex = std::complex<double>;

// One sample of a complex transmission sweep.
struct TracePoint {
    double frequency_hz = 0.0;
    Complex s21;
};

// One complex transmission sweep with measurement metadata.
//
// Power and temperature are optional at ingestion time: Touchstone files
// cannot carry them, so they arrive later via sidecar files or CLI flags.
// Fitting a bare trace is allowed; photon-number conversion is not.
struct FrequencyTrace {
    std::vector<TracePoint> points;
    std::optional<double> applied_power_w;   // feedline power, W
    std::optional<double> temperature_k;     // mixing-chamber temperature, K
    std::string label;
};

// Minimum number of points a trace must have before it is fit.
inline constexpr std::size_t kMinTracePoints = 16;

// Throws ValidationError unless the trace is fit-ready: frequencies strictly
// increasing, at least kMinTracePoints points, all values finite, and any
// attached power/temperature positive.
void validate_for_fit(const FrequencyTrace& trace);

// Instrument-chain background: amplitude, phase offset, cable delay.
struct BackgroundModel {
    double amplitude = 1.0;       // a > 0
    double phase_offset_rad = 0.0;  // alpha, normalized to (-pi, pi]
    double cable_delay_s = 0.0;   // tau
};

// Notch-resonance lineshape parameters.
struct ResonanceParams {
    double f_r_hz = 0.0;    // resonance frequency
    double q_loaded = 0.0;  // Q_l
    double qc_mag = 0.0;    // |Q_c|
    double phi_rad = 0.0;   // impedance-mismatch asymmetry angle, |phi| < pi/2
};

void validate(const BackgroundModel& bg);
void validate(const ResonanceParams& res);

// Saturable two-level-system loss law at fixed frequency and temperature.
struct TLSModelParams {
    double f_delta0_tls = 0.0;  // F * delta0_TLS, dimensionless
    double delta_other = 0.0;   // power-independent loss
    double n_c = 1.0;           // critical photon number
    double beta = 1.0;          // saturation exponent, in (0, 2]
    double f_hz = 0.0;
    double t_k = 0.0;           // T = 0 allowed (tanh factor -> 1)
};

void validate(const TLSModelParams& p);

// One point of a power sweep: loss vs mean photon number.
struct PowerSweepPoint {
    double photon_number = 0.0;  // <n> > 0
    double delta_i = 0.0;        // internal loss, > 0
    double sigma = 0.0;          // 1-sigma uncertainty of delta_i; 0 = unknown
};

void validate(const PowerSweepPoint& point);
void validate(const std::vector<PowerSweepPoint>& sweep);

// Wraps an angle into (-pi, pi].
double wrap_angle(double rad);

}  // namespace qloss
