#include "qloss/model.hpp"

#include <cmath>
#include <numbers>

#include "qloss/constants.hpp"
#include "qloss/errors.hpp"

namespace qloss {

using std::numbers::pi;

Complex s21_forward(double f_hz, const ResonanceParams& res, const BackgroundModel& bg) {
    const Complex i(0.0, 1.0);
    const Complex background =
        bg.amplitude * std::exp(i * bg.phase_offset_rad) *
        std::exp(-2.0 * pi * i * f_hz * bg.cable_delay_s);
    const double detuning = f_hz / res.f_r_hz - 1.0;
    const Complex resonance = (res.q_loaded / res.qc_mag) * std::exp(i * res.phi_rad) /
                              (1.0 + 2.0 * i * res.q_loaded * detuning);
    return background * (1.0 - resonance);
}

InternalLoss internal_loss(const ResonanceParams& res) {
    const double delta_i = 1.0 / res.q_loaded - std::cos(res.phi_rad) / res.qc_mag;
    if (!(delta_i > 0.0)) {
        throw NonPhysicalFit("internal loss is non-positive (delta_i = " +
                             std::to_string(delta_i) + "); degenerate over-coupled fit");
    }
    return InternalLoss{delta_i, 1.0 / delta_i};
}

double tls_thermal_factor(double f_hz, double t_k) {
    if (t_k == 0.0) return 1.0;
    return std::tanh(constants::planck_h * f_hz / (2.0 * constants::boltzmann_kb * t_k));
}

double tls_loss(double photon_number, const TLSModelParams& p) {
    const double thermal = tls_thermal_factor(p.f_hz, p.t_k);
    const double saturation = std::pow(1.0 + photon_number / p.n_c, -p.beta / 2.0);
    return p.f_delta0_tls * thermal * saturation + p.delta_other;
}

double photon_number(double p_feed_w, double f_r_hz, double q_loaded, double qc_mag) {
    const double omega = 2.0 * pi * f_r_hz;
    return 2.0 * p_feed_w * q_loaded * q_loaded / (qc_mag * constants::hbar * omega * omega);
}

double feed_power_for_photons(double n, double f_r_hz, double q_loaded, double qc_mag) {
    const double omega = 2.0 * pi * f_r_hz;
    return n * qc_mag * constants::hbar * omega * omega / (2.0 * q_loaded * q_loaded);
}

double resonance_frequency(double inductance_h, double c_shunt_f, double c_ppc_f) {
    return 1.0 / (2.0 * pi * std::sqrt(inductance_h * (c_ppc_f + c_shunt_f)));
}

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watt_to_dbm(double watt) { return 10.0 * std::log10(watt) + 30.0; }

}  // namespace qloss
