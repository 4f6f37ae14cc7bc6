#pragma once

#include "qloss/types.hpp"

namespace qloss {

// Complex notch-resonator transmission at frequency f:
//
//   S21(f) = a e^{i alpha} e^{-2 pi i f tau}
//            * [1 - (Q_l/|Q_c|) e^{i phi} / (1 + 2 i Q_l (f/f_r - 1))]
Complex s21_forward(double f_hz, const ResonanceParams& res, const BackgroundModel& bg);

struct InternalLoss {
    double delta_i = 0.0;  // 1/Q_l - cos(phi)/|Q_c|
    double q_i = 0.0;      // 1/delta_i
};

// Internal loss with the diameter (asymmetry) correction applied.
// Throws NonPhysicalFit when delta_i <= 0.
InternalLoss internal_loss(const ResonanceParams& res);

// tanh(h f / (2 k_B T)); defined as 1 at T = 0 by continuous limit.
double tls_thermal_factor(double f_hz, double t_k);

// Power-dependent TLS loss:
//
//   delta(n) = F delta0_TLS * tanh(h f / (2 k_B T)) / (1 + n/n_c)^(beta/2)
//              + delta_other
double tls_loss(double photon_number, const TLSModelParams& p);

// Mean intracavity photon number for a notch resonator driven with feedline
// power P:
//
//   <n> = 2 P Q_l^2 / (|Q_c| hbar omega_r^2),   omega_r = 2 pi f_r
//
// Conventions for <n> differ between setups by geometry factors; every
// report that contains photon numbers states this formula.
double photon_number(double p_feed_w, double f_r_hz, double q_loaded, double qc_mag);

// Feedline power that produces a given <n> on the same device.
double feed_power_for_photons(double n, double f_r_hz, double q_loaded, double qc_mag);

// LC resonance: f_r = 1 / (2 pi sqrt(L (C_C + C_L))).
double resonance_frequency(double inductance_h, double c_shunt_f, double c_ppc_f);

// dBm <-> W. Used only at the I/O boundary; everything internal is SI.
double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);

}  // namespace qloss
