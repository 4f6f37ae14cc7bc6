#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qloss/types.hpp"

namespace qloss {

// Resonator context needed to convert feedline power into photon number.
struct PhotonContext {
    double f_r_hz = 0.0;
    double q_loaded = 0.0;
    double qc_mag = 0.0;
};

// Parses a power-sweep CSV with header `photon_number,delta_i,sigma` or
// `power_dbm,delta_i,sigma`. Power-keyed files need a PhotonContext for the
// dBm -> photon-number conversion. Output is validated and sorted by photon
// number; sigma = 0 means unknown.
std::vector<PowerSweepPoint> parse_sweep_csv(
    const std::string& text, const std::optional<PhotonContext>& context = std::nullopt);

// Serializes points photon-number-keyed, full double precision.
std::string write_sweep_csv(const std::vector<PowerSweepPoint>& points);

}  // namespace qloss
