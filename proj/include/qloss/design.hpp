#pragma once

#include <vector>

namespace qloss {

// One lumped-element resonator design: a parallel-plate capacitor C_C in
// parallel with a shunting capacitance C_L, resonated by inductance L.
struct LumpedDesign {
    double inductance_h = 0.0;
    double c_shunt_f = 0.0;
    double c_ppc_f = 0.0;
    double thickness_m = 0.0;
    double eps_r = 0.0;
    double area_m2 = 0.0;
    double disc_radius_m = 0.0;
    double participation = 0.0;
    double f_r_hz = 0.0;
    double inductor_loss_bound = 0.0;
};

// Checks the self-consistency of a constructed design: participation in
// (0, 1), resonance frequency matching the element values to relative
// 1e-12, and the plate area matching C_C, d, eps_r. Throws ValidationError.
void validate(const LumpedDesign& design);

// Parallel-plate capacitance needed so that L resonates with C_C + C_L at
// f_target. Throws Unreachable when the shunt alone already exceeds the
// required total capacitance.
double required_capacitance(double inductance_h, double c_shunt_f, double f_target_hz);

struct PlateGeometry {
    double area_m2 = 0.0;
    double disc_radius_m = 0.0;  // radius of a circular plate of that area
};

// Ideal parallel-plate geometry (no fringing) realizing C_C with dielectric
// thickness d and relative permittivity eps_r.
PlateGeometry ppc_geometry(double c_ppc_f, double thickness_m, double eps_r);

// Fraction of capacitive energy stored in the plate capacitor.
double participation(double c_ppc_f, double c_shunt_f);

struct Misattribution {
    double additive = 0.0;  // loss wrongly ascribed to the dielectric
    double relative = 0.0;  // additive as a fraction of the measured loss
};

// Systematic error from attributing shunt-side loss (bounded by
// inductor_loss_bound) to the film dielectric when the participation is p.
Misattribution misattribution_error(double p, double inductor_loss_bound,
                                    double delta_measured);

// Smallest participation keeping the relative misattribution at or below
// `ceiling` for the given loss bound and measured loss. Zero when the bound
// itself is zero (any participation qualifies).
double participation_for_ceiling(double inductor_loss_bound, double delta_measured,
                                 double ceiling);

struct DesignCandidate {
    LumpedDesign design;
    Misattribution misattribution;
    bool reachable = false;       // required C_C is positive
    bool meets_participation = false;
    bool meets_misattribution = false;
    bool feasible = false;
};

struct DesignRequest {
    double inductance_h = 0.0;
    double c_shunt_f = 0.0;
    double thickness_m = 0.0;
    double eps_r = 9.8;  // placeholder default; supply the measured value
    double band_start_hz = 0.0;
    double band_stop_hz = 0.0;
    int grid_count = 9;  // evenly spaced, endpoints included
    double p_min = 0.99;
    double inductor_loss_bound = 1e-4;
    double delta_expected = 3.2e-5;
    double misattribution_ceiling = 0.02;
};

struct DesignReport {
    std::vector<DesignCandidate> candidates;
    double p_required_for_ceiling = 0.0;
    int feasible_count = 0;
};

// Sweeps the band grid, composing required_capacitance -> ppc_geometry ->
// participation -> misattribution_error at each target frequency. Throws
// EmptyBand when no grid frequency yields a feasible design.
DesignReport design_report(const DesignRequest& request);

}  // namespace qloss
