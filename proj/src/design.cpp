#include "qloss/design.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qloss/constants.hpp"
#include "qloss/errors.hpp"
#include "qloss/model.hpp"

namespace qloss {

void validate(const LumpedDesign& design) {
    if (!(design.inductance_h > 0.0) || !(design.c_ppc_f > 0.0) || design.c_shunt_f < 0.0 ||
        !(design.thickness_m > 0.0) || !(design.eps_r > 0.0)) {
        throw ValidationError("lumped design element values must be positive");
    }
    if (!(design.participation > 0.0) || design.participation > 1.0 ||
        (design.participation == 1.0 && design.c_shunt_f > 0.0)) {
        throw ValidationError("participation must lie in (0, 1) for a shunted design");
    }
    const double f_check = resonance_frequency(design.inductance_h, design.c_shunt_f,
                                               design.c_ppc_f);
    if (std::abs(f_check - design.f_r_hz) > 1e-12 * design.f_r_hz) {
        throw ValidationError("design frequency inconsistent with element values");
    }
    const double area_check =
        design.c_ppc_f * design.thickness_m / (constants::vacuum_permittivity * design.eps_r);
    if (std::abs(area_check - design.area_m2) > 1e-12 * area_check) {
        throw ValidationError("design area inconsistent with capacitance and dielectric");
    }
}

double required_capacitance(double inductance_h, double c_shunt_f, double f_target_hz) {
    if (!(inductance_h > 0.0) || c_shunt_f < 0.0 || !(f_target_hz > 0.0)) {
        throw ValidationError("required_capacitance needs L > 0, C_L >= 0, f > 0");
    }
    const double omega = 2.0 * std::numbers::pi * f_target_hz;
    const double c_total = 1.0 / (inductance_h * omega * omega);
    const double c_ppc = c_total - c_shunt_f;
    if (!(c_ppc > 0.0)) {
        throw Unreachable("shunt capacitance alone exceeds the total capacitance for " +
                          std::to_string(f_target_hz) + " Hz");
    }
    return c_ppc;
}

PlateGeometry ppc_geometry(double c_ppc_f, double thickness_m, double eps_r) {
    if (!(c_ppc_f > 0.0) || !(thickness_m > 0.0) || !(eps_r > 0.0)) {
        throw ValidationError("ppc_geometry needs positive capacitance, thickness, eps_r");
    }
    PlateGeometry geom;
    geom.area_m2 = c_ppc_f * thickness_m / (constants::vacuum_permittivity * eps_r);
    geom.disc_radius_m = std::sqrt(geom.area_m2 / std::numbers::pi);
    return geom;
}

double participation(double c_ppc_f, double c_shunt_f) {
    if (!(c_ppc_f > 0.0) || c_shunt_f < 0.0) {
        throw ValidationError("participation needs C_C > 0 and C_L >= 0");
    }
    return c_ppc_f / (c_ppc_f + c_shunt_f);
}

Misattribution misattribution_error(double p, double inductor_loss_bound,
                                    double delta_measured) {
    if (!(p > 0.0) || !(p < 1.0)) {
        throw ValidationError("participation must lie in (0, 1)");
    }
    if (inductor_loss_bound < 0.0 || !(delta_measured > 0.0)) {
        throw ValidationError("loss bound must be >= 0 and measured loss > 0");
    }
    Misattribution out;
    out.additive = (1.0 - p) * inductor_loss_bound;
    out.relative = out.additive / delta_measured;
    return out;
}

double participation_for_ceiling(double inductor_loss_bound, double delta_measured,
                                 double ceiling) {
    if (inductor_loss_bound < 0.0 || !(delta_measured > 0.0) || !(ceiling > 0.0)) {
        throw ValidationError("participation_for_ceiling needs bound >= 0, loss > 0, ceiling > 0");
    }
    if (inductor_loss_bound == 0.0) {
        return 0.0;
    }
    return std::max(1.0 - ceiling * delta_measured / inductor_loss_bound, 0.0);
}

DesignReport design_report(const DesignRequest& request) {
    if (!(request.band_start_hz > 0.0) || request.band_stop_hz < request.band_start_hz) {
        throw ValidationError("band must satisfy 0 < start <= stop");
    }
    if (request.grid_count < 1) {
        throw ValidationError("grid_count must be >= 1");
    }
    if (!(request.p_min > 0.0) || !(request.p_min < 1.0)) {
        throw ValidationError("p_min must lie in (0, 1)");
    }

    DesignReport report;
    report.p_required_for_ceiling = participation_for_ceiling(
        request.inductor_loss_bound, request.delta_expected, request.misattribution_ceiling);

    const int count = request.band_stop_hz == request.band_start_hz ? 1 : request.grid_count;
    for (int k = 0; k < count; ++k) {
        const double frac =
            count == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(count - 1);
        const double f_target =
            request.band_start_hz + frac * (request.band_stop_hz - request.band_start_hz);

        DesignCandidate cand;
        cand.design.inductance_h = request.inductance_h;
        cand.design.c_shunt_f = request.c_shunt_f;
        cand.design.thickness_m = request.thickness_m;
        cand.design.eps_r = request.eps_r;
        cand.design.inductor_loss_bound = request.inductor_loss_bound;
        cand.design.f_r_hz = f_target;
        try {
            cand.design.c_ppc_f = required_capacitance(request.inductance_h, request.c_shunt_f,
                                                       f_target);
            cand.reachable = true;
        } catch (const Unreachable&) {
            report.candidates.push_back(cand);
            continue;
        }
        const PlateGeometry geom =
            ppc_geometry(cand.design.c_ppc_f, request.thickness_m, request.eps_r);
        cand.design.area_m2 = geom.area_m2;
        cand.design.disc_radius_m = geom.disc_radius_m;
        cand.design.participation = participation(cand.design.c_ppc_f, request.c_shunt_f);
        if (cand.design.participation < 1.0) {
            cand.misattribution =
                misattribution_error(cand.design.participation, request.inductor_loss_bound,
                                     request.delta_expected);
        }
        cand.meets_participation = cand.design.participation >= request.p_min;
        cand.meets_misattribution =
            cand.misattribution.relative <= request.misattribution_ceiling;
        cand.feasible = cand.reachable && cand.meets_participation && cand.meets_misattribution;
        if (cand.feasible) {
            ++report.feasible_count;
        }
        report.candidates.push_back(cand);
    }

    if (report.feasible_count == 0) {
        throw EmptyBand("no grid frequency in [" + std::to_string(request.band_start_hz) + ", " +
                        std::to_string(request.band_stop_hz) + "] Hz yields a feasible design");
    }
    return report;
}

}  // namespace qloss
