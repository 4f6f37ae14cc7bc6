#include <doctest.h>

#include <cmath>
#include <vector>

#include "qloss/design.hpp"
#include "qloss/errors.hpp"
#include "qloss/model.hpp"

namespace {

constexpr double kL = 1.0e-9;        // 1 nH
constexpr double kShunt = 1.0e-14;   // 10 fF
constexpr double kTarget = 5.0e9;

// Independently derived: C_total = 1/(L (2 pi f)^2) at 1 nH, 5 GHz.
constexpr double kCTotal = 1.0132118364233777e-12;
constexpr double kCC = kCTotal - kShunt;

}  // namespace

TEST_CASE("required capacitance inverts the resonance condition") {
    const double cc = qloss::required_capacitance(kL, kShunt, kTarget);
    CHECK(cc == doctest::Approx(kCC).epsilon(1e-9));
    CHECK(qloss::resonance_frequency(kL, kShunt, cc) == doctest::Approx(kTarget).epsilon(1e-12));
    CHECK_THROWS_AS(qloss::required_capacitance(kL, 2.0e-12, kTarget), qloss::Unreachable);
}

TEST_CASE("plate geometry matches the parallel-plate formula") {
    const auto geo = qloss::ppc_geometry(kCC, 58.3e-9, 9.8);
    CHECK(geo.area_m2 == doctest::Approx(6.7404e-10).epsilon(1e-4));
    CHECK(geo.disc_radius_m == doctest::Approx(std::sqrt(geo.area_m2 / M_PI)).epsilon(1e-12));

    // Full tuning capacitance on the thick and thin films.
    CHECK(qloss::ppc_geometry(kCTotal, 58.3e-9, 9.8).area_m2 ==
          doctest::Approx(6.8075e-10).epsilon(1e-4));
    CHECK(qloss::ppc_geometry(kCTotal, 13.5e-9, 9.8).area_m2 ==
          doctest::Approx(1.576355e-10).epsilon(1e-5));

    // Halving the dielectric thickness halves the area.
    const auto half = qloss::ppc_geometry(kCC, 58.3e-9 / 2.0, 9.8);
    CHECK(half.area_m2 == doctest::Approx(geo.area_m2 / 2.0).epsilon(1e-12));
}

TEST_CASE("participation and misattribution follow the energy split") {
    const double p = qloss::participation(kCC, kShunt);
    CHECK(p == doctest::Approx(0.9901303955989107).epsilon(1e-9));

    const auto at995 = qloss::misattribution_error(0.995, 1.0e-4, 3.2e-5);
    CHECK(at995.additive == doctest::Approx(5.0e-7).epsilon(1e-12));
    CHECK(at995.relative == doctest::Approx(0.015625).epsilon(1e-12));

    const auto at990 = qloss::misattribution_error(0.99, 1.0e-4, 3.2e-5);
    CHECK(at990.relative == doctest::Approx(0.03125).epsilon(1e-12));

    CHECK(qloss::participation_for_ceiling(1.0e-4, 3.2e-5, 0.02) ==
          doctest::Approx(0.9936).epsilon(1e-12));
    CHECK(qloss::participation_for_ceiling(0.0, 3.2e-5, 0.02) == 0.0);
}

TEST_CASE("design report sweeps the band and grades candidates") {
    qloss::DesignRequest req;
    req.inductance_h = kL;
    req.c_shunt_f = kShunt;
    req.thickness_m = 58.3e-9;
    req.band_start_hz = 4.0e9;
    req.band_stop_hz = 6.0e9;
    const auto report = qloss::design_report(req);
    REQUIRE(report.candidates.size() == 9);
    CHECK(report.p_required_for_ceiling == doctest::Approx(0.9936).epsilon(1e-12));
    CHECK(report.feasible_count >= 1);

    // Participation falls and misattribution grows toward higher frequency.
    for (std::size_t i = 1; i < report.candidates.size(); ++i) {
        const auto& lo = report.candidates[i - 1];
        const auto& hi = report.candidates[i];
        CHECK(lo.design.participation > hi.design.participation);
        CHECK(lo.misattribution.relative < hi.misattribution.relative);
    }
    for (const auto& cand : report.candidates) {
        CHECK(cand.reachable);
        CHECK_NOTHROW(qloss::validate(cand.design));
        CHECK(cand.feasible == (cand.meets_participation && cand.meets_misattribution));
    }
}

TEST_CASE("a single-frequency band produces one candidate") {
    qloss::DesignRequest req;
    req.inductance_h = kL;
    req.c_shunt_f = kShunt;
    req.thickness_m = 58.3e-9;
    req.band_start_hz = kTarget;
    req.band_stop_hz = kTarget;
    // At 5 GHz the participation is 0.99013: above the default p_min but
    // short of the 2%-ceiling requirement, so relax the ceiling.
    req.misattribution_ceiling = 0.035;
    const auto report = qloss::design_report(req);
    REQUIRE(report.candidates.size() == 1);
    const auto& only = report.candidates[0];
    CHECK(only.design.f_r_hz == doctest::Approx(kTarget).epsilon(1e-12));
    CHECK(only.design.c_ppc_f == doctest::Approx(kCC).epsilon(1e-9));
    CHECK(only.feasible);
}

TEST_CASE("an oversized shunt leaves the whole band infeasible") {
    qloss::DesignRequest req;
    req.inductance_h = kL;
    req.c_shunt_f = 1.0e-12;
    req.thickness_m = 58.3e-9;
    req.band_start_hz = 4.0e9;
    req.band_stop_hz = 8.0e9;
    CHECK_THROWS_AS(qloss::design_report(req), qloss::EmptyBand);
}
