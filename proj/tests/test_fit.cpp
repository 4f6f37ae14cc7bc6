#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "qloss/errors.hpp"
#include "qloss/fit.hpp"
#include "qloss/model.hpp"
#include "qloss/rng.hpp"
#include "qloss/synth.hpp"
#include "qloss/types.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846;

const qloss::ResonanceParams kRes{5.0e9, 5.0e4, 1.0e5, 0.2};
const qloss::BackgroundModel kBg{0.9, 0.1, 30e-9};
const qloss::FrequencyGrid kGrid{5.0e9 - 6.0e5, 5.0e9 + 6.0e5, 801};

qloss::Complex background_only(double f_hz, const qloss::BackgroundModel& bg) {
    return std::polar(bg.amplitude, bg.phase_offset_rad - 2.0 * kPi * f_hz * bg.cable_delay_s);
}

qloss::FrequencyTrace ramp_trace(std::size_t count, double f_start, double f_stop,
                                 const qloss::BackgroundModel& bg) {
    qloss::FrequencyTrace trace;
    trace.label = "background-only";
    for (std::size_t i = 0; i < count; ++i) {
        const double f =
            f_start + (f_stop - f_start) * static_cast<double>(i) / static_cast<double>(count - 1);
        trace.points.push_back({f, background_only(f, bg)});
    }
    return trace;
}

void check_params(const qloss::FitResult& fit, const qloss::ResonanceParams& res,
                  const qloss::BackgroundModel& bg, double rel) {
    CHECK(fit.params.f_r_hz == doctest::Approx(res.f_r_hz).epsilon(rel));
    CHECK(fit.params.q_loaded == doctest::Approx(res.q_loaded).epsilon(rel));
    CHECK(fit.params.qc_mag == doctest::Approx(res.qc_mag).epsilon(rel));
    CHECK(fit.params.phi_rad == doctest::Approx(res.phi_rad).epsilon(rel));
    CHECK(fit.background.amplitude == doctest::Approx(bg.amplitude).epsilon(rel));
    CHECK(fit.background.phase_offset_rad == doctest::Approx(bg.phase_offset_rad).epsilon(rel));
    CHECK(fit.background.cable_delay_s == doctest::Approx(bg.cable_delay_s).epsilon(rel));
}

double median(std::vector<double> v) {
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    return v[mid];
}

}  // namespace

TEST_CASE("background estimation recovers the instrument chain around a broad dip") {
    const qloss::ResonanceParams broad{5.0e9, 500.0, 1.0e4, 0.2};
    const qloss::BackgroundModel bg{0.8, 0.3, 50e-9};
    const auto trace = qloss::synth_trace(broad, bg, {4.0e9, 6.0e9, 4001},
                                          qloss::NoiseModel::isotropic(0.008, 7));
    qloss::FitConfig cfg;
    cfg.wing_fraction = 0.2;
    const auto est = qloss::estimate_background(trace, cfg);
    CHECK(est.amplitude == doctest::Approx(bg.amplitude).epsilon(1e-2));
    CHECK(est.cable_delay_s == doctest::Approx(bg.cable_delay_s).epsilon(1e-2));
    CHECK(std::abs(est.phase_offset_rad - bg.phase_offset_rad) < 0.01);
}

TEST_CASE("background estimation is exact on a resonance-free trace") {
    const qloss::BackgroundModel bg{1.25, -0.4, 12e-9};
    const auto trace = ramp_trace(64, 1.0e9, 1.1e9, bg);
    qloss::FitConfig cfg;
    cfg.wing_fraction = 0.25;
    const auto est = qloss::estimate_background(trace, cfg);
    CHECK(est.amplitude == doctest::Approx(bg.amplitude).epsilon(1e-9));
    CHECK(est.phase_offset_rad == doctest::Approx(bg.phase_offset_rad).epsilon(1e-9));
    CHECK(est.cable_delay_s == doctest::Approx(bg.cable_delay_s).epsilon(1e-9));
}

TEST_CASE("too few wing points is rejected") {
    qloss::FitConfig cfg;  // wing_fraction 0.1
    CHECK_THROWS_AS(qloss::estimate_background(ramp_trace(8, 1.0e9, 1.1e9, {}), cfg),
                    qloss::InsufficientWings);
    // Full pipeline: 20 points pass trace validation but leave 2-point wings.
    const auto trace = qloss::synth_trace(kRes, kBg, {5.0e9 - 6.0e5, 5.0e9 + 6.0e5, 20},
                                          qloss::NoiseModel::none());
    CHECK_THROWS_AS(qloss::fit_resonance(trace), qloss::InsufficientWings);
}

TEST_CASE("phase fit recovers the arctangent profile exactly") {
    std::vector<double> freqs;
    std::vector<double> theta;
    for (std::size_t i = 0; i < 801; ++i) {
        const double f = kGrid.f_start_hz +
                         (kGrid.f_stop_hz - kGrid.f_start_hz) * static_cast<double>(i) / 800.0;
        freqs.push_back(f);
        theta.push_back(0.3 + 2.0 * std::atan(2.0 * 5.0e4 * (1.0 - f / 5.0e9)));
    }
    const auto fit = qloss::phase_fit(freqs, theta, {});
    CHECK(fit.converged);
    CHECK(std::abs(fit.f_r_hz - 5.0e9) < 5.0);
    CHECK(fit.q_loaded == doctest::Approx(5.0e4).epsilon(1e-6));
    CHECK(std::abs(fit.theta0_rad - 0.3) < 1e-6);
}

TEST_CASE("phase fit stays accurate under phase noise") {
    std::vector<double> freqs;
    std::vector<double> clean;
    for (std::size_t i = 0; i < 801; ++i) {
        const double f = kGrid.f_start_hz +
                         (kGrid.f_stop_hz - kGrid.f_start_hz) * static_cast<double>(i) / 800.0;
        freqs.push_back(f);
        clean.push_back(0.3 + 2.0 * std::atan(2.0 * 5.0e4 * (1.0 - f / 5.0e9)));
    }
    std::vector<double> errs;
    for (int trial = 0; trial < 200; ++trial) {
        qloss::Rng rng(qloss::derive_seed(99, "phase-mc-" + std::to_string(trial)));
        auto noisy = clean;
        for (auto& th : noisy) {
            th += 0.0628 * rng.normal();
        }
        const auto fit = qloss::phase_fit(freqs, noisy, {});
        errs.push_back(std::abs(fit.q_loaded - 5.0e4) / 5.0e4);
    }
    CHECK(median(errs) < 0.02);
}

TEST_CASE("windingless phase profile is rejected") {
    std::vector<double> freqs;
    std::vector<double> theta(100, 0.3);
    for (std::size_t i = 0; i < 100; ++i) {
        freqs.push_back(5.0e9 + 1.0e3 * static_cast<double>(i));
    }
    CHECK_THROWS_AS(qloss::phase_fit(freqs, theta, {}), qloss::NoResonance);
}

TEST_CASE("noiseless transmission fit recovers all seven parameters") {
    const auto trace = qloss::synth_trace(kRes, kBg, kGrid, qloss::NoiseModel::none());
    const auto fit = qloss::fit_resonance(trace);
    CHECK(fit.converged);
    check_params(fit, kRes, kBg, 1e-6);
    const auto loss = qloss::internal_loss(kRes);
    CHECK(fit.delta_i == doctest::Approx(loss.delta_i).epsilon(1e-6));
    CHECK(fit.q_i == doctest::Approx(loss.q_i).epsilon(1e-6));
    CHECK(fit.q_i == doctest::Approx(1.0 / fit.delta_i).epsilon(1e-12));
}

TEST_CASE("fit results are deterministic for a fixed seed") {
    const auto trace =
        qloss::synth_trace(kRes, kBg, kGrid, qloss::NoiseModel::isotropic(0.01, 555));
    const auto a = qloss::fit_resonance(trace);
    const auto b = qloss::fit_resonance(trace);
    CHECK(a.params.f_r_hz == b.params.f_r_hz);
    CHECK(a.params.q_loaded == b.params.q_loaded);
    CHECK(a.params.qc_mag == b.params.qc_mag);
    CHECK(a.params.phi_rad == b.params.phi_rad);
    CHECK(a.background.cable_delay_s == b.background.cable_delay_s);
    CHECK(a.residual_norm == b.residual_norm);
    CHECK(a.iterations == b.iterations);
    CHECK((a.covariance.array() == b.covariance.array()).all());
}

TEST_CASE("an added cable delay lands in the background, not the resonance") {
    auto trace = qloss::synth_trace(kRes, kBg, kGrid, qloss::NoiseModel::none());
    for (auto& pt : trace.points) {
        pt.s21 *= std::polar(1.0, -2.0 * kPi * pt.frequency_hz * 10e-9);
    }
    const auto fit = qloss::fit_resonance(trace);
    CHECK(fit.converged);
    qloss::BackgroundModel delayed = kBg;
    delayed.cable_delay_s = 40e-9;
    check_params(fit, kRes, delayed, 1e-6);
}

TEST_CASE("a loaded Q above the coupling limit is non-physical") {
    const qloss::ResonanceParams overcoupled{5.0e9, 1.0e5, 8.0e4, 0.0};
    const auto trace = qloss::synth_trace(overcoupled, kBg, {5.0e9 - 3.0e5, 5.0e9 + 3.0e5, 801},
                                          qloss::NoiseModel::none());
    CHECK_THROWS_AS(qloss::fit_resonance(trace), qloss::NonPhysicalFit);
}

TEST_CASE("a flat line is not a resonance") {
    qloss::FrequencyTrace trace;
    trace.label = "flat";
    for (std::size_t i = 0; i < 101; ++i) {
        trace.points.push_back({5.0e9 + 1.0e3 * static_cast<double>(i), {1.0, 0.0}});
    }
    CHECK_THROWS_AS(qloss::fit_resonance(trace), qloss::NoResonance);
}

TEST_CASE("fit covariance is symmetric positive semi-definite") {
    const auto trace =
        qloss::synth_trace(kRes, kBg, kGrid, qloss::NoiseModel::isotropic(0.01, 2024));
    const auto fit = qloss::fit_resonance(trace);
    CHECK(fit.converged);
    CHECK_FALSE(fit.singular_normal_matrix);
    const Eigen::Matrix<double, 7, 7>& c = fit.covariance;
    CHECK((c - c.transpose()).norm() <= 1e-12 * c.norm());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 7, 7>> eig(c);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-12 * eig.eigenvalues().maxCoeff());

    const auto unc = qloss::propagate_uncertainty(fit);
    for (double s : unc.sigma) {
        CHECK(std::isfinite(s));
        CHECK(s >= 0.0);
    }
    CHECK(unc.sigma_q_i ==
          doctest::Approx(unc.sigma_delta_i / (fit.delta_i * fit.delta_i)).epsilon(1e-12));
}

TEST_CASE("noisy fits stay accurate over many draws") {
    std::vector<double> qi_errs;
    std::vector<double> fr_errs;
    int converged = 0;
    const double qi_truth = qloss::internal_loss(kRes).q_i;
    for (int trial = 0; trial < 40; ++trial) {
        const auto seed = qloss::derive_seed(31337, "fit-mc-" + std::to_string(trial));
        const auto trace =
            qloss::synth_trace(kRes, kBg, kGrid, qloss::NoiseModel::isotropic(0.01, seed));
        const auto fit = qloss::fit_resonance(trace);
        converged += fit.converged ? 1 : 0;
        qi_errs.push_back(std::abs(fit.q_i - qi_truth) / qi_truth);
        fr_errs.push_back(std::abs(fit.params.f_r_hz - kRes.f_r_hz));
    }
    CHECK(converged >= 38);
    CHECK(median(qi_errs) < 0.02);
    // Median frequency error under a tenth of a linewidth.
    CHECK(median(fr_errs) < 0.1 * kRes.f_r_hz / kRes.q_loaded);
}

TEST_CASE("reported uncertainty matches the observed scatter") {
    std::vector<double> qi_samples;
    std::vector<double> qi_sigmas;
    for (int trial = 0; trial < 300; ++trial) {
        const auto seed = qloss::derive_seed(4242, "fit-cov-" + std::to_string(trial));
        const auto trace =
            qloss::synth_trace(kRes, kBg, kGrid, qloss::NoiseModel::isotropic(0.01, seed));
        const auto fit = qloss::fit_resonance(trace);
        if (!fit.converged) {
            continue;
        }
        qi_samples.push_back(fit.q_i);
        qi_sigmas.push_back(qloss::propagate_uncertainty(fit).sigma_q_i);
    }
    REQUIRE(qi_samples.size() > 280);
    double mean = 0.0;
    for (double q : qi_samples) {
        mean += q;
    }
    mean /= static_cast<double>(qi_samples.size());
    double var = 0.0;
    for (double q : qi_samples) {
        var += (q - mean) * (q - mean);
    }
    var /= static_cast<double>(qi_samples.size() - 1);
    const double ratio = std::sqrt(var) / median(qi_sigmas);
    CHECK(ratio > 0.8);
    CHECK(ratio < 1.25);
}
