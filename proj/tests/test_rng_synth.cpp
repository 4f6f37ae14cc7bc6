#include <doctest.h>

#include <cmath>
#include <vector>

#include "qloss/errors.hpp"
#include "qloss/model.hpp"
#include "qloss/rng.hpp"
#include "qloss/synth.hpp"

using namespace qloss;

TEST_CASE("rng streams are deterministic and splittable") {
    Rng a(42);
    Rng b(42);
    for (int k = 0; k < 64; ++k) {
        CHECK(a.next_u64() == b.next_u64());
    }
    Rng c(42);
    Rng d = c.split(1);
    Rng e = c.split(2);
    CHECK(d.next_u64() != e.next_u64());
    CHECK(derive_seed(7, "left") != derive_seed(7, "right"));
    CHECK(derive_seed(7, "left") == derive_seed(7, "left"));
}

TEST_CASE("rng normal samples have unit scale") {
    Rng rng(2024);
    const int n = 10000;
    double sum = 0.0;
    double sumsq = 0.0;
    for (int k = 0; k < n; ++k) {
        const double x = rng.normal();
        sum += x;
        sumsq += x * x;
    }
    const double mean = sum / n;
    const double sd = std::sqrt(sumsq / n - mean * mean);
    CHECK(std::abs(mean) < 0.05);
    CHECK(sd == doctest::Approx(1.0).epsilon(0.05));
    Rng lo(5);
    for (int k = 0; k < 1000; ++k) {
        const double u = lo.uniform(2.0, 3.0);
        CHECK(u >= 2.0);
        CHECK(u < 3.0);
        const double g = lo.log_uniform(1e2, 1e4);
        CHECK(g >= 1e2);
        CHECK(g <= 1e4);
    }
}

namespace {
const ResonanceParams kRes{5e9, 5e4, 1e5, 0.2};
const BackgroundModel kBg{0.9, 0.1, 30e-9};
const FrequencyGrid kGrid{5e9 - 6e5, 5e9 + 6e5, 801};
}  // namespace

TEST_CASE("synth_trace without noise equals the forward model exactly") {
    const FrequencyTrace trace = synth_trace(kRes, kBg, kGrid, NoiseModel::none());
    REQUIRE(trace.points.size() == 801);
    for (const TracePoint& pt : trace.points) {
        CHECK(pt.s21 == s21_forward(pt.frequency_hz, kRes, kBg));
    }
    CHECK_FALSE(trace.applied_power_w.has_value());
    CHECK_FALSE(trace.temperature_k.has_value());
}

TEST_CASE("synth_trace carries metadata and is seed-deterministic") {
    const NoiseModel noise = NoiseModel::isotropic(0.01, 99);
    const FrequencyTrace a = synth_trace(kRes, kBg, kGrid, noise, 1e-15, 0.02, "dev");
    const FrequencyTrace b = synth_trace(kRes, kBg, kGrid, noise, 1e-15, 0.02, "dev");
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t k = 0; k < a.points.size(); ++k) {
        CHECK(a.points[k].s21 == b.points[k].s21);
    }
    CHECK(a.applied_power_w == 1e-15);
    CHECK(a.temperature_k == 0.02);
    CHECK(a.label == "dev");
    CHECK_NOTHROW(validate_for_fit(a));
}

TEST_CASE("synth_trace noise scale matches the requested sigma") {
    const double sigma = 0.01;
    const FrequencyGrid wide{5e9 - 6e5, 5e9 + 6e5, 10000};
    const FrequencyTrace trace =
        synth_trace(kRes, kBg, wide, NoiseModel::isotropic(sigma, 31));
    double sumsq = 0.0;
    for (const TracePoint& pt : trace.points) {
        const Complex diff = pt.s21 - s21_forward(pt.frequency_hz, kRes, kBg);
        sumsq += diff.real() * diff.real() + diff.imag() * diff.imag();
    }
    const double sd = std::sqrt(sumsq / (2.0 * static_cast<double>(trace.points.size())));
    CHECK(sd == doctest::Approx(sigma).epsilon(0.05));
}

TEST_CASE("synth_trace rejects grids that cannot hold the resonance") {
    CHECK_THROWS_AS(synth_trace(kRes, kBg, {5e9 - 6e5, 5e9 + 6e5, 8}, NoiseModel::none()),
                    GridTooNarrow);
    CHECK_THROWS_AS(synth_trace(kRes, kBg, {5e9 - 1e5, 5e9 + 1e5, 801}, NoiseModel::none()),
                    GridTooNarrow);
    CHECK_THROWS_AS(
        synth_trace(kRes, kBg, {5e9 + 1e5, 5e9 + 70e5, 801}, NoiseModel::none()),
        GridTooNarrow);
}

TEST_CASE("synth_power_sweep hits the analytic anchors") {
    const TLSModelParams p{2.8e-5, 3.7e-6, 100.0, 1.0, 5e9, 0.0};
    const std::vector<double> grid{0.1, 100.0, 1e6};
    const auto sweep = synth_power_sweep(p, grid, NoiseModel::none());
    REQUIRE(sweep.size() == 3);
    CHECK(sweep[0].delta_i ==
          doctest::Approx(p.f_delta0_tls + p.delta_other).epsilon(1e-3));
    CHECK(sweep[1].delta_i ==
          doctest::Approx(p.f_delta0_tls / std::sqrt(2.0) + p.delta_other).epsilon(1e-12));
    CHECK(sweep[2].delta_i == doctest::Approx(p.delta_other).epsilon(0.1));
    for (const PowerSweepPoint& pt : sweep) {
        CHECK(pt.sigma == 0.0);
    }
}

TEST_CASE("thin-film-like sweep is monotone and spans the saturation curve") {
    const TLSModelParams p{2.8e-5, 3.7e-6, 100.0, 1.0, 5e9, 0.01};
    const auto grid = log_grid(0.1, 1e6, 20);
    const auto sweep = synth_power_sweep(p, grid, NoiseModel::none());
    REQUIRE(sweep.size() == grid.size());
    for (std::size_t k = 1; k < sweep.size(); ++k) {
        CHECK(sweep[k].delta_i <= sweep[k - 1].delta_i);
    }
    CHECK(sweep.front().delta_i > 3.1e-5);
    CHECK(sweep.front().delta_i < 3.2e-5);
    CHECK(sweep.back().delta_i > 3.6e-6);
    CHECK(sweep.back().delta_i < 4.1e-6);
    CHECK_NOTHROW(validate(sweep));
}

TEST_CASE("noisy sweeps record the noise scale and stay positive") {
    const TLSModelParams p{2.8e-5, 3.7e-6, 100.0, 1.0, 5e9, 0.0};
    const auto grid = log_grid(0.1, 1e6, 20);
    const auto a = synth_power_sweep(p, grid, NoiseModel::relative(0.05, 17));
    const auto b = synth_power_sweep(p, grid, NoiseModel::relative(0.05, 17));
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].delta_i == b[k].delta_i);
        CHECK(a[k].sigma == doctest::Approx(0.05 * tls_loss(a[k].photon_number, p)));
        CHECK(a[k].delta_i > 0.0);
    }
}

TEST_CASE("log_grid is inclusive and evenly spaced in log") {
    const auto grid = log_grid(0.1, 1e6, 20);
    CHECK(grid.size() == 141);
    CHECK(grid.front() == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(grid.back() == doctest::Approx(1e6).epsilon(1e-12));
    const double ratio = grid[1] / grid[0];
    for (std::size_t k = 1; k < grid.size(); ++k) {
        CHECK(grid[k] / grid[k - 1] == doctest::Approx(ratio).epsilon(1e-9));
    }
}

TEST_CASE("temperature sweep follows the tanh factor") {
    const TLSModelParams p{2.8e-5, 3.7e-6, 100.0, 1.0, 5e9, 0.0};
    const std::vector<double> t_grid{1e-4, 0.1, 0.3, 0.6, 1.0};
    const auto sweep = synth_temperature_sweep(p, t_grid, 1.0);
    REQUIRE(sweep.size() == t_grid.size());
    // T -> 0 recovers the tanh = 1 value.
    TLSModelParams zero = p;
    zero.t_k = 0.0;
    CHECK(sweep.front().second == doctest::Approx(tls_loss(1.0, zero)).epsilon(1e-9));
    // The TLS component at 0.6 K is the published fraction of its T=0 value.
    const double tls_cold = sweep.front().second - p.delta_other;
    const auto at = [&](double t) {
        for (const auto& [tk, d] : sweep) {
            if (tk == t) return d;
        }
        REQUIRE(false);
        return 0.0;
    };
    CHECK((at(0.6) - p.delta_other) / tls_cold == doctest::Approx(0.19734501).epsilon(1e-4));
    for (std::size_t k = 1; k < sweep.size(); ++k) {
        CHECK(sweep[k].second <= sweep[k - 1].second);
    }
}

TEST_CASE("generators reject invalid grids") {
    const TLSModelParams p{2.8e-5, 3.7e-6, 100.0, 1.0, 5e9, 0.0};
    CHECK_THROWS_AS(synth_power_sweep(p, {1.0, 1.0}, NoiseModel::none()), ValidationError);
    CHECK_THROWS_AS(synth_power_sweep(p, {-1.0, 2.0}, NoiseModel::none()), ValidationError);
    CHECK_THROWS_AS(synth_temperature_sweep(p, {0.3, 0.2}, 1.0), ValidationError);
}
