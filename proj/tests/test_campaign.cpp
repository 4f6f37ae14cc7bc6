#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "qloss/campaign.hpp"
#include "qloss/errors.hpp"
#include "qloss/model.hpp"
#include "qloss/rng.hpp"
#include "qloss/synth.hpp"
#include "qloss/touchstone.hpp"

namespace {

const qloss::TLSModelParams kLaw{2.8e-5, 3.7e-6, 100.0, 1.0, 5.0e9, 0.02};
constexpr double kQcMag = 1.0e5;
constexpr double kPhi = 0.1;
const qloss::BackgroundModel kBg{0.9, 0.1, 30e-9};
const qloss::FrequencyGrid kGrid{5.0e9 - 1.2e6, 5.0e9 + 1.2e6, 1201};

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << text;
}

// Builds a campaign directory whose devA traces follow the saturation law
// exactly: photon number fixes the loss, the loss fixes Q_l, and Q_l fixes
// the drive power that reproduces that photon number.
std::filesystem::path build_campaign_dir() {
    const auto dir = std::filesystem::temp_directory_path() / "qloss_campaign_fixture";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);

    std::string manifest = "file,label,power_dbm,temperature_k\n";
    char line[160];
    int index = 0;
    for (double n = 0.1; n <= 1.1e5; n *= 10.0) {
        const double delta = qloss::tls_loss(n, kLaw);
        const double q_loaded = 1.0 / (delta + std::cos(kPhi) / kQcMag);
        const double power_w = qloss::feed_power_for_photons(n, 5.0e9, q_loaded, kQcMag);
        const qloss::ResonanceParams res{5.0e9, q_loaded, kQcMag, kPhi};
        const auto seed = qloss::derive_seed(2718, "campaign-" + std::to_string(index));
        const auto trace =
            qloss::synth_trace(res, kBg, kGrid, qloss::NoiseModel::isotropic(0.002, seed));
        const std::string name = "devA_" + std::to_string(index) + ".s2p";
        write_file(dir / name, qloss::write_touchstone(trace));
        std::snprintf(line, sizeof(line), "%s,devA,%.17g,0.02\n", name.c_str(),
                      qloss::watt_to_dbm(power_w));
        manifest += line;
        ++index;
    }

    // devB: three power-independent traces plus one missing file.
    const qloss::ResonanceParams fixed{5.0e9, 4.0e4, kQcMag, kPhi};
    for (int k = 0; k < 3; ++k) {
        const auto seed = qloss::derive_seed(2718, "campaign-b-" + std::to_string(k));
        const auto trace =
            qloss::synth_trace(fixed, kBg, kGrid, qloss::NoiseModel::isotropic(0.002, seed));
        const std::string name = "devB_" + std::to_string(k) + ".s2p";
        write_file(dir / name, qloss::write_touchstone(trace));
        std::snprintf(line, sizeof(line), "%s,devB,%g,0.02\n", name.c_str(), -120.0 + 10.0 * k);
        manifest += line;
    }
    manifest += "missing.s2p,devB,-90,0.02\n";

    write_file(dir / "manifest.csv", manifest);
    return dir;
}

}  // namespace

TEST_CASE("manifest rows parse and defects name the row") {
    const auto entries = qloss::parse_manifest(
        "file,label,power_dbm,temperature_k\n"
        "a.s2p,dev1,-120,0.02\n"
        "\n"
        "b.s2p,dev2,-110.5,0\n");
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].file == "a.s2p");
    CHECK(entries[0].label == "dev1");
    CHECK(entries[0].power_dbm == -120.0);
    CHECK(entries[1].temperature_k == 0.0);

    CHECK_THROWS_AS(qloss::parse_manifest(""), qloss::MissingHeader);
    CHECK_THROWS_AS(qloss::parse_manifest("file,label,power\na,b,1\n"), qloss::MissingHeader);
    CHECK_THROWS_WITH_AS(
        qloss::parse_manifest("file,label,power_dbm,temperature_k\na.s2p,dev,-120\n"),
        doctest::Contains("row 2"), qloss::RowArityError);
    CHECK_THROWS_AS(
        qloss::parse_manifest("file,label,power_dbm,temperature_k\na.s2p,dev,quiet,0.02\n"),
        qloss::ValidationError);
    CHECK_THROWS_AS(
        qloss::parse_manifest("file,label,power_dbm,temperature_k\na.s2p,dev,-120,-1\n"),
        qloss::ValidationError);
    CHECK_THROWS_AS(
        qloss::parse_manifest("file,label,power_dbm,temperature_k\n,dev,-120,0.02\n"),
        qloss::ValidationError);
}

TEST_CASE("a campaign fits every trace, groups by resonator and runs the saturation fit") {
    const auto dir = build_campaign_dir();
    const auto result = qloss::run_campaign(dir.string());

    CHECK(result.trace_count == 11);
    CHECK(result.failed_fits == 1);
    CHECK_FALSE(result.all_converged);
    REQUIRE(result.resonators.size() == 2);
    CHECK(result.resonators[0].label == "devA");
    CHECK(result.resonators[1].label == "devB");

    const auto& dev_a = result.resonators[0];
    REQUIRE(dev_a.traces.size() == 7);
    for (std::size_t i = 1; i < dev_a.traces.size(); ++i) {
        CHECK(dev_a.traces[i - 1].meta.power_dbm < dev_a.traces[i].meta.power_dbm);
        CHECK(dev_a.traces[i - 1].photon_number < dev_a.traces[i].photon_number);
    }
    // Loss saturates downward across the sweep.
    REQUIRE(dev_a.traces.front().fit.has_value());
    REQUIRE(dev_a.traces.back().fit.has_value());
    CHECK(dev_a.traces.front().fit->delta_i > dev_a.traces.back().fit->delta_i);
    CHECK(dev_a.traces.front().photon_number == doctest::Approx(0.1).epsilon(0.05));

    REQUIRE(dev_a.tls.has_value());
    CHECK(dev_a.tls->converged);
    CHECK(dev_a.tls->params.f_delta0_tls == doctest::Approx(kLaw.f_delta0_tls).epsilon(0.10));
    CHECK(dev_a.tls->params.delta_other == doctest::Approx(kLaw.delta_other).epsilon(0.10));
    CHECK(dev_a.tls->params.n_c == doctest::Approx(kLaw.n_c).epsilon(0.20));

    const auto& dev_b = result.resonators[1];
    REQUIRE(dev_b.traces.size() == 4);
    int failed = 0;
    for (const auto& outcome : dev_b.traces) {
        if (!outcome.fit) {
            ++failed;
            CHECK(outcome.error.find("missing.s2p") != std::string::npos);
        }
    }
    CHECK(failed == 1);
    // Three usable points cannot constrain the saturation law.
    CHECK_FALSE(dev_b.tls.has_value());
    CHECK_FALSE(dev_b.tls_error.empty());
}

TEST_CASE("campaign output does not depend on worker count") {
    const auto dir = build_campaign_dir();
    qloss::CampaignOptions serial;
    serial.workers = 1;
    qloss::CampaignOptions wide;
    wide.workers = 4;
    const auto a = qloss::run_campaign(dir.string(), serial);
    const auto b = qloss::run_campaign(dir.string(), wide);

    REQUIRE(a.resonators.size() == b.resonators.size());
    for (std::size_t r = 0; r < a.resonators.size(); ++r) {
        const auto& ra = a.resonators[r];
        const auto& rb = b.resonators[r];
        CHECK(ra.label == rb.label);
        REQUIRE(ra.traces.size() == rb.traces.size());
        for (std::size_t t = 0; t < ra.traces.size(); ++t) {
            CHECK(ra.traces[t].meta.file == rb.traces[t].meta.file);
            CHECK(ra.traces[t].photon_number == rb.traces[t].photon_number);
            if (ra.traces[t].fit) {
                REQUIRE(rb.traces[t].fit.has_value());
                CHECK(ra.traces[t].fit->params.f_r_hz == rb.traces[t].fit->params.f_r_hz);
                CHECK(ra.traces[t].fit->residual_norm == rb.traces[t].fit->residual_norm);
            }
        }
        CHECK(ra.tls.has_value() == rb.tls.has_value());
        if (ra.tls) {
            CHECK(ra.tls->params.f_delta0_tls == rb.tls->params.f_delta0_tls);
            CHECK(ra.tls->params.n_c == rb.tls->params.n_c);
        }
    }
}
