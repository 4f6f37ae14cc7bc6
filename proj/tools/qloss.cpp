// qloss: resonator loss-extraction toolkit.
//
// Subcommands: fit, sweep-fit, campaign, design, synth {trace|sweep|temp-sweep},
// catalog. All numeric I/O is SI except where a flag name says otherwise
// (power in dBm). Exit codes: 0 success, 1 bad input, 2 a fit did not
// converge, 3 internal error.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "qloss/campaign.hpp"
#include "qloss/catalog.hpp"
#include "qloss/design.hpp"
#include "qloss/errors.hpp"
#include "qloss/fit.hpp"
#include "qloss/model.hpp"
#include "qloss/report.hpp"
#include "qloss/sweep_csv.hpp"
#include "qloss/synth.hpp"
#include "qloss/touchstone.hpp"

namespace {

using qloss::Json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw qloss::ValidationError("cannot open " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        throw qloss::ValidationError("cannot write " + out_path);
    }
    out << text;
}

// Sidecar metadata for Touchstone files: `<trace>.meta` holding
// `key = value` lines for power_dbm, temperature_k and label.
struct Sidecar {
    std::optional<double> power_dbm;
    std::optional<double> temperature_k;
    std::optional<std::string> label;
};

Sidecar read_sidecar(const std::string& trace_path) {
    Sidecar meta;
    const std::string path = trace_path + ".meta";
    std::ifstream in(path);
    if (!in) {
        return meta;
    }
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") != std::string::npos) {
                throw qloss::ValidationError(path + " line " + std::to_string(line_no) +
                                             ": expected key = value");
            }
            continue;
        }
        const auto strip = [](std::string s) {
            const std::size_t a = s.find_first_not_of(" \t\r");
            if (a == std::string::npos) {
                return std::string{};
            }
            const std::size_t b = s.find_last_not_of(" \t\r");
            return s.substr(a, b - a + 1);
        };
        const std::string key = strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));
        if (key == "power_dbm") {
            meta.power_dbm = std::stod(value);
        } else if (key == "temperature_k") {
            meta.temperature_k = std::stod(value);
        } else if (key == "label") {
            meta.label = value;
        } else {
            throw qloss::ValidationError(path + " line " + std::to_string(line_no) +
                                         ": unknown key '" + key + "'");
        }
    }
    return meta;
}

struct FitArgs {
    std::string trace_path;
    std::string out_path;
    std::string format = "json";
    std::string label;
    double power_dbm = 0.0;
    bool have_power = false;
    double temperature_k = 0.0;
    bool have_temperature = false;
};

int run_fit(const FitArgs& args, const qloss::FitConfig& cfg) {
    Sidecar meta = read_sidecar(args.trace_path);
    if (args.have_power) {
        meta.power_dbm = args.power_dbm;
    }
    if (args.have_temperature) {
        meta.temperature_k = args.temperature_k;
    }
    if (!args.label.empty()) {
        meta.label = args.label;
    }

    std::vector<qloss::FrequencyTrace> traces = qloss::parse_touchstone(read_file(args.trace_path));
    if (traces.empty()) {
        throw qloss::ValidationError(args.trace_path + " holds no data rows");
    }
    const std::string base_label =
        meta.label.value_or(std::filesystem::path(args.trace_path).stem().string());

    bool all_converged = true;
    Json array = Json::array();
    std::vector<std::pair<std::string, qloss::FitResult>> rows;
    for (std::size_t k = 0; k < traces.size(); ++k) {
        qloss::FrequencyTrace& trace = traces[k];
        trace.label = traces.size() == 1 ? base_label
                                         : base_label + "-" + std::to_string(k);
        if (meta.power_dbm) {
            trace.applied_power_w = qloss::dbm_to_watt(*meta.power_dbm);
        }
        if (meta.temperature_k && *meta.temperature_k > 0.0) {
            trace.temperature_k = *meta.temperature_k;
        }
        const qloss::FitResult fit = qloss::fit_resonance(trace, cfg);
        all_converged = all_converged && fit.converged;
        Json node = qloss::fit_report(fit, trace.label);
        if (trace.applied_power_w) {
            node["power_dbm"] = *meta.power_dbm;
            node["photon_number"] = qloss::photon_number(
                *trace.applied_power_w, fit.params.f_r_hz, fit.params.q_loaded,
                fit.params.qc_mag);
        }
        array.push_back(std::move(node));
        rows.emplace_back(trace.label, fit);
    }

    if (args.format == "csv") {
        emit(qloss::fit_report_csv(rows), args.out_path);
    } else {
        emit(qloss::render_json(array.size() == 1 ? array.front() : array), args.out_path);
    }
    return all_converged ? 0 : 2;
}

struct SweepFitArgs {
    std::string csv_path;
    std::string out_path;
    std::string format = "json";
    std::string label = "sweep";
    double frequency_hz = 0.0;
    double temperature_k = 0.0;
    std::string beta = "fixed:1";
    double f_r_hz = 0.0;
    double q_loaded = 0.0;
    double qc_mag = 0.0;
};

void apply_beta_mode(const std::string& text, qloss::FitConfig& cfg) {
    if (text == "free") {
        cfg.beta_free = true;
        return;
    }
    if (text.rfind("fixed:", 0) == 0) {
        cfg.beta_free = false;
        cfg.beta_fixed = std::stod(text.substr(6));
        return;
    }
    throw qloss::ValidationError("--beta must be 'free' or 'fixed:<value>', got '" + text + "'");
}

int run_sweep_fit(const SweepFitArgs& args, qloss::FitConfig cfg) {
    apply_beta_mode(args.beta, cfg);
    std::optional<qloss::PhotonContext> context;
    if (args.f_r_hz > 0.0 || args.q_loaded > 0.0 || args.qc_mag > 0.0) {
        context = qloss::PhotonContext{args.f_r_hz, args.q_loaded, args.qc_mag};
    }
    const std::vector<qloss::PowerSweepPoint> sweep =
        qloss::parse_sweep_csv(read_file(args.csv_path), context);
    const qloss::TLSFit fit =
        qloss::fit_power_sweep(sweep, args.frequency_hz, args.temperature_k, cfg);
    if (args.format == "csv") {
        emit(qloss::tls_report_csv({{args.label, fit}}), args.out_path);
    } else {
        emit(qloss::render_json(qloss::tls_report(fit, args.label)), args.out_path);
    }
    return fit.converged ? 0 : 2;
}

struct CampaignArgs {
    std::string directory;
    std::string out_path;
    std::string format = "json";
    int workers = 0;
};

int run_campaign_cmd(const CampaignArgs& args, const qloss::FitConfig& cfg) {
    qloss::CampaignOptions options;
    options.fit = cfg;
    options.workers = args.workers;
    const qloss::CampaignResult result = qloss::run_campaign(args.directory, options);

    if (args.format == "csv") {
        std::vector<std::pair<std::string, qloss::TLSFit>> rows;
        for (const qloss::ResonatorSummary& group : result.resonators) {
            if (group.tls) {
                rows.emplace_back(group.label, *group.tls);
            }
        }
        emit(qloss::tls_report_csv(rows), args.out_path);
    } else {
        Json node;
        node["schema_version"] = 1;
        node["kind"] = "campaign";
        node["trace_count"] = result.trace_count;
        node["failed_fits"] = result.failed_fits;
        node["all_converged"] = result.all_converged;
        Json groups = Json::array();
        for (const qloss::ResonatorSummary& group : result.resonators) {
            Json g;
            g["label"] = group.label;
            Json traces = Json::array();
            for (const qloss::TraceOutcome& outcome : group.traces) {
                Json t;
                t["file"] = outcome.meta.file;
                t["power_dbm"] = outcome.meta.power_dbm;
                t["temperature_k"] = outcome.meta.temperature_k;
                if (outcome.fit) {
                    t["photon_number"] = outcome.photon_number;
                    t["fit"] = qloss::fit_report(*outcome.fit, group.label);
                } else {
                    t["error"] = outcome.error;
                }
                traces.push_back(std::move(t));
            }
            g["traces"] = std::move(traces);
            if (group.tls) {
                g["tls_fit"] = qloss::tls_report(*group.tls, group.label);
            } else {
                g["tls_error"] = group.tls_error;
            }
            groups.push_back(std::move(g));
        }
        node["resonators"] = std::move(groups);
        emit(qloss::render_json(node), args.out_path);
    }
    return result.all_converged && result.failed_fits == 0 ? 0 : 2;
}

struct DesignArgs {
    qloss::DesignRequest request;
    std::string band;
    std::string out_path;
    std::string format = "json";
};

int run_design(DesignArgs args) {
    const std::size_t colon = args.band.find(':');
    if (colon == std::string::npos) {
        throw qloss::ValidationError("--band-hz must be <lo>:<hi>, got '" + args.band + "'");
    }
    args.request.band_start_hz = std::stod(args.band.substr(0, colon));
    args.request.band_stop_hz = std::stod(args.band.substr(colon + 1));
    const qloss::DesignReport report = qloss::design_report(args.request);
    if (args.format == "csv") {
        emit(qloss::design_report_csv(report), args.out_path);
    } else {
        emit(qloss::render_json(qloss::design_report_json(report)), args.out_path);
    }
    return 0;
}

struct SynthTraceArgs {
    qloss::ResonanceParams res{5e9, 5e4, 1e5, 0.0};
    qloss::BackgroundModel bg;
    double f_start_hz = 0.0;
    double f_stop_hz = 0.0;
    std::size_t count = 801;
    double noise_sigma = 0.0;
    std::uint64_t seed = 1;
    std::string format = "ri";
    std::string label = "synthetic";
    std::string out_path;
    double power_dbm = 0.0;
    bool have_power = false;
    double temperature_k = 0.0;
    bool have_temperature = false;
};

int run_synth_trace(SynthTraceArgs args) {
    if (args.f_start_hz <= 0.0 || args.f_stop_hz <= 0.0) {
        // Default span: 12 linewidths centered on the resonance.
        const double half_span = 6.0 * args.res.f_r_hz / args.res.q_loaded;
        args.f_start_hz = args.res.f_r_hz - half_span;
        args.f_stop_hz = args.res.f_r_hz + half_span;
    }
    const qloss::FrequencyGrid grid{args.f_start_hz, args.f_stop_hz, args.count};
    const qloss::NoiseModel noise = args.noise_sigma > 0.0
                                        ? qloss::NoiseModel::isotropic(args.noise_sigma, args.seed)
                                        : qloss::NoiseModel::none();
    std::optional<double> power_w;
    if (args.have_power) {
        power_w = qloss::dbm_to_watt(args.power_dbm);
    }
    std::optional<double> temperature;
    if (args.have_temperature) {
        temperature = args.temperature_k;
    }
    const qloss::FrequencyTrace trace =
        qloss::synth_trace(args.res, args.bg, grid, noise, power_w, temperature, args.label);

    qloss::TouchstoneFormat format = qloss::TouchstoneFormat::kRealImag;
    if (args.format == "ma") {
        format = qloss::TouchstoneFormat::kMagAngle;
    } else if (args.format == "db") {
        format = qloss::TouchstoneFormat::kDbAngle;
    } else if (args.format != "ri") {
        throw qloss::ValidationError("--format must be ri, ma or db");
    }
    emit(qloss::write_touchstone(trace, format), args.out_path);

    if (!args.out_path.empty() && (args.have_power || args.have_temperature)) {
        std::string meta = "label = " + args.label + "\n";
        char buf[64];
        if (args.have_power) {
            std::snprintf(buf, sizeof(buf), "power_dbm = %.17g\n", args.power_dbm);
            meta += buf;
        }
        if (args.have_temperature) {
            std::snprintf(buf, sizeof(buf), "temperature_k = %.17g\n", args.temperature_k);
            meta += buf;
        }
        emit(meta, args.out_path + ".meta");
    }
    return 0;
}

struct SynthSweepArgs {
    qloss::TLSModelParams params{2.8e-5, 3.7e-6, 100.0, 1.0, 5e9, 0.01};
    double n_start = 0.1;
    double n_stop = 1e6;
    int per_decade = 20;
    double noise_fraction = 0.0;
    std::uint64_t seed = 1;
    std::string out_path;
};

int run_synth_sweep(const SynthSweepArgs& args) {
    const std::vector<double> grid = qloss::log_grid(args.n_start, args.n_stop, args.per_decade);
    const qloss::NoiseModel noise =
        args.noise_fraction > 0.0 ? qloss::NoiseModel::relative(args.noise_fraction, args.seed)
                                  : qloss::NoiseModel::none();
    const std::vector<qloss::PowerSweepPoint> sweep =
        qloss::synth_power_sweep(args.params, grid, noise);
    emit(qloss::write_sweep_csv(sweep), args.out_path);
    return 0;
}

struct SynthTempArgs {
    qloss::TLSModelParams params{2.8e-5, 3.7e-6, 100.0, 1.0, 5e9, 0.01};
    double t_start_k = 0.01;
    double t_stop_k = 1.0;
    int count = 25;
    double n_fixed = 1.0;
    std::string out_path;
};

int run_synth_temp(const SynthTempArgs& args) {
    if (args.count < 2 || !(args.t_stop_k > args.t_start_k) || !(args.t_start_k > 0.0)) {
        throw qloss::ValidationError("temperature grid needs 0 < start < stop and count >= 2");
    }
    std::vector<double> grid(static_cast<std::size_t>(args.count));
    for (int k = 0; k < args.count; ++k) {
        grid[static_cast<std::size_t>(k)] =
            args.t_start_k +
            (args.t_stop_k - args.t_start_k) * static_cast<double>(k) /
                static_cast<double>(args.count - 1);
    }
    const auto points = qloss::synth_temperature_sweep(args.params, grid, args.n_fixed);
    std::string out = "temperature_k,delta_i\n";
    char buf[80];
    for (const auto& [t, delta] : points) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", t, delta);
        out += buf;
    }
    emit(out, args.out_path);
    return 0;
}

struct CatalogArgs {
    qloss::CatalogFilter filter;
    std::string material, reference, deposition, crystallinity, geometry;
    double max_delta_lp = -1.0;
    std::string format = "csv";
    std::string out_path;
};

int run_catalog(CatalogArgs args) {
    if (!args.material.empty()) {
        args.filter.material = args.material;
    }
    if (!args.reference.empty()) {
        args.filter.reference = args.reference;
    }
    if (!args.deposition.empty()) {
        args.filter.deposition = args.deposition;
    }
    if (!args.crystallinity.empty()) {
        args.filter.crystallinity = args.crystallinity;
    }
    if (!args.geometry.empty()) {
        args.filter.geometry = args.geometry;
    }
    if (args.max_delta_lp >= 0.0) {
        args.filter.max_delta_lp = args.max_delta_lp;
    }
    const bool unfiltered = !args.filter.material && !args.filter.reference &&
                            !args.filter.deposition && !args.filter.crystallinity &&
                            !args.filter.geometry && !args.filter.max_delta_lp;
    if (unfiltered && args.format == "csv") {
        emit(qloss::catalog_dump(), args.out_path);  // bit-exact bundled table
        return 0;
    }

    const std::vector<qloss::CatalogEntry> entries = qloss::catalog_query(args.filter);
    if (args.format == "csv") {
        std::string out =
            "material,reference,deposition,crystallinity,geometry,"
            "delta_lp_1e-5,f_delta0_tls_1e-5,q_max_1e5,area_1e5_um2\n";
        for (const qloss::CatalogEntry& e : entries) {
            out += e.material + ',' + e.reference + ',' + e.deposition + ',' + e.crystallinity +
                   ',' + e.geometry + ',' + e.delta_lp.raw + ',' + e.f_delta0.raw + ',' +
                   e.q_max.raw + ',' + e.area.raw + '\n';
        }
        emit(out, args.out_path);
        return 0;
    }

    const auto cell_json = [](const qloss::CatalogCell& cell) {
        Json node;
        node["raw"] = cell.raw;
        node["present"] = cell.present;
        node["incomparable"] = cell.incomparable;
        node["estimated"] = cell.estimated;
        node["upper_bound"] = cell.upper_bound;
        node["filling_scaled"] = cell.filling_scaled;
        if (cell.present) {
            node["low"] = cell.low;
            node["central"] = cell.central;
            node["high"] = cell.high;
        }
        return node;
    };
    Json list = Json::array();
    for (const qloss::CatalogEntry& e : entries) {
        Json node;
        node["material"] = e.material;
        node["reference"] = e.reference;
        node["deposition"] = e.deposition;
        node["crystallinity"] = e.crystallinity;
        node["geometry"] = e.geometry;
        node["delta_lp_1e-5"] = cell_json(e.delta_lp);
        node["f_delta0_tls_1e-5"] = cell_json(e.f_delta0);
        node["q_max_1e5"] = cell_json(e.q_max);
        node["area_1e5_um2"] = cell_json(e.area);
        node["estimated_flag"] = e.estimated_flag;
        node["incomparable_flag"] = e.incomparable_flag;
        list.push_back(std::move(node));
    }
    emit(qloss::render_json(list), args.out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Superconducting resonator loss-extraction toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read defaults from an INI-style key=value file");

    qloss::FitConfig cfg;

    FitArgs fit_args;
    CLI::App* fit_cmd = app.add_subcommand("fit", "Fit one complex transmission trace");
    fit_cmd->add_option("trace", fit_args.trace_path, "Touchstone .s2p file")->required();
    CLI::Option* fit_power = fit_cmd->add_option("--power-dbm", fit_args.power_dbm,
                                                 "Feedline power at the device, dBm");
    CLI::Option* fit_temp = fit_cmd->add_option("--temperature-k", fit_args.temperature_k,
                                                "Sample temperature, K");
    fit_cmd->add_option("--label", fit_args.label, "Resonator label for the report");
    fit_cmd->add_option("--wing-fraction", cfg.wing_fraction,
                        "Fraction of points per sweep edge treated as background");
    fit_cmd->add_option("--max-iterations", cfg.max_iterations, "Refinement iteration cap");
    fit_cmd->add_option("--format", fit_args.format, "json or csv");
    fit_cmd->add_option("--out", fit_args.out_path, "Output path (default stdout)");

    SweepFitArgs sweep_args;
    CLI::App* sweep_cmd =
        app.add_subcommand("sweep-fit", "Fit the saturation law to a power sweep");
    sweep_cmd->add_option("csv", sweep_args.csv_path, "Sweep CSV file")->required();
    sweep_cmd->add_option("--frequency-hz", sweep_args.frequency_hz, "Resonance frequency, Hz")
        ->required();
    sweep_cmd->add_option("--temperature-k", sweep_args.temperature_k,
                          "Sample temperature, K (0: zero-temperature limit)");
    sweep_cmd->add_option("--beta", sweep_args.beta, "Saturation exponent: fixed:<v> or free");
    sweep_cmd->add_option("--label", sweep_args.label, "Label for the report");
    sweep_cmd->add_option("--f-r-hz", sweep_args.f_r_hz,
                          "Resonance frequency for dBm conversion (power-keyed files)");
    sweep_cmd->add_option("--q-loaded", sweep_args.q_loaded,
                          "Loaded Q for dBm conversion (power-keyed files)");
    sweep_cmd->add_option("--qc-mag", sweep_args.qc_mag,
                          "|Q_c| for dBm conversion (power-keyed files)");
    sweep_cmd->add_option("--format", sweep_args.format, "json or csv");
    sweep_cmd->add_option("--out", sweep_args.out_path, "Output path (default stdout)");

    CampaignArgs campaign_args;
    CLI::App* campaign_cmd =
        app.add_subcommand("campaign", "Batch-fit a directory against its manifest.csv");
    campaign_cmd->add_option("dir", campaign_args.directory, "Directory with manifest.csv")
        ->required();
    campaign_cmd->add_option("--workers", campaign_args.workers,
                             "Concurrent fits (0: hardware threads)");
    campaign_cmd->add_option("--wing-fraction", cfg.wing_fraction,
                             "Fraction of points per sweep edge treated as background");
    campaign_cmd->add_option("--format", campaign_args.format, "json or csv");
    campaign_cmd->add_option("--out", campaign_args.out_path, "Output path (default stdout)");

    DesignArgs design_args;
    CLI::App* design_cmd =
        app.add_subcommand("design", "Size parallel-plate capacitors across a band");
    design_cmd->add_option("--inductance-h", design_args.request.inductance_h, "Inductance, H")
        ->required();
    design_cmd
        ->add_option("--shunt-capacitance-f", design_args.request.c_shunt_f,
                     "Shunting capacitance, F")
        ->required();
    design_cmd->add_option("--thickness-m", design_args.request.thickness_m,
                           "Dielectric thickness, m")
        ->required();
    design_cmd->add_option("--eps-r", design_args.request.eps_r,
                           "Relative permittivity (default 9.8, a placeholder)");
    design_cmd->add_option("--band-hz", design_args.band, "Target band as <lo>:<hi> in Hz")
        ->required();
    design_cmd->add_option("--grid", design_args.request.grid_count,
                           "Grid points across the band");
    design_cmd->add_option("--p-min", design_args.request.p_min, "Minimum participation");
    design_cmd->add_option("--inductor-loss-bound", design_args.request.inductor_loss_bound,
                           "Upper bound on shunt-side effective loss");
    design_cmd->add_option("--delta-expected", design_args.request.delta_expected,
                           "Expected measured loss for the misattribution bound");
    design_cmd->add_option("--ceiling", design_args.request.misattribution_ceiling,
                           "Relative misattribution ceiling");
    design_cmd->add_option("--format", design_args.format, "json or csv");
    design_cmd->add_option("--out", design_args.out_path, "Output path (default stdout)");

    CLI::App* synth_cmd = app.add_subcommand("synth", "Generate seeded synthetic data");
    synth_cmd->require_subcommand(1);

    SynthTraceArgs trace_args;
    CLI::App* synth_trace_cmd = synth_cmd->add_subcommand("trace", "Synthetic complex trace");
    synth_trace_cmd->add_option("--f-r-hz", trace_args.res.f_r_hz, "Resonance frequency, Hz");
    synth_trace_cmd->add_option("--q-loaded", trace_args.res.q_loaded, "Loaded quality factor");
    synth_trace_cmd->add_option("--qc-mag", trace_args.res.qc_mag, "|Q_c|");
    synth_trace_cmd->add_option("--phi-rad", trace_args.res.phi_rad, "Asymmetry angle, rad");
    synth_trace_cmd->add_option("--amplitude", trace_args.bg.amplitude, "Background amplitude");
    synth_trace_cmd->add_option("--phase-offset-rad", trace_args.bg.phase_offset_rad,
                                "Background phase offset, rad");
    synth_trace_cmd->add_option("--cable-delay-s", trace_args.bg.cable_delay_s,
                                "Cable delay, s");
    synth_trace_cmd->add_option("--f-start-hz", trace_args.f_start_hz, "Sweep start, Hz");
    synth_trace_cmd->add_option("--f-stop-hz", trace_args.f_stop_hz, "Sweep stop, Hz");
    synth_trace_cmd->add_option("--count", trace_args.count, "Points in the sweep");
    synth_trace_cmd->add_option("--noise-sigma", trace_args.noise_sigma,
                                "Isotropic complex noise sigma (0: none)");
    synth_trace_cmd->add_option("--seed", trace_args.seed, "RNG seed");
    synth_trace_cmd->add_option("--format", trace_args.format, "ri, ma or db");
    synth_trace_cmd->add_option("--label", trace_args.label, "Trace label");
    CLI::Option* synth_power =
        synth_trace_cmd->add_option("--power-dbm", trace_args.power_dbm, "Metadata: power, dBm");
    CLI::Option* synth_temp = synth_trace_cmd->add_option(
        "--temperature-k", trace_args.temperature_k, "Metadata: temperature, K");
    synth_trace_cmd->add_option("--out", trace_args.out_path,
                                "Output .s2p path (sidecar .meta written when metadata given)");

    SynthSweepArgs sweep_gen_args;
    CLI::App* synth_sweep_cmd = synth_cmd->add_subcommand("sweep", "Synthetic power sweep");
    synth_sweep_cmd->add_option("--f-delta0-tls", sweep_gen_args.params.f_delta0_tls,
                                "Filling-weighted intrinsic TLS loss");
    synth_sweep_cmd->add_option("--delta-other", sweep_gen_args.params.delta_other,
                                "Power-independent loss");
    synth_sweep_cmd->add_option("--n-c", sweep_gen_args.params.n_c, "Critical photon number");
    synth_sweep_cmd->add_option("--beta", sweep_gen_args.params.beta, "Saturation exponent");
    synth_sweep_cmd->add_option("--f-hz", sweep_gen_args.params.f_hz, "Frequency, Hz");
    synth_sweep_cmd->add_option("--temperature-k", sweep_gen_args.params.t_k, "Temperature, K");
    synth_sweep_cmd->add_option("--n-start", sweep_gen_args.n_start, "Lowest photon number");
    synth_sweep_cmd->add_option("--n-stop", sweep_gen_args.n_stop, "Highest photon number");
    synth_sweep_cmd->add_option("--per-decade", sweep_gen_args.per_decade, "Points per decade");
    synth_sweep_cmd->add_option("--noise-fraction", sweep_gen_args.noise_fraction,
                                "Relative noise fraction (0: none)");
    synth_sweep_cmd->add_option("--seed", sweep_gen_args.seed, "RNG seed");
    synth_sweep_cmd->add_option("--out", sweep_gen_args.out_path, "Output path (default stdout)");

    SynthTempArgs temp_args;
    CLI::App* synth_temp_cmd =
        synth_cmd->add_subcommand("temp-sweep", "Ideal-model temperature sweep");
    synth_temp_cmd->add_option("--f-delta0-tls", temp_args.params.f_delta0_tls,
                               "Filling-weighted intrinsic TLS loss");
    synth_temp_cmd->add_option("--delta-other", temp_args.params.delta_other,
                               "Power-independent loss");
    synth_temp_cmd->add_option("--n-c", temp_args.params.n_c, "Critical photon number");
    synth_temp_cmd->add_option("--beta", temp_args.params.beta, "Saturation exponent");
    synth_temp_cmd->add_option("--f-hz", temp_args.params.f_hz, "Frequency, Hz");
    synth_temp_cmd->add_option("--t-start-k", temp_args.t_start_k, "Lowest temperature, K");
    synth_temp_cmd->add_option("--t-stop-k", temp_args.t_stop_k, "Highest temperature, K");
    synth_temp_cmd->add_option("--count", temp_args.count, "Grid size");
    synth_temp_cmd->add_option("--n", temp_args.n_fixed, "Photon number held fixed");
    synth_temp_cmd->add_option("--out", temp_args.out_path, "Output path (default stdout)");

    CatalogArgs catalog_args;
    CLI::App* catalog_cmd =
        app.add_subcommand("catalog", "Query the bundled published-loss benchmark table");
    catalog_cmd->add_option("--material", catalog_args.material, "Substring filter");
    catalog_cmd->add_option("--reference", catalog_args.reference, "Substring filter");
    catalog_cmd->add_option("--deposition", catalog_args.deposition, "Substring filter");
    catalog_cmd->add_option("--crystallinity", catalog_args.crystallinity, "Substring filter");
    catalog_cmd->add_option("--geometry", catalog_args.geometry, "Substring filter");
    catalog_cmd->add_option("--max-delta-lp", catalog_args.max_delta_lp,
                            "Keep rows with published low-power loss at or below this value");
    catalog_cmd->add_option("--format", catalog_args.format, "csv or json");
    catalog_cmd->add_option("--out", catalog_args.out_path, "Output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Bad command lines are input errors; --help and friends stay 0.
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        fit_args.have_power = fit_power->count() > 0;
        fit_args.have_temperature = fit_temp->count() > 0;
        trace_args.have_power = synth_power->count() > 0;
        trace_args.have_temperature = synth_temp->count() > 0;

        if (fit_cmd->parsed()) {
            return run_fit(fit_args, cfg);
        }
        if (sweep_cmd->parsed()) {
            return run_sweep_fit(sweep_args, cfg);
        }
        if (campaign_cmd->parsed()) {
            return run_campaign_cmd(campaign_args, cfg);
        }
        if (design_cmd->parsed()) {
            return run_design(design_args);
        }
        if (synth_cmd->parsed()) {
            if (synth_trace_cmd->parsed()) {
                return run_synth_trace(trace_args);
            }
            if (synth_sweep_cmd->parsed()) {
                return run_synth_sweep(sweep_gen_args);
            }
            if (synth_temp_cmd->parsed()) {
                return run_synth_temp(temp_args);
            }
        }
        if (catalog_cmd->parsed()) {
            return run_catalog(catalog_args);
        }
        std::cerr << "no subcommand selected\n";
        return 1;
    } catch (const qloss::InputError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    } catch (const qloss::Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    } catch (const std::exception& err) {
        std::cerr << "internal error: " << err.what() << "\n";
        return 3;
    }
}
