#include "qloss/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "qloss/errors.hpp"
#include "qloss/model.hpp"
#include "qloss/touchstone.hpp"

namespace qloss {

namespace {

std::string strip(const std::string& s) {
    const std::size_t first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const std::size_t last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_number(const std::string& cell, std::size_t row_no, const char* column) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw ValidationError("manifest row " + std::to_string(row_no) + ": " + column +
                              " value '" + cell + "' is not a number");
    }
    return value;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace

std::vector<ManifestEntry> parse_manifest(const std::string& text) {
    std::istringstream stream(text);
    std::string line;
    std::size_t row_no = 0;
    bool have_header = false;
    while (std::getline(stream, line)) {
        ++row_no;
        const std::string header = strip(line);
        if (header.empty()) {
            continue;
        }
        if (header != "file,label,power_dbm,temperature_k") {
            throw MissingHeader("expected manifest header 'file,label,power_dbm,temperature_k', "
                                "got '" + header + "'");
        }
        have_header = true;
        break;
    }
    if (!have_header) {
        throw MissingHeader("manifest is empty");
    }

    std::vector<ManifestEntry> entries;
    while (std::getline(stream, line)) {
        ++row_no;
        if (strip(line).empty()) {
            continue;
        }
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            if (comma == std::string::npos) {
                cells.push_back(strip(line.substr(start)));
                break;
            }
            cells.push_back(strip(line.substr(start, comma - start)));
            start = comma + 1;
        }
        if (cells.size() != 4) {
            throw RowArityError("manifest row " + std::to_string(row_no) +
                                ": expected 4 columns, got " + std::to_string(cells.size()));
        }
        ManifestEntry entry;
        entry.file = cells[0];
        entry.label = cells[1];
        entry.power_dbm = parse_number(cells[2], row_no, "power_dbm");
        entry.temperature_k = parse_number(cells[3], row_no, "temperature_k");
        if (entry.file.empty() || entry.label.empty()) {
            throw ValidationError("manifest row " + std::to_string(row_no) +
                                  ": file and label must be non-empty");
        }
        if (!(entry.temperature_k >= 0.0)) {
            throw ValidationError("manifest row " + std::to_string(row_no) +
                                  ": temperature must be >= 0");
        }
        entries.push_back(std::move(entry));
    }
    return entries;
}

CampaignResult run_campaign(const std::string& directory, const CampaignOptions& options) {
    const std::filesystem::path dir(directory);
    const std::vector<ManifestEntry> manifest = parse_manifest(read_file(dir / "manifest.csv"));
    if (manifest.empty()) {
        throw InsufficientData("manifest lists no traces");
    }

    std::vector<TraceOutcome> outcomes(manifest.size());

    // Fits are pure and independent; a bounded pool pulls indices from a
    // shared counter and writes into its own slot, so the result layout is
    // identical however the work interleaves.
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        while (true) {
            const std::size_t k = next.fetch_add(1);
            if (k >= manifest.size()) {
                return;
            }
            TraceOutcome& slot = outcomes[k];
            slot.meta = manifest[k];
            try {
                const std::string text = read_file(dir / manifest[k].file);
                std::vector<FrequencyTrace> traces = parse_touchstone(text);
                if (traces.empty()) {
                    throw ValidationError(manifest[k].file + " holds no data rows");
                }
                FrequencyTrace trace = std::move(traces.front());
                trace.label = manifest[k].label;
                trace.applied_power_w = dbm_to_watt(manifest[k].power_dbm);
                if (manifest[k].temperature_k > 0.0) {
                    trace.temperature_k = manifest[k].temperature_k;
                }
                FitResult fit = fit_resonance(trace, options.fit);
                slot.photon_number =
                    photon_number(*trace.applied_power_w, fit.params.f_r_hz,
                                  fit.params.q_loaded, fit.params.qc_mag);
                slot.sigma_delta_i = propagate_uncertainty(fit).sigma_delta_i;
                slot.fit = std::move(fit);
            } catch (const std::exception& err) {
                slot.error = err.what();
            }
        }
    };

    unsigned workers = options.workers > 0 ? static_cast<unsigned>(options.workers)
                                           : std::thread::hardware_concurrency();
    workers = std::max(1u, static_cast<unsigned>(std::min<std::size_t>(workers, manifest.size())));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned k = 0; k < workers; ++k) {
        pool.emplace_back(worker);
    }
    for (std::thread& t : pool) {
        t.join();
    }

    std::map<std::string, ResonatorSummary> grouped;
    CampaignResult result;
    result.trace_count = static_cast<int>(outcomes.size());
    for (TraceOutcome& outcome : outcomes) {
        ResonatorSummary& group = grouped[outcome.meta.label];
        group.label = outcome.meta.label;
        if (!outcome.fit) {
            ++result.failed_fits;
            result.all_converged = false;
        } else if (!outcome.fit->converged) {
            result.all_converged = false;
        }
        group.traces.push_back(std::move(outcome));
    }

    for (auto& [label, group] : grouped) {
        std::sort(group.traces.begin(), group.traces.end(),
                  [](const TraceOutcome& a, const TraceOutcome& b) {
                      return a.meta.power_dbm < b.meta.power_dbm;
                  });
        std::vector<PowerSweepPoint> sweep;
        double f_sum = 0.0;
        double temperature = 0.0;
        for (const TraceOutcome& outcome : group.traces) {
            if (!outcome.fit) {
                continue;
            }
            sweep.push_back(PowerSweepPoint{outcome.photon_number, outcome.fit->delta_i,
                                            outcome.sigma_delta_i});
            f_sum += outcome.fit->params.f_r_hz;
            temperature = outcome.meta.temperature_k;
        }
        if (sweep.empty()) {
            group.tls_error = "no trace fit succeeded";
        } else {
            try {
                TLSFit tls = fit_power_sweep(sweep, f_sum / static_cast<double>(sweep.size()),
                                             temperature, options.fit);
                if (!tls.converged) {
                    result.all_converged = false;
                }
                group.tls = std::move(tls);
            } catch (const std::exception& err) {
                group.tls_error = err.what();
                result.all_converged = false;
            }
        }
        result.resonators.push_back(std::move(group));
    }
    return result;
}

}  // namespace qloss
