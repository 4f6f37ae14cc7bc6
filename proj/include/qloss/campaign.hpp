#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qloss/fit.hpp"
#include "qloss/types.hpp"

namespace qloss {

// One row of the campaign manifest: which file to fit and the measurement
// conditions Touchstone cannot carry.
struct ManifestEntry {
    std::string file;
    std::string label;
    double power_dbm = 0.0;
    double temperature_k = 0.0;
};

// Parses manifest CSV with header `file,label,power_dbm,temperature_k`.
std::vector<ManifestEntry> parse_manifest(const std::string& text);

struct TraceOutcome {
    ManifestEntry meta;
    std::optional<FitResult> fit;     // empty when the fit threw
    std::string error;                // the exception text in that case
    double photon_number = 0.0;       // from the fitted Q_l, |Q_c| and power
    double sigma_delta_i = 0.0;
};

struct ResonatorSummary {
    std::string label;
    std::vector<TraceOutcome> traces;  // sorted by drive power
    std::optional<TLSFit> tls;         // present when enough traces fit
    std::string tls_error;
};

struct CampaignResult {
    std::vector<ResonatorSummary> resonators;  // sorted by label
    int trace_count = 0;
    int failed_fits = 0;
    bool all_converged = true;
};

struct CampaignOptions {
    FitConfig fit;
    int workers = 0;  // 0: hardware concurrency
};

// Fits every manifest trace (concurrently, bounded pool), groups results by
// resonator label, converts drive power to photon number per trace, and
// runs the saturation fit per resonator. Output ordering depends only on
// the manifest content, never on scheduling.
CampaignResult run_campaign(const std::string& directory, const CampaignOptions& options = {});

}  // namespace qloss
