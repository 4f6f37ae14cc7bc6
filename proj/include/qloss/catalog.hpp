#pragma once

#include <optional>
#include <string>
#include <vector>

namespace qloss {

// One table cell: the exact published text plus a parsed numeric view in
// the column's unit (1e-5 for losses, 1e5 for Q_max, 1e5 um^2 for area).
struct CatalogCell {
    std::string raw;
    bool present = false;        // carries a usable numeric value
    bool incomparable = false;   // dagger: no comparable data reported
    bool estimated = false;      // asterisk: derived from the reference's plots
    bool upper_bound = false;    // published as an upper limit
    bool filling_scaled = false; // published as F x (value), filling factor unknown
    double low = 0.0;
    double central = 0.0;
    double high = 0.0;
};

struct CatalogEntry {
    std::string material;
    std::string reference;
    std::string deposition;
    std::string crystallinity;
    std::string geometry;
    CatalogCell delta_lp;   // low-power loss, x 1e-5
    CatalogCell f_delta0;   // filling-weighted intrinsic TLS loss, x 1e-5
    CatalogCell q_max;      // saturated quality factor, x 1e5
    CatalogCell area;       // device footprint, x 1e5 um^2
    bool estimated_flag = false;
    bool incomparable_flag = false;
};

// The bundled benchmark table of published dielectric-loss measurements.
const std::vector<CatalogEntry>& catalog_entries();

// The bundled CSV exactly as shipped.
const std::string& catalog_csv();

// Re-serializes the parsed entries; byte-identical to catalog_csv() because
// every cell keeps its published text.
std::string catalog_dump();

// Conjunctive filters. Text fields match case-insensitive substrings with
// subscript digits treated as plain digits, so "Al2O3" finds "Al₂O₃".
// max_delta_lp is an absolute loss (e.g. 5e-5) compared against the upper
// end of the published value; rows without a comparable number are skipped.
struct CatalogFilter {
    std::optional<std::string> material;
    std::optional<std::string> reference;
    std::optional<std::string> deposition;
    std::optional<std::string> crystallinity;
    std::optional<std::string> geometry;
    std::optional<double> max_delta_lp;
};

std::vector<CatalogEntry> catalog_query(const CatalogFilter& filter);

namespace detail {
const char* embedded_table1_csv();
}

}  // namespace qloss
