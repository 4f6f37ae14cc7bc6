#include "qloss/catalog.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

#include "qloss/errors.hpp"

namespace qloss {

namespace {

constexpr const char* kHeader =
    "material,reference,deposition,crystallinity,geometry,"
    "delta_lp_1e-5,f_delta0_tls_1e-5,q_max_1e5,area_1e5_um2";

constexpr const char* kDagger = "†";      // †
constexpr const char* kLessEqual = "≤";   // ≤
constexpr const char* kEnDash = "–";      // – (range separator)

bool starts_with(const std::string& s, const std::string& prefix) {
    return s.compare(0, prefix.size(), prefix) == 0;
}

std::string strip(std::string s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.erase(s.begin());
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.pop_back();
    }
    return s;
}

double parse_value(const std::string& text, const std::string& cell) {
    const std::string t = strip(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
        throw ValidationError("catalog cell '" + cell + "': '" + t + "' is not a number");
    }
    return value;
}

CatalogCell parse_cell(const std::string& raw) {
    CatalogCell cell;
    cell.raw = raw;
    std::string work = strip(raw);
    if (work.empty()) {
        return cell;
    }
    if (work == kDagger) {
        cell.incomparable = true;
        return cell;
    }
    if (!work.empty() && work.back() == '*') {
        cell.estimated = true;
        work = strip(work.substr(0, work.size() - 1));
    }
    if (starts_with(work, kLessEqual)) {
        cell.upper_bound = true;
        work = strip(work.substr(std::string(kLessEqual).size()));
    }
    if (starts_with(work, "F ×")) {  // F × (filling factor not reported)
        cell.filling_scaled = true;
        work = strip(work.substr(std::string("F ×").size()));
        if (!work.empty() && work.front() == '(' && work.back() == ')') {
            work = strip(work.substr(1, work.size() - 2));
        }
    }

    if (const std::size_t pm = work.find("±"); pm != std::string::npos) {  // ±
        const double value = parse_value(work.substr(0, pm), raw);
        const double err = parse_value(work.substr(pm + std::string("±").size()), raw);
        cell.central = value;
        cell.low = value - err;
        cell.high = value + err;
    } else if (const std::size_t dash = work.find(kEnDash); dash != std::string::npos) {
        cell.low = parse_value(work.substr(0, dash), raw);
        cell.high = parse_value(work.substr(dash + std::string(kEnDash).size()), raw);
        cell.central = 0.5 * (cell.low + cell.high);
    } else {
        const double value = parse_value(work, raw);
        cell.central = value;
        cell.high = value;
        cell.low = cell.upper_bound ? 0.0 : value;
    }
    if (cell.low > cell.high) {
        throw ValidationError("catalog cell '" + raw + "': range is inverted");
    }
    cell.present = true;
    return cell;
}

std::vector<std::string> split_cells(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            cells.push_back(line.substr(start));
            return cells;
        }
        cells.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

std::vector<CatalogEntry> parse_catalog(const std::string& text) {
    std::istringstream stream(text);
    std::string line;
    if (!std::getline(stream, line) || strip(line) != kHeader) {
        throw ValidationError("catalog data has an unexpected header");
    }
    std::vector<CatalogEntry> entries;
    while (std::getline(stream, line)) {
        if (strip(line).empty()) {
            continue;
        }
        const std::vector<std::string> cells = split_cells(line);
        if (cells.size() != 9) {
            throw ValidationError("catalog row with " + std::to_string(cells.size()) +
                                  " cells: " + line);
        }
        CatalogEntry entry;
        entry.material = cells[0];
        entry.reference = cells[1];
        entry.deposition = cells[2];
        entry.crystallinity = cells[3];
        entry.geometry = cells[4];
        entry.delta_lp = parse_cell(cells[5]);
        entry.f_delta0 = parse_cell(cells[6]);
        entry.q_max = parse_cell(cells[7]);
        entry.area = parse_cell(cells[8]);
        for (const CatalogCell* cell :
             {&entry.delta_lp, &entry.f_delta0, &entry.q_max, &entry.area}) {
            entry.estimated_flag = entry.estimated_flag || cell->estimated;
            entry.incomparable_flag = entry.incomparable_flag || cell->incomparable;
        }
        if (!entry.incomparable_flag && !entry.delta_lp.present && !entry.f_delta0.present &&
            !entry.q_max.present) {
            throw ValidationError("catalog row for " + entry.material +
                                  " carries no comparable value");
        }
        entries.push_back(std::move(entry));
    }
    return entries;
}

// Lowercases ASCII and folds Unicode subscript digits (and subscript x) to
// their plain forms so user queries need not type subscripts.
std::string normalize(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t k = 0; k < s.size();) {
        const auto byte0 = static_cast<unsigned char>(s[k]);
        if (byte0 == 0xE2 && k + 2 < s.size() &&
            static_cast<unsigned char>(s[k + 1]) == 0x82) {
            const auto byte2 = static_cast<unsigned char>(s[k + 2]);
            if (byte2 >= 0x80 && byte2 <= 0x89) {  // U+2080..U+2089
                out.push_back(static_cast<char>('0' + (byte2 - 0x80)));
                k += 3;
                continue;
            }
            if (byte2 == 0x93) {  // U+2093, subscript x
                out.push_back('x');
                k += 3;
                continue;
            }
        }
        out.push_back(static_cast<char>(std::tolower(byte0)));
        ++k;
    }
    return out;
}

bool contains(const std::string& haystack, const std::string& needle) {
    return normalize(haystack).find(normalize(needle)) != std::string::npos;
}

}  // namespace

const std::string& catalog_csv() {
    static const std::string text = detail::embedded_table1_csv();
    return text;
}

const std::vector<CatalogEntry>& catalog_entries() {
    static const std::vector<CatalogEntry> entries = parse_catalog(catalog_csv());
    return entries;
}

std::string catalog_dump() {
    std::string out = kHeader;
    out += '\n';
    for (const CatalogEntry& entry : catalog_entries()) {
        out += entry.material;
        out += ',';
        out += entry.reference;
        out += ',';
        out += entry.deposition;
        out += ',';
        out += entry.crystallinity;
        out += ',';
        out += entry.geometry;
        out += ',';
        out += entry.delta_lp.raw;
        out += ',';
        out += entry.f_delta0.raw;
        out += ',';
        out += entry.q_max.raw;
        out += ',';
        out += entry.area.raw;
        out += '\n';
    }
    return out;
}

std::vector<CatalogEntry> catalog_query(const CatalogFilter& filter) {
    std::vector<CatalogEntry> out;
    for (const CatalogEntry& entry : catalog_entries()) {
        if (filter.material && !contains(entry.material, *filter.material)) {
            continue;
        }
        if (filter.reference && !contains(entry.reference, *filter.reference)) {
            continue;
        }
        if (filter.deposition && !contains(entry.deposition, *filter.deposition)) {
            continue;
        }
        if (filter.crystallinity && !contains(entry.crystallinity, *filter.crystallinity)) {
            continue;
        }
        if (filter.geometry && !contains(entry.geometry, *filter.geometry)) {
            continue;
        }
        if (filter.max_delta_lp) {
            // Numeric comparison: rows without a comparable published value
            // (blank or dagger) are excluded.
            if (!entry.delta_lp.present || entry.delta_lp.high * 1e-5 > *filter.max_delta_lp) {
                continue;
            }
        }
        out.push_back(entry);
    }
    return out;
}

}  // namespace qloss
