#include "qloss/sweep_csv.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <sstream>

#include "qloss/errors.hpp"
#include "qloss/model.hpp"

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

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            cells.push_back(strip(line.substr(start)));
            return cells;
        }
        cells.push_back(strip(line.substr(start, comma - start)));
        start = comma + 1;
    }
}

double parse_cell(const std::string& cell, std::size_t row_no, const char* column) {
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        throw NonPositiveValue("row " + std::to_string(row_no) + ": " + column + " value '" +
                               cell + "' is not a number");
    }
    return value;
}

}  // namespace

std::vector<PowerSweepPoint> parse_sweep_csv(const std::string& text,
                                             const std::optional<PhotonContext>& context) {
    std::istringstream stream(text);
    std::string line;
    std::size_t row_no = 0;

    bool power_keyed = false;
    bool have_header = false;
    while (std::getline(stream, line)) {
        ++row_no;
        const std::string header = strip(line);
        if (header.empty()) {
            continue;
        }
        if (header == "photon_number,delta_i,sigma") {
            power_keyed = false;
        } else if (header == "power_dbm,delta_i,sigma") {
            power_keyed = true;
        } else {
            throw MissingHeader(
                "expected header 'photon_number,delta_i,sigma' or 'power_dbm,delta_i,sigma', "
                "got '" + header + "'");
        }
        have_header = true;
        break;
    }
    if (!have_header) {
        throw MissingHeader("sweep CSV is empty");
    }
    if (power_keyed && !context) {
        throw ValidationError(
            "power-keyed sweep needs resonance context (f_r, Q_l, |Q_c|) for conversion");
    }

    std::vector<PowerSweepPoint> points;
    while (std::getline(stream, line)) {
        ++row_no;
        if (strip(line).empty()) {
            continue;
        }
        const std::vector<std::string> cells = split_row(line);
        if (cells.size() != 3) {
            throw RowArityError("row " + std::to_string(row_no) + ": expected 3 columns, got " +
                                std::to_string(cells.size()));
        }
        PowerSweepPoint point;
        const double key = parse_cell(cells[0], row_no, power_keyed ? "power_dbm" : "photon_number");
        point.delta_i = parse_cell(cells[1], row_no, "delta_i");
        point.sigma = parse_cell(cells[2], row_no, "sigma");
        point.photon_number =
            power_keyed ? photon_number(dbm_to_watt(key), context->f_r_hz, context->q_loaded,
                                        context->qc_mag)
                        : key;
        if (!(point.photon_number > 0.0)) {
            throw NonPositiveValue("row " + std::to_string(row_no) +
                                   ": photon number must be > 0");
        }
        if (!(point.delta_i > 0.0)) {
            throw NonPositiveValue("row " + std::to_string(row_no) + ": delta_i must be > 0");
        }
        if (point.sigma < 0.0) {
            throw NonPositiveValue("row " + std::to_string(row_no) + ": sigma must be >= 0");
        }
        validate(point);
        points.push_back(point);
    }
    std::sort(points.begin(), points.end(),
              [](const PowerSweepPoint& a, const PowerSweepPoint& b) {
                  return a.photon_number < b.photon_number;
              });
    return points;
}

std::string write_sweep_csv(const std::vector<PowerSweepPoint>& points) {
    std::string out = "photon_number,delta_i,sigma\n";
    char buf[160];
    for (const PowerSweepPoint& pt : points) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", pt.photon_number, pt.delta_i,
                      pt.sigma);
        out += buf;
    }
    return out;
}

}  // namespace qloss
