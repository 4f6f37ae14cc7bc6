#include "qloss/touchstone.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "qloss/errors.hpp"

namespace qloss {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

std::string upper(std::string s) {
    for (char& c : s) {
        c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    return s;
}

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream stream(line);
    std::string token;
    while (stream >> token) {
        tokens.push_back(token);
    }
    return tokens;
}

double parse_number(const std::string& token, std::size_t line_no) {
    double value = 0.0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        throw RowArityError("line " + std::to_string(line_no) + ": '" + token +
                            "' is not a number");
    }
    return value;
}

struct OptionLine {
    double freq_scale = 1e9;  // Touchstone defaults to GHz
    TouchstoneFormat format = TouchstoneFormat::kMagAngle;
};

OptionLine parse_option_line(const std::string& line, std::size_t line_no) {
    OptionLine opt;
    const std::vector<std::string> tokens = tokenize(line);
    bool expect_resistance = false;
    for (std::size_t k = 1; k < tokens.size(); ++k) {  // tokens[0] == "#"
        const std::string tok = upper(tokens[k]);
        if (expect_resistance) {
            parse_number(tokens[k], line_no);  // value is irrelevant to S21
            expect_resistance = false;
        } else if (tok == "HZ") {
            opt.freq_scale = 1.0;
        } else if (tok == "KHZ") {
            opt.freq_scale = 1e3;
        } else if (tok == "MHZ") {
            opt.freq_scale = 1e6;
        } else if (tok == "GHZ") {
            opt.freq_scale = 1e9;
        } else if (tok == "RI") {
            opt.format = TouchstoneFormat::kRealImag;
        } else if (tok == "MA") {
            opt.format = TouchstoneFormat::kMagAngle;
        } else if (tok == "DB") {
            opt.format = TouchstoneFormat::kDbAngle;
        } else if (tok == "R") {
            expect_resistance = true;
        } else if (tok == "S") {
            // scattering parameters: the only supported network parameter
        } else if (tok == "Y" || tok == "Z" || tok == "H" || tok == "G") {
            throw UnsupportedFormat("line " + std::to_string(line_no) + ": parameter type '" +
                                    tokens[k] + "' is not supported (S only)");
        } else {
            throw MalformedOptionLine("line " + std::to_string(line_no) +
                                      ": unrecognized option token '" + tokens[k] + "'");
        }
    }
    if (expect_resistance) {
        throw MalformedOptionLine("line " + std::to_string(line_no) +
                                  ": 'R' without a resistance value");
    }
    return opt;
}

Complex decode(double a, double b, TouchstoneFormat format) {
    switch (format) {
        case TouchstoneFormat::kRealImag:
            return {a, b};
        case TouchstoneFormat::kMagAngle:
            return std::polar(a, b * kDegToRad);
        case TouchstoneFormat::kDbAngle:
            return std::polar(std::pow(10.0, a / 20.0), b * kDegToRad);
    }
    throw Unreachable("unknown Touchstone format");
}

}  // namespace

std::vector<FrequencyTrace> parse_touchstone(const std::string& text) {
    std::vector<FrequencyTrace> traces;
    FrequencyTrace current;
    bool have_options = false;
    OptionLine options;

    const auto flush = [&] {
        if (!current.points.empty()) {
            current.label = "segment-" + std::to_string(traces.size());
            traces.push_back(std::move(current));
            current = FrequencyTrace{};
        }
    };

    std::istringstream stream(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        if (const std::size_t bang = line.find('!'); bang != std::string::npos) {
            line.erase(bang);
        }
        const std::size_t content = line.find_first_not_of(" \t\r");
        if (content == std::string::npos) {
            continue;
        }
        if (line[content] == '#') {
            if (have_options) {
                throw MalformedOptionLine("line " + std::to_string(line_no) +
                                          ": duplicate option line");
            }
            options = parse_option_line(line, line_no);
            have_options = true;
            continue;
        }

        if (!have_options) {
            throw MalformedOptionLine("line " + std::to_string(line_no) +
                                      ": data before the '#' option line");
        }
        const std::vector<std::string> tokens = tokenize(line);
        if (tokens.size() != 9) {
            throw RowArityError("line " + std::to_string(line_no) + ": expected 9 values for a "
                                "2-port row, got " + std::to_string(tokens.size()));
        }
        std::array<double, 9> values{};
        for (std::size_t k = 0; k < 9; ++k) {
            values[k] = parse_number(tokens[k], line_no);
        }

        TracePoint point;
        point.frequency_hz = values[0] * options.freq_scale;
        point.s21 = decode(values[3], values[4], options.format);
        if (!std::isfinite(point.frequency_hz) || !(point.frequency_hz > 0.0)) {
            throw RowArityError("line " + std::to_string(line_no) +
                                ": frequency must be finite and positive");
        }
        if (!current.points.empty() &&
            point.frequency_hz <= current.points.back().frequency_hz) {
            flush();  // frequency stepped backwards: a new sweep begins
        }
        current.points.push_back(point);
    }
    flush();
    if (!have_options) {
        throw MalformedOptionLine("no '#' option line found");
    }
    return traces;
}

std::string write_touchstone(const FrequencyTrace& trace, TouchstoneFormat format) {
    std::string out;
    out += "! " + (trace.label.empty() ? std::string("trace") : trace.label) + "\n";
    out += "! freq s11(2) s21(2) s12(2) s22(2)\n";
    switch (format) {
        case TouchstoneFormat::kRealImag:
            out += "# HZ S RI R 50\n";
            break;
        case TouchstoneFormat::kMagAngle:
            out += "# HZ S MA R 50\n";
            break;
        case TouchstoneFormat::kDbAngle:
            out += "# HZ S DB R 50\n";
            break;
    }

    char buf[512];
    for (const TracePoint& pt : trace.points) {
        double a = 0.0;
        double b = 0.0;
        switch (format) {
            case TouchstoneFormat::kRealImag:
                a = pt.s21.real();
                b = pt.s21.imag();
                break;
            case TouchstoneFormat::kMagAngle:
                a = std::abs(pt.s21);
                b = std::arg(pt.s21) / kDegToRad;
                break;
            case TouchstoneFormat::kDbAngle: {
                const double mag = std::abs(pt.s21);
                // A true zero has no dB representation; -400 dB round-trips
                // to 1e-20, far below any measurable transmission.
                a = mag > 0.0 ? 20.0 * std::log10(mag) : -400.0;
                b = std::arg(pt.s21) / kDegToRad;
                break;
            }
        }
        const double zero_pair = format == TouchstoneFormat::kDbAngle ? -400.0 : 0.0;
        std::snprintf(buf, sizeof(buf),
                      "%.17g %.17g 0 %.17g %.17g %.17g %.17g %.17g 0\n", pt.frequency_hz,
                      zero_pair, a, b, a, b, zero_pair);
        out += buf;
    }
    return out;
}

}  // namespace qloss
