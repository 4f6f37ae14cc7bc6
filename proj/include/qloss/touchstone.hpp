#pragma once

#include <string>
#include <vector>

#include "qloss/types.hpp"

namespace qloss {

enum class TouchstoneFormat { kRealImag, kMagAngle, kDbAngle };

// Parses a two-port Touchstone v1 file (option line `# <unit> S <fmt> R <n>`,
// nine-number data rows, `!` comments). S21 is taken from value columns 4-5
// of each row. A frequency step backwards starts a new trace, so files with
// several concatenated sweeps yield several traces. Power and temperature
// metadata are not representable in this format and stay unset.
std::vector<FrequencyTrace> parse_touchstone(const std::string& text);

// Serializes a trace as a two-port Touchstone v1 file in Hz with the given
// value format. S21 carries the trace; S12 mirrors it (reciprocal network)
// and the reflection entries are written as zero.
std::string write_touchstone(const FrequencyTrace& trace,
                             TouchstoneFormat format = TouchstoneFormat::kRealImag);

}  // namespace qloss
