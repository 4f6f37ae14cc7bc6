#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "qloss/design.hpp"
#include "qloss/fit.hpp"

namespace qloss {

using Json = nlohmann::ordered_json;

// JSON report fragments. Field order is fixed; numeric field names carry
// their unit as a suffix (dimensionless quantities have none).
Json fit_report(const FitResult& fit, const std::string& label);
Json tls_report(const TLSFit& fit, const std::string& label);
Json design_report_json(const DesignReport& report);

// Rebuilds results from their report fragments (inverse of the above for
// every field the structs carry).
FitResult fit_result_from_report(const Json& node);
TLSFit tls_fit_from_report(const Json& node);

// Canonical rendering: two-space indent, trailing newline. Rendering a
// parsed report reproduces the original text byte for byte.
std::string render_json(const Json& node);

// Single-line CSV schemas for spreadsheet import.
std::string fit_report_csv(const std::vector<std::pair<std::string, FitResult>>& fits);
std::string tls_report_csv(const std::vector<std::pair<std::string, TLSFit>>& fits);
std::string design_report_csv(const DesignReport& report);

}  // namespace qloss
