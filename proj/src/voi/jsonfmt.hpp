#ifndef VOI_JSONFMT_HPP
#define VOI_JSONFMT_HPP

#include <string>

#include "json.hpp"

namespace voi {

// All floats in emitted files carry 17 significant digits.
std::string format_double(double x);

// Serializes with format_double applied to every number (nlohmann's default
// shortest-round-trip form does not meet the 17-digit file contract).
std::string dump_json(const nlohmann::json& j, int indent = 2);

// RFC-4180 field quoting ('.' decimal separator comes from format_double).
std::string csv_field(const std::string& raw);

}  // namespace voi

#endif
