#pragma once

#include <json.hpp>

#include <string>

namespace wcorr::cli {

using Json = nlohmann::ordered_json;

/// Pretty JSON with every floating-point number written in the shortest form
/// that re-parses to the identical double. NaN and infinities become null.
std::string dump_json(const Json& value);

/// A double in the same shortest round-trip form, for CSV output.
std::string format_double(double x);

}  // namespace wcorr::cli
