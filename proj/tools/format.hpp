#pragma once

#include <json.hpp>
#include <string>

namespace spherewave::cli {

/// 17 significant digits, '.' decimal separator, independent of locale.
std::string format_double(double v);

/// Serializes with format_double for every floating-point value, two-space
/// indentation and keys in insertion order of the underlying object.
std::string dump_json(const nlohmann::ordered_json& j);

}  // namespace spherewave::cli
