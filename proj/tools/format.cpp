#include "format.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

namespace spherewave::cli {

namespace {

void write(const nlohmann::ordered_json& j, std::string& out, int depth) {
  const std::string pad(2 * (depth + 1), ' ');
  const std::string close(2 * depth, ' ');
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        out += nlohmann::ordered_json(it.key()).dump();
        out += ": ";
        write(it.value(), out, depth + 1);
      }
      out += "\n" + close + "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Short numeric vectors stay on one line.
      const bool inline_array =
          j.size() <= 3 && std::all_of(j.begin(), j.end(), [](const auto& v) {
            return v.is_number();
          });
      out += inline_array ? "[" : "[\n";
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += inline_array ? ", " : ",\n";
        first = false;
        if (!inline_array) out += pad;
        write(v, out, depth + 1);
      }
      out += inline_array ? "]" : "\n" + close + "]";
      return;
    }
    case nlohmann::json::value_t::number_float:
      if (std::isfinite(j.get<double>())) {
        out += format_double(j.get<double>());
      } else {
        out += "null";
      }
      return;
    default:
      out += j.dump();
  }
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 40> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::general, 17);
  if (ec != std::errc{}) return "nan";
  return std::string(buf.data(), end);
}

std::string dump_json(const nlohmann::ordered_json& j) {
  std::string out;
  write(j, out, 0);
  out += "\n";
  return out;
}

}  // namespace spherewave::cli
