#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace drslf {

// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

// Strict full-token parses; nullopt on any trailing garbage.
std::optional<double> parse_double(std::string_view token);
std::optional<long long> parse_integer(std::string_view token);

}  // namespace drslf
