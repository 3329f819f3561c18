#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace seqpip {

// 17 significant digits ("%.17g"); parses back to the identical double.
std::string format_full(double v);

// Shortest representation that still round-trips.
std::string format_shortest(double v);

// Locale-independent strict parse of the whole token; nullopt on junk,
// trailing characters, or an empty string.
std::optional<double> parse_double(std::string_view token) noexcept;

}  // namespace seqpip
