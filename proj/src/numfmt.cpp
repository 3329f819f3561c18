#include "seqpip/numfmt.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace seqpip {

std::string format_full(double v) {
  std::array<char, 40> buf{};
  const int n = std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return std::string(buf.data(), static_cast<std::size_t>(n));
}

std::string format_shortest(double v) {
  std::array<char, 40> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::optional<double> parse_double(std::string_view token) noexcept {
  if (token.empty()) return std::nullopt;
  // from_chars rejects a leading '+', which %.17g never emits anyway.
  double v = 0.0;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last) return std::nullopt;
  return v;
}

}  // namespace seqpip
