#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace ptscatter::cli {

// Shortest decimal string that parses back to exactly x ("nan", "inf", "-inf"
// for non-finite values).
[[nodiscard]] std::string format_double(double x);

// Fixed-point with the given number of decimals; used for SVG coordinates.
[[nodiscard]] std::string format_fixed(double x, int decimals);

// At most `digits` significant digits, for axis labels.
[[nodiscard]] std::string format_short(double x, int digits = 4);

[[nodiscard]] std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

// FNV-1a over the shortest-form text of every value, comma separated.
[[nodiscard]] std::string grid_hash(std::span<const double> values);

}  // namespace ptscatter::cli
