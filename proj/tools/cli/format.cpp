#include "format.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace ptscatter::cli {

namespace {

std::string non_finite(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    return x > 0 ? "inf" : "-inf";
}

}  // namespace

std::string format_double(double x) {
    if (!std::isfinite(x)) {
        return non_finite(x);
    }
    std::array<char, 32> buf{};
    // %g-style selection: plain notation would spell out every digit of a
    // large integer-valued double.
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general);
    return {buf.data(), res.ptr};
}

std::string format_fixed(double x, int decimals) {
    if (!std::isfinite(x)) {
        return non_finite(x);
    }
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::fixed, decimals);
    std::string out(buf.data(), res.ptr);
    // "-0.00" and "0.00" are the same coordinate.
    if (out.front() == '-' && out.find_first_not_of("-0.") == std::string::npos) {
        out.erase(0, 1);
    }
    return out;
}

std::string format_short(double x, int digits) {
    if (!std::isfinite(x)) {
        return non_finite(x);
    }
    if (x == 0.0) {
        return "0";
    }
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, digits);
    return {buf.data(), res.ptr};
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string grid_hash(std::span<const double> values) {
    std::uint64_t h = fnv1a64("");
    bool first = true;
    for (const double v : values) {
        if (!first) {
            h = fnv1a64(",", h);
        }
        h = fnv1a64(format_double(v), h);
        first = false;
    }
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string("fnv1a64:") + buf;
}

}  // namespace ptscatter::cli
