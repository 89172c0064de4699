#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace ctgboost::text {

/// Shortest representation that parses back to the same double.
inline std::string round_trip(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string fixed(double v, int digits) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, digits);
    return std::string(buf, res.ptr);
}

}  // namespace ctgboost::text
