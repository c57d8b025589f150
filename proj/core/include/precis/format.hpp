#pragma once

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <system_error>

#include "precis/errors.hpp"

namespace precis {

// Shortest decimal form that round-trips to the same double.
inline std::string format_double(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    if (res.ec != std::errc()) throw std::runtime_error("format_double: to_chars failed");
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& text, const char* what) {
    double value = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw ConfigError(std::string(what) + ": cannot parse '" + text + "' as a number");
    return value;
}

inline std::size_t parse_size(const std::string& text, const char* what) {
    std::size_t value = 0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw ConfigError(std::string(what) + ": cannot parse '" + text + "' as a count");
    return value;
}

inline std::uint64_t parse_u64(const std::string& text, const char* what) {
    std::uint64_t value = 0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw ConfigError(std::string(what) + ": cannot parse '" + text + "' as an integer");
    return value;
}

} // namespace precis
