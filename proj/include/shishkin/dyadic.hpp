#pragma once

#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>

#include "shishkin/errors.hpp"

namespace shishkin {

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

}  // namespace detail

/// Parses a real parameter. Accepts the dyadic form `2^k` (k a signed integer,
/// evaluated exactly with ldexp) as well as plain decimal literals. Decimal
/// parsing goes through from_chars, so it is locale independent.
inline double parse_real(std::string_view text) {
    auto s = detail::trim(text);
    if (s.empty()) throw ConfigError("empty numeric value");
    if (auto caret = s.find('^'); caret != std::string_view::npos) {
        auto base = detail::trim(s.substr(0, caret));
        auto expo = detail::trim(s.substr(caret + 1));
        if (base != "2") throw ConfigError("only base-2 powers are supported: '" + std::string(text) + "'");
        if (!expo.empty() && expo.front() == '+') expo.remove_prefix(1);
        int k = 0;
        auto [ptr, ec] = std::from_chars(expo.data(), expo.data() + expo.size(), k);
        if (ec != std::errc{} || ptr != expo.data() + expo.size())
            throw ConfigError("bad exponent in '" + std::string(text) + "'");
        return std::ldexp(1.0, k);
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ConfigError("not a number: '" + std::string(text) + "'");
    return v;
}

/// Returns k when v == 2^k exactly.
inline std::optional<int> dyadic_exponent(double v) {
    if (!(v > 0.0) || !std::isfinite(v)) return std::nullopt;
    int e = 0;
    double m = std::frexp(v, &e);
    if (m != 0.5) return std::nullopt;
    return e - 1;
}

/// Shortest round-trip decimal representation.
inline std::string format_real(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

/// `2^k` for exact powers of two, otherwise the shortest decimal form.
inline std::string format_param(double v) {
    if (auto k = dyadic_exponent(v)) return "2^" + std::to_string(*k);
    return format_real(v);
}

/// Scientific notation with `digits` significant digits, e.g. 7.23e-01.
inline std::string format_sci(double v, int digits = 3) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, digits - 1);
    return std::string(buf, ptr);
}

/// Fixed notation with `decimals` digits after the point, e.g. 0.52.
inline std::string format_fixed(double v, int decimals) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
    return std::string(buf, ptr);
}

}  // namespace shishkin
