#include "fracback/format.hpp"

#include "fracback/errors.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <system_error>

namespace fracback {

std::string shortest_repr(double x) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    if (ec != std::errc{}) {
        throw NumericalError("shortest_repr: formatting failed");
    }
    return std::string(buf.data(), ptr);
}

std::string repr17(double x) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x,
                                   std::chars_format::scientific, 16);
    if (ec != std::errc{}) {
        throw NumericalError("repr17: formatting failed");
    }
    return std::string(buf.data(), ptr);
}

double parse_double(const std::string& text, const std::string& what) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    if (first != last && *first == '+') {
        ++first;
    }
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
        throw DomainError(what + ": cannot parse '" + text + "' as a number");
    }
    return v;
}

}  // namespace fracback
