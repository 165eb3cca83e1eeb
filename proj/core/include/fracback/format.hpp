#pragma once

#include <string>

namespace fracback {

// Shortest decimal string that parses back to exactly x.
std::string shortest_repr(double x);

// Fixed 17-significant-digit scientific representation.
std::string repr17(double x);

// Parse a double, throwing DomainError with `what` on failure.
double parse_double(const std::string& text, const std::string& what);

}  // namespace fracback
