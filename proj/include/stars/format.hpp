#pragma once

#include <string>

namespace stars {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

/// Inverse of format_double; throws InvalidArgument on malformed text.
double parse_double(const std::string& text);

}  // namespace stars
