#pragma once

#include <string>
#include <string_view>

namespace sketchkrylov {

// Shortest decimal that parses back to the same double. nan and inf are
// written as "nan", "inf", "-inf".
std::string format_double(double x);

// Parses the whole of `text`; accepts the output of format_double. Throws
// InvalidArgument.
double parse_double(std::string_view text);
std::size_t parse_count(std::string_view text);

}  // namespace sketchkrylov
