#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace hawkes {

// Shortest decimal string that round-trips to the same double.
std::string format_double(double x);

// RFC 4180 field quoting: quote when the field holds a comma, quote, CR or LF.
std::string csv_field(std::string_view field);

// 64-bit FNV-1a, rendered as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace hawkes
