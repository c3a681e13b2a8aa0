#pragma once

#include <string>

namespace eigensafe {

// Shortest form with 17 significant digits; round-trips any double exactly.
std::string format_g17(double value);

// Locale-independent strict double parse; throws ValidationError on garbage.
double parse_double(const std::string& token);

}  // namespace eigensafe
