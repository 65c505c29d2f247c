#pragma once

#include <string>

namespace hawkes {

// Locale-independent shortest-round-trip-free formatting with 12 significant digits.
std::string format_number(double v);

} // namespace hawkes
