#pragma once

#include <string>

namespace gmimo {

// Shortest decimal representation that round-trips to the same double.
// Locale-independent, so CSV bodies are byte-stable across runs.
std::string format_number(double value);

}  // namespace gmimo
