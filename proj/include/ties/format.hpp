#pragma once
// Deterministic text formatting for CSV output: shortest decimal form
// that round-trips the exact double, independent of locale and stream
// state.

#include <string>

namespace ties {

std::string format_double(double value);

}  // namespace ties
