#pragma once

#include <string>

namespace freqstore {

/// Shortest decimal string that parses back to the same double.
std::string format_double(double value);

/// Fixed number of significant digits (%.12g style) for tabular output.
std::string format_csv(double value);

}  // namespace freqstore
