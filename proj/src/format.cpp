#include "freqstore/format.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace freqstore {

std::string format_double(double value) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), res.ptr);
}

std::string format_csv(double value) {
    std::array<char, 64> buf{};
    // -0 prints as 0 so that equal trajectories produce equal bytes
    const int n = std::snprintf(buf.data(), buf.size(), "%.12g", value == 0.0 ? 0.0 : value);
    return std::string(buf.data(), static_cast<std::size_t>(n));
}

}  // namespace freqstore
