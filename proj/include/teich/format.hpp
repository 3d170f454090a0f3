#pragma once

// Deterministic 12-significant-digit formatting for all numeric output.

#include <cstdio>
#include <string>

namespace teich {

inline std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string fmt12(long long v) { return std::to_string(v); }

}  // namespace teich
