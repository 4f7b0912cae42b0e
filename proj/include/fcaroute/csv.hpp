#pragma once
// CSV emission helpers. All floating-point output goes through fixed-width
// formatting so repeated runs produce byte-identical files.

#include <cstdio>
#include <string>

namespace fcaroute {

inline std::string format_double(double v, int decimals = 6) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

}  // namespace fcaroute
