#pragma once

#include <cstdio>
#include <string>

namespace mahlerlab {

/// 17 significant digits: enough to round-trip any double exactly.
inline std::string g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace mahlerlab
