#pragma once

#include <cstdio>
#include <string>

namespace freundgeo {

/// Full-precision decimal rendering used by every file format and the CLI:
/// 17 significant digits round-trip a double exactly.
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace freundgeo
