#pragma once

#include <cstdio>
#include <string>

namespace jacksim {

// Round-trip-exact decimal form; all CSV output goes through this so files
// are byte-identical across runs with the same seed.
inline std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace jacksim
