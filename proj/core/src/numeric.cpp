#include "qsieve/numeric.hpp"

#include <cstdio>

namespace qsieve {

std::string format_decimal(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string format_decimal(const Rat& v) {
    return format_decimal(v.convert_to<double>());
}

} // namespace qsieve
