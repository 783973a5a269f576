#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace abtrace {

/// 17 significant digits, enough to round-trip a double.
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// Each line is written as "# line".
inline void write_comment_header(std::ostream& os, const std::vector<std::string>& lines) {
    for (const auto& l : lines) os << "# " << l << '\n';
}

} // namespace abtrace
