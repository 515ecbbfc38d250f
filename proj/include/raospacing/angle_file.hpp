#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "raospacing/error.hpp"

namespace rao {

/// Parses one angle per line. Blank lines and lines whose first non-blank
/// character is '#' are skipped. Values are returned as written (no unit
/// conversion); malformed lines throw invalid_input naming the line.
inline std::vector<double> parse_angles(std::istream& in) {
    std::vector<double> values;
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
        std::string_view v(line);
        const auto first = v.find_first_not_of(" \t\r\v\f");
        if (first == std::string_view::npos) continue;
        v.remove_prefix(first);
        if (v.front() == '#') continue;
        v.remove_suffix(v.size() - (v.find_last_not_of(" \t\r\v\f") + 1));
        if (!v.empty() && v.front() == '+') v.remove_prefix(1);

        double x = 0.0;
        const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
        if (ec != std::errc{} || end != v.data() + v.size()) {
            throw invalid_input("line " + std::to_string(lineno) + ": not a number: '" +
                                std::string(v) + "'");
        }
        values.push_back(x);
    }
    return values;
}

inline std::vector<double> read_angle_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_input("cannot open angle file: " + path);
    return parse_angles(in);
}

}  // namespace rao
