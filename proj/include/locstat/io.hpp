#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "locstat/common.hpp"
#include "locstat/time_series.hpp"

namespace locstat {

namespace detail {

inline bool parse_double(const std::string& s, double& out) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end > begin && (end[-1] == ' ' || end[-1] == '\t' || end[-1] == '\r')) --end;
    if (begin == end) return false;
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

} // namespace detail

/// Reads a series from CSV: one numeric column, optional header, optional
/// leading time column (detected by a non-numeric first cell or a two-column
/// shape). Rejects malformed or non-finite rows with the line number.
inline TimeSeries read_series_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open input file: " + path);
    std::vector<double> values;
    std::string line;
    int line_no = 0;
    bool first_data_line = true;
    bool two_columns = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields = detail::split_csv_line(line);
        if (first_data_line) {
            // header if no field parses as a number
            bool any_numeric = false;
            double tmp;
            for (const auto& f : fields)
                if (detail::parse_double(f, tmp)) any_numeric = true;
            if (!any_numeric) continue; // header row
            two_columns = fields.size() >= 2;
            first_data_line = false;
        }
        double v;
        const std::string& cell = two_columns ? fields.back() : fields.front();
        if ((two_columns && fields.size() < 2) || !detail::parse_double(cell, v))
            throw config_error("malformed CSV at line " + std::to_string(line_no) +
                               " of " + path);
        if (!std::isfinite(v))
            throw config_error("non-finite value at line " + std::to_string(line_no) +
                               " of " + path);
        values.push_back(v);
    }
    if (values.empty()) throw config_error("no data rows in " + path);
    return TimeSeries(values);
}

inline std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

inline void write_series_csv(const std::string& path, const TimeSeries& ts) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot open output file: " + path);
    out << "x\n";
    for (int i = 0; i < ts.n(); ++i) out << format_double(ts.values(i)) << "\n";
}

} // namespace locstat
