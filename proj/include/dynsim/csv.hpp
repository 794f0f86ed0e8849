#pragma once
// Trajectory CSV: header "t,<labels...>", one row per sample, 17 significant
// digits, '.' decimal separator and '\n' line endings regardless of locale.

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "dynsim/named_trajectory.hpp"

namespace dynsim {

/// Shortest form that still carries 17 significant digits ("%.17g").
inline std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

inline void write_csv(const NamedTrajectory& traj, std::ostream& out) {
    std::string line = "t";
    for (const auto& l : traj.labels) {
        line += ',';
        line += l;
    }
    line += '\n';
    out << line;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        line = format_double(traj.times[k]);
        for (double v : traj.states[k]) {
            line += ',';
            line += format_double(v);
        }
        line += '\n';
        out << line;
    }
    out.flush();
    if (!out) throw std::system_error(std::make_error_code(std::errc::io_error), "write_csv");
}

/// Parsed CSV table (header plus numeric rows).
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

inline CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    const auto split = [](std::string_view s) {
        std::vector<std::string_view> cells;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = s.find(',', start);
            cells.push_back(s.substr(start, comma - start));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        return cells;
    };
    if (!std::getline(in, line)) throw std::runtime_error("read_csv: empty input");
    for (auto cell : split(line)) table.header.emplace_back(cell);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        std::vector<double> row;
        for (auto cell : split(line)) {
            double v = 0.0;
            const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size())
                throw std::runtime_error("read_csv: bad number on line " + std::to_string(lineno));
            row.push_back(v);
        }
        if (row.size() != table.header.size())
            throw std::runtime_error("read_csv: wrong column count on line " +
                                     std::to_string(lineno));
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace dynsim
