#pragma once

#include <cstdlib>
#include <string>
#include <vector>

#include "gheat/semilinear.hpp"

namespace gheat {

/// Trajectory table: time, one column per vertex, mass, reaction.
inline std::string trajectory_to_csv(const Trajectory& traj) {
    require(!traj.times.empty(), errc::invalid_parameter, "empty trajectory");
    const Eigen::Index n = traj.states.front().size();
    std::string out = "time";
    for (Eigen::Index x = 0; x < n; ++x) out += ",v" + std::to_string(x);
    out += ",mass,reaction\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        out += format_double(traj.times[i]);
        for (Eigen::Index x = 0; x < n; ++x) out += "," + format_double(traj.states[i][x]);
        out += "," + format_double(traj.mass_series[i]);
        out += "," + format_double(traj.reaction_series[i]);
        out += "\n";
    }
    return out;
}

/// Sweep table matching the sweep command's report columns.
inline std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::string out = "m_fit,alpha,m_alpha,scale,verdict,measure\n";
    for (const SweepRow& r : rows) {
        out += format_double(r.m_fit) + "," + format_double(r.alpha) + "," +
               format_double(r.m_alpha) + "," + format_double(r.scale) + "," +
               std::string(to_string(r.verdict)) + "," + format_double(r.measure) + "\n";
    }
    return out;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Minimal reader for the tables this toolkit writes: comma-separated,
/// first line is the header, no quoting.
inline CsvTable parse_csv(const std::string& text, const std::string& origin = "<csv>") {
    CsvTable table;
    std::size_t pos = 0;
    bool first = true;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        std::string line = text.substr(pos, end - pos);
        pos = end + 1;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::size_t cell_start = 0;
        while (true) {
            const std::size_t comma = line.find(',', cell_start);
            cells.push_back(line.substr(cell_start, comma - cell_start));
            if (comma == std::string::npos) break;
            cell_start = comma + 1;
        }
        if (first) {
            table.header = std::move(cells);
            first = false;
        } else {
            if (cells.size() != table.header.size())
                fail(errc::malformed_input,
                     origin + ": row has " + std::to_string(cells.size()) + " cells, header has " +
                         std::to_string(table.header.size()));
            table.rows.push_back(std::move(cells));
        }
    }
    require(!table.header.empty(), errc::malformed_input, origin + ": missing header line");
    return table;
}

inline double csv_number(const std::string& cell, const std::string& origin) {
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    require(end == cell.c_str() + cell.size() && !cell.empty(), errc::malformed_input,
            origin + ": expected a number, got '" + cell + "'");
    return v;
}

}  // namespace gheat
