#include "vdyn/csv.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "vdyn/errors.hpp"

namespace vdyn {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double to_real(const std::string& s, std::size_t line) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ParseError(line, "bad number '" + s + "'");
    }
    return v;
}

/// Yields the data rows after checking the header.
std::vector<std::vector<std::string>> read_rows(const std::filesystem::path& path,
                                                const std::string& header, std::size_t width) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != header) {
        throw ParseError(1, path.string() + ": expected header '" + header + "'");
    }
    std::vector<std::vector<std::string>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto cells = split(line);
        if (cells.size() != width) throw ParseError(line_no, "expected " + std::to_string(width) + " columns");
        rows.push_back(std::move(cells));
    }
    return rows;
}

}  // namespace

std::string format_real(double value) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] =
        std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 17);
    return std::string(buf.data(), ptr);
}

void write_trajectory_csv(const std::filesystem::path& path, const Grid1D& grid,
                          const std::vector<FieldState>& snapshots) {
    auto out = open_for_write(path);
    out << "time,x,S,I,V\n";
    for (const auto& s : snapshots) {
        const std::string t = format_real(s.t);
        for (std::size_t n = 0; n < s.nodes(); ++n) {
            out << t << ',' << format_real(grid.x(n)) << ',' << format_real(s.S[n]) << ','
                << format_real(s.I[n]) << ',' << format_real(s.V[n]) << '\n';
        }
    }
}

std::vector<TrajectoryRow> read_trajectory_csv(const std::filesystem::path& path) {
    std::vector<TrajectoryRow> rows;
    std::size_t line = 1;
    for (const auto& c : read_rows(path, "time,x,S,I,V", 5)) {
        ++line;
        rows.push_back({to_real(c[0], line), to_real(c[1], line), to_real(c[2], line),
                        to_real(c[3], line), to_real(c[4], line)});
    }
    return rows;
}

void write_lyapunov_csv(const std::filesystem::path& path, const LyapunovSeries& series) {
    auto out = open_for_write(path);
    out << "step,time,value,kind\n";
    const std::string kind(to_string(series.kind));
    for (std::size_t k = 0; k < series.values.size(); ++k) {
        out << k << ',' << format_real(series.times[k]) << ',' << format_real(series.values[k]) << ','
            << kind << '\n';
    }
}

std::vector<LyapunovRow> read_lyapunov_csv(const std::filesystem::path& path) {
    std::vector<LyapunovRow> rows;
    std::size_t line = 1;
    for (const auto& c : read_rows(path, "step,time,value,kind", 4)) {
        ++line;
        rows.push_back({static_cast<std::size_t>(to_real(c[0], line)), to_real(c[1], line),
                        to_real(c[2], line), c[3]});
    }
    return rows;
}

void write_tornado_csv(const std::filesystem::path& path, const std::vector<TornadoRow>& rows) {
    auto out = open_for_write(path);
    out << "parameter,prcc,abs_prcc,significant\n";
    for (const auto& r : rows) {
        out << r.parameter << ',' << format_real(r.prcc) << ',' << format_real(r.abs_prcc) << ','
            << (r.significant ? 1 : 0) << '\n';
    }
}

std::vector<TornadoRow> read_tornado_csv(const std::filesystem::path& path) {
    std::vector<TornadoRow> rows;
    std::size_t line = 1;
    for (const auto& c : read_rows(path, "parameter,prcc,abs_prcc,significant", 4)) {
        ++line;
        rows.push_back({c[0], to_real(c[1], line), to_real(c[2], line), c[3] == "1"});
    }
    return rows;
}

}  // namespace vdyn
