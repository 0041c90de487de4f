// CSV emission and re-reading for trajectories, Lyapunov series and PRCC
// tables. Reals are written with 17 significant digits so a round trip is
// exact.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "vdyn/diagnostics.hpp"
#include "vdyn/sensitivity.hpp"
#include "vdyn/solver.hpp"

namespace vdyn {

std::string format_real(double value);

struct TrajectoryRow {
    double time = 0.0;
    double x = 0.0;
    double S = 0.0;
    double I = 0.0;
    double V = 0.0;
};

/// Long format, header `time,x,S,I,V`, one row per (snapshot, node).
void write_trajectory_csv(const std::filesystem::path& path, const Grid1D& grid,
                          const std::vector<FieldState>& snapshots);
std::vector<TrajectoryRow> read_trajectory_csv(const std::filesystem::path& path);

struct LyapunovRow {
    std::size_t step = 0;
    double time = 0.0;
    double value = 0.0;
    std::string kind;
};

/// Header `step,time,value,kind`.
void write_lyapunov_csv(const std::filesystem::path& path, const LyapunovSeries& series);
std::vector<LyapunovRow> read_lyapunov_csv(const std::filesystem::path& path);

/// Header `parameter,prcc,abs_prcc,significant`.
void write_tornado_csv(const std::filesystem::path& path, const std::vector<TornadoRow>& rows);
std::vector<TornadoRow> read_tornado_csv(const std::filesystem::path& path);

}  // namespace vdyn
