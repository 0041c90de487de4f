// Reproducible experiments driven by a RunConfig. The `*_outcome` functions
// compute without touching the filesystem; the `run_*` functions write their
// artifacts into an output directory and return a process exit code.
#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "vdyn/config.hpp"
#include "vdyn/diagnostics.hpp"
#include "vdyn/model.hpp"
#include "vdyn/sensitivity.hpp"
#include "vdyn/solver.hpp"

namespace vdyn {

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitNumerical = 2 };

struct SimulateOutcome {
    R0Breakdown r0;
    Equilibrium e0;
    std::optional<Equilibrium> e_star;
    SimulationResult sim;
    /// L^k when R0 <= 1, H^k otherwise; recorded at every step while defined.
    LyapunovSeries lyapunov;
    std::string lyapunov_note;
    MonotoneReport monotone;
};

/// Slack used when checking Lyapunov descent.
inline constexpr double kLyapunovSlack = 1e-9;

SimulateOutcome simulate_outcome(const RunConfig& config);

/// Writes trajectory.csv, lyapunov.csv, summary.txt and S.svg/I.svg/V.svg.
int run_simulate(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& log);

std::string summary_text(const RunConfig& config, const SimulateOutcome& outcome);

int run_r0(const RunConfig& config, std::ostream& out);
int run_equilibria(const RunConfig& config, std::ostream& out);

/// Writes tornado.csv and tornado.svg.
int run_sensitivity(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& log);

/// Node-wise gap between two final states. Each field is compared relative to
/// its own sup-norm, floored at 1e-6 of the stacked sup-norm so that fields
/// decaying to zero do not divide by round-off.
double final_state_discrepancy(const FieldState& lhs, const FieldState& rhs);

struct DiffusionComparison {
    double d_low = 0.0;
    double d_high = 0.0;
    SimulationResult low;
    SimulationResult high;
    double discrepancy = 0.0;
};

/// Runs the configuration with D1 = D2 = D3 = d_low and = d_high (concurrently).
DiffusionComparison compare_diffusion_outcome(const RunConfig& config, double d_low, double d_high);

int run_compare_diffusion(const RunConfig& config, double d_low, double d_high,
                          const std::filesystem::path& out_dir, std::ostream& log);

struct SchemeComparison {
    SimulationResult nsfd;
    SimulationResult sfd;
};

/// Same configuration under both schemes (concurrently).
SchemeComparison compare_sfd_outcome(const RunConfig& config);

int run_compare_sfd(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& log);

}  // namespace vdyn
