#include "vdyn/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <sstream>

#include "vdyn/csv.hpp"
#include "vdyn/errors.hpp"
#include "vdyn/svg.hpp"

namespace vdyn {

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
}

std::string describe(const Equilibrium& e) {
    std::ostringstream s;
    s << "S = " << format_real(e.S) << ", I = " << format_real(e.I) << ", V = " << format_real(e.V);
    return s.str();
}

SimulationResult run_config(const RunConfig& config) {
    const Grid1D grid = config.grid();
    SimulationOptions options;
    options.steady_tol = config.steady_tol;
    return simulate(config.initial.sample(grid), grid, config.params, config.incidence(),
                    config.step(), config.horizon, config.snapshot_every, options);
}

void write_field_plots(const std::filesystem::path& out_dir, const Grid1D& grid,
                       const FieldState& state) {
    std::vector<double> xs(grid.nodes());
    for (std::size_t n = 0; n < grid.nodes(); ++n) xs[n] = grid.x(n);
    const std::pair<const char*, const std::vector<double>*> fields[] = {
        {"S", &state.S}, {"I", &state.I}, {"V", &state.V}};
    for (const auto& [name, values] : fields) {
        std::ostringstream title;
        title << name << "(x) at t = " << state.t << " days";
        const std::string svg =
            line_chart_svg(title.str(), "x (mm)", name, {{name, xs, *values}});
        write_text(out_dir / (std::string(name) + ".svg"), svg);
    }
}

}  // namespace

SimulateOutcome simulate_outcome(const RunConfig& config) {
    config.validate();
    SimulateOutcome outcome;
    const IncidenceFunctions inc = config.incidence();
    outcome.r0 = compute_r0(config.params, inc);
    outcome.e0 = disease_free_equilibrium(config.params);
    outcome.e_star = endemic_equilibrium(config.params, inc);

    const Grid1D grid = config.grid();
    const FieldState initial = config.initial.sample(grid);
    const bool endemic = outcome.r0.total > 1.0;
    LyapunovSeries& series = outcome.lyapunov;
    series.kind = endemic ? EquilibriumKind::Endemic : EquilibriumKind::DiseaseFree;

    auto functional = [&](const FieldState& s) {
        return endemic ? lyapunov_endemic(s, config.params, inc, *outcome.e_star, config.dt)
                       : lyapunov_disease_free(s, config.params, inc, config.dt);
    };
    bool recording = true;
    auto record = [&](const FieldState& s) {
        if (!recording) return;
        try {
            series.push(s.t, functional(s));
        } catch (const NumericalError& err) {
            recording = false;
            outcome.lyapunov_note = std::string("functional undefined at t = ") +
                                    format_real(s.t) + ": " + err.what();
        }
    };
    record(initial);

    SimulationOptions options;
    options.steady_tol = config.steady_tol;
    options.on_step = [&](const FieldState& s, std::size_t) { record(s); };
    outcome.sim = simulate(initial, grid, config.params, inc, config.step(), config.horizon,
                           config.snapshot_every, options);
    outcome.monotone = check_monotone(series, kLyapunovSlack);
    return outcome;
}

std::string summary_text(const RunConfig& config, const SimulateOutcome& o) {
    const ConvergenceReport& r = o.sim.report;
    std::ostringstream s;
    s << "scheme: " << to_string(config.scheme) << '\n';
    s << "grid: [" << format_real(config.a) << ", " << format_real(config.b) << "], M = " << config.M
      << ", dx = " << format_real(config.grid().dx) << ", dt = " << format_real(config.dt) << '\n';
    s << "R0: " << format_real(o.r0.total) << " (R01 = " << format_real(o.r0.r01)
      << ", R02 = " << format_real(o.r0.r02) << ")\n";
    s << "E0: " << describe(o.e0) << '\n';
    s << "E*: " << (o.e_star ? describe(*o.e_star) : std::string("absent (R0 <= 1)")) << '\n';
    s << "steps: " << r.steps << '\n';
    s << "final_time: " << format_real(r.final_time) << '\n';
    s << "final_residual: " << format_real(r.final_residual) << '\n';
    s << "converged-to: " << to_string(r.verdict) << '\n';
    s << "distance: " << format_real(r.distance) << " (relative sup-norm to "
      << (r.nearest == EquilibriumKind::DiseaseFree ? "E0" : "E*") << ")\n";
    if (r.first_nonpositive_step) {
        s << "positivity: violated, first nonpositive entry at step " << *r.first_nonpositive_step
          << '\n';
    } else {
        s << "positivity: preserved\n";
    }
    s << "lyapunov: " << (o.lyapunov.kind == EquilibriumKind::Endemic ? "H" : "L") << ", "
      << o.lyapunov.values.size() << " values, "
      << (o.monotone.pass ? "nonincreasing" : "increase detected");
    if (!o.monotone.pass) {
        s << " (" << o.monotone.violations.size() << " violations, worst relative rise "
          << format_real(o.monotone.worst_violation) << " at step " << o.monotone.worst_index << ")";
    }
    s << '\n';
    if (!o.lyapunov_note.empty()) s << "lyapunov_note: " << o.lyapunov_note << '\n';
    if (!r.failure.empty()) s << "failure: " << r.failure << '\n';
    return s.str();
}

int run_simulate(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& log) {
    config.validate();
    std::filesystem::create_directories(out_dir);
    SimulateOutcome outcome;
    try {
        outcome = simulate_outcome(config);
    } catch (const NumericalError& err) {
        write_text(out_dir / "summary.txt", std::string("converged-to: NotConverged\nfailure: ") +
                                                err.what() + '\n');
        log << "simulate failed: " << err.what() << '\n';
        return kExitNumerical;
    }
    const Grid1D grid = config.grid();
    write_trajectory_csv(out_dir / "trajectory.csv", grid, outcome.sim.snapshots);
    write_lyapunov_csv(out_dir / "lyapunov.csv", outcome.lyapunov);
    const std::string summary = summary_text(config, outcome);
    write_text(out_dir / "summary.txt", summary);
    write_field_plots(out_dir, grid, outcome.sim.final_state);
    log << summary;
    return outcome.sim.report.failure.empty() ? kExitOk : kExitNumerical;
}

int run_r0(const RunConfig& config, std::ostream& out) {
    config.validate();
    const R0Breakdown r = compute_r0(config.params, config.incidence());
    out << "R01 = " << format_real(r.r01) << '\n'
        << "R02 = " << format_real(r.r02) << '\n'
        << "R0 = " << format_real(r.total) << '\n';
    return kExitOk;
}

int run_equilibria(const RunConfig& config, std::ostream& out) {
    config.validate();
    const IncidenceFunctions inc = config.incidence();
    const Equilibrium e0 = disease_free_equilibrium(config.params);
    out << "E0: " << describe(e0) << '\n';
    if (const auto e_star = endemic_equilibrium(config.params, inc)) {
        const auto res = residuals(*e_star, config.params, inc);
        out << "E*: " << describe(*e_star) << '\n'
            << "E* residuals: " << format_real(res[0]) << ", " << format_real(res[1]) << ", "
            << format_real(res[2]) << '\n';
    } else {
        out << "E*: absent (R0 <= 1)\n";
    }
    return kExitOk;
}

int run_sensitivity(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& log) {
    config.validate();
    std::filesystem::create_directories(out_dir);
    const R0Study study =
        r0_sensitivity_study(config.sensitivity_spec(), config.params, config.incidence());
    write_tornado_csv(out_dir / "tornado.csv", study.table);
    write_text(out_dir / "tornado.svg",
               tornado_svg("PRCC of R0 (n = " + std::to_string(config.sensitivity.n_samples) + ")",
                           study.table, study.prcc.significance));
    for (const auto& row : study.table) {
        log << row.parameter << ' ' << format_real(row.prcc) << (row.significant ? " *" : "") << '\n';
    }
    return kExitOk;
}

double final_state_discrepancy(const FieldState& lhs, const FieldState& rhs) {
    auto sup = [](const std::vector<double>& a, const std::vector<double>& b) {
        double m = 0.0;
        for (double v : a) m = std::max(m, std::abs(v));
        for (double v : b) m = std::max(m, std::abs(v));
        return m;
    };
    const double sup_s = sup(lhs.S, rhs.S);
    const double sup_i = sup(lhs.I, rhs.I);
    const double sup_v = sup(lhs.V, rhs.V);
    const double floor = 1e-6 * std::max({sup_s, sup_i, sup_v});
    double worst = 0.0;
    auto scan = [&](const std::vector<double>& a, const std::vector<double>& b, double field_sup) {
        const double scale = std::max(field_sup, floor);
        if (scale == 0.0) return;
        for (std::size_t n = 0; n < a.size(); ++n) {
            worst = std::max(worst, std::abs(a[n] - b[n]) / scale);
        }
    };
    scan(lhs.S, rhs.S, sup_s);
    scan(lhs.I, rhs.I, sup_i);
    scan(lhs.V, rhs.V, sup_v);
    return worst;
}

DiffusionComparison compare_diffusion_outcome(const RunConfig& config, double d_low,
                                              double d_high) {
    config.validate();
    auto with_d = [&](double d) {
        if (!std::isfinite(d) || d < 0.0) throw ValidationError("D", "must be finite and >= 0");
        RunConfig c = config;
        c.params.D1 = c.params.D2 = c.params.D3 = d;
        return c;
    };
    const RunConfig low_cfg = with_d(d_low);
    const RunConfig high_cfg = with_d(d_high);
    DiffusionComparison cmp;
    cmp.d_low = d_low;
    cmp.d_high = d_high;
    auto high = std::async(std::launch::async, [&] { return run_config(high_cfg); });
    cmp.low = run_config(low_cfg);
    cmp.high = high.get();
    cmp.discrepancy = final_state_discrepancy(cmp.low.final_state, cmp.high.final_state);
    return cmp;
}

int run_compare_diffusion(const RunConfig& config, double d_low, double d_high,
                          const std::filesystem::path& out_dir, std::ostream& log) {
    std::filesystem::create_directories(out_dir);
    const DiffusionComparison cmp = compare_diffusion_outcome(config, d_low, d_high);
    std::ostringstream s;
    for (const auto* run : {&cmp.low, &cmp.high}) {
        const double d = run == &cmp.low ? cmp.d_low : cmp.d_high;
        const auto& r = run->report;
        s << "D = " << format_real(d) << ": converged-to " << to_string(r.verdict) << " after "
          << r.steps << " steps (t = " << format_real(r.final_time) << "), distance "
          << format_real(r.distance) << '\n';
    }
    s << "discrepancy: " << format_real(cmp.discrepancy) << '\n';
    write_text(out_dir / "compare_diffusion.txt", s.str());
    log << s.str();
    return kExitOk;
}

SchemeComparison compare_sfd_outcome(const RunConfig& config) {
    config.validate();
    RunConfig nsfd_cfg = config;
    nsfd_cfg.scheme = Scheme::NSFD;
    RunConfig sfd_cfg = config;
    sfd_cfg.scheme = Scheme::ExplicitSFD;
    SchemeComparison cmp;
    auto sfd = std::async(std::launch::async, [&] { return run_config(sfd_cfg); });
    cmp.nsfd = run_config(nsfd_cfg);
    cmp.sfd = sfd.get();
    return cmp;
}

int run_compare_sfd(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& log) {
    std::filesystem::create_directories(out_dir);
    const SchemeComparison cmp = compare_sfd_outcome(config);
    std::ostringstream s;
    auto line = [&](const char* name, const SimulationResult& run) {
        const auto& r = run.report;
        s << name << ": " << r.steps << " steps, ";
        if (r.first_nonpositive_step) {
            s << "first nonpositive entry at step " << *r.first_nonpositive_step;
        } else {
            s << "all entries positive";
        }
        if (!r.failure.empty()) s << ", aborted: " << r.failure;
        s << ", converged-to " << to_string(r.verdict) << '\n';
    };
    line("nsfd", cmp.nsfd);
    line("sfd", cmp.sfd);
    write_text(out_dir / "compare_sfd.txt", s.str());
    log << s.str();
    return kExitOk;
}

}  // namespace vdyn
