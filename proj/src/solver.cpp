#include "vdyn/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "vdyn/errors.hpp"

namespace vdyn {

Grid1D::Grid1D(double a_, double b_, std::size_t M_) : a(a_), b(b_), M(M_) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(b > a)) {
        throw ValidationError("b", "domain requires finite a < b");
    }
    if (M < 2) throw ValidationError("M", "need at least 2 subintervals");
    dx = (b - a) / static_cast<double>(M);
}

FieldState FieldState::uniform(std::size_t nodes, double S, double I, double V, double t) {
    FieldState s;
    s.t = t;
    s.S.assign(nodes, S);
    s.I.assign(nodes, I);
    s.V.assign(nodes, V);
    return s;
}

FieldState FieldState::at_equilibrium(std::size_t nodes, const Equilibrium& e, double t) {
    return uniform(nodes, e.S, e.I, e.V, t);
}

namespace {

template <class Pred>
bool all_entries(const FieldState& s, Pred pred) {
    auto ok = [&](const std::vector<double>& v) { return std::all_of(v.begin(), v.end(), pred); };
    return ok(s.S) && ok(s.I) && ok(s.V);
}

void require_dt_dx(double dt, double dx) {
    if (!std::isfinite(dt) || dt <= 0.0) throw ValidationError("dt", "must be finite and > 0");
    if (!std::isfinite(dx) || dx <= 0.0) throw ValidationError("dx", "must be finite and > 0");
}

void require_state(const FieldState& s) {
    const std::size_t n = s.S.size();
    if (n < 3 || s.I.size() != n || s.V.size() != n) {
        throw ValidationError("state", "S, I, V must share a length of at least 3 nodes");
    }
    if (!s.all_finite() || !s.all_nonnegative()) {
        throw ValidationError("state", "entries must be finite and nonnegative");
    }
}

/// Diffusion-only tridiagonal matrix with Neumann ghost rows plus `decay` on
/// the diagonal (already multiplied by dt).
TridiagonalSystem diffusion_system(double D, double decay_dt, double dt, double dx,
                                   std::size_t nodes) {
    const double r = D * dt / (dx * dx);
    TridiagonalSystem sys(nodes);
    for (std::size_t n = 0; n < nodes; ++n) {
        const bool boundary = n == 0 || n + 1 == nodes;
        sys.diag[n] = 1.0 + (boundary ? r : 2.0 * r) + decay_dt;
        if (n > 0) sys.sub[n] = -r;
        if (n + 1 < nodes) sys.super[n] = -r;
    }
    return sys;
}

double laplacian(const std::vector<double>& u, std::size_t n, double inv_dx2) {
    const std::size_t last = u.size() - 1;
    const double left = n == 0 ? u[0] : u[n - 1];
    const double right = n == last ? u[last] : u[n + 1];
    return (left - 2.0 * u[n] + right) * inv_dx2;
}

}  // namespace

bool FieldState::all_finite() const {
    return all_entries(*this, [](double v) { return std::isfinite(v); });
}

bool FieldState::all_positive() const {
    return all_entries(*this, [](double v) { return v > 0.0; });
}

bool FieldState::all_nonnegative() const {
    return all_entries(*this, [](double v) { return v >= 0.0; });
}

std::string_view to_string(Scheme scheme) {
    return scheme == Scheme::NSFD ? "nsfd" : "sfd";
}

Scheme scheme_from_string(std::string_view name) {
    if (name == "nsfd" || name == "NSFD") return Scheme::NSFD;
    if (name == "sfd" || name == "ExplicitSFD" || name == "explicit-sfd") return Scheme::ExplicitSFD;
    throw ValidationError("scheme", "expected 'nsfd' or 'sfd', got '" + std::string(name) + "'");
}

void StepParams::validate() const {
    if (!std::isfinite(dt) || dt <= 0.0) throw ValidationError("dt", "must be finite and > 0");
}

TridiagonalSystem assemble_S_system(const FieldState& state, const ModelParams& params,
                                    const IncidenceFunctions& inc, double dt, double dx) {
    require_dt_dx(dt, dx);
    const std::size_t nodes = state.nodes();
    TridiagonalSystem sys = diffusion_system(params.D1, 0.0, dt, dx, nodes);
    for (std::size_t n = 0; n < nodes; ++n) {
        sys.diag[n] += dt * (inc.f(state.V[n]) + inc.g(state.I[n]) + params.d_S);
        sys.rhs[n] = state.S[n] + params.Lambda * dt;
    }
    sys.require_strict_dominance();
    return sys;
}

TridiagonalSystem assemble_I_system(const ModelParams& params, double dt, double dx,
                                    std::size_t nodes) {
    require_dt_dx(dt, dx);
    TridiagonalSystem sys = diffusion_system(params.D2, dt * params.infected_loss(), dt, dx, nodes);
    sys.require_strict_dominance();
    return sys;
}

TridiagonalSystem assemble_V_system(const ModelParams& params, double dt, double dx,
                                    std::size_t nodes) {
    require_dt_dx(dt, dx);
    TridiagonalSystem sys = diffusion_system(params.D3, dt * params.d_V, dt, dx, nodes);
    sys.require_strict_dominance();
    return sys;
}

void fill_I_rhs(TridiagonalSystem& sys, const FieldState& old_state,
                const std::vector<double>& S_new, const IncidenceFunctions& inc, double dt) {
    for (std::size_t n = 0; n < sys.size(); ++n) {
        const double force = inc.f(old_state.V[n]) + inc.g(old_state.I[n]);
        sys.rhs[n] = old_state.I[n] + dt * S_new[n] * force;
    }
}

void fill_V_rhs(TridiagonalSystem& sys, const FieldState& old_state,
                const std::vector<double>& I_new, const ModelParams& params, double dt) {
    for (std::size_t n = 0; n < sys.size(); ++n) {
        sys.rhs[n] = old_state.V[n] + params.alpha * dt * I_new[n];
    }
}

NsfdStepper::NsfdStepper(ModelParams params, IncidenceFunctions inc, double dt, double dx,
                         std::size_t nodes)
    : params_(params),
      inc_(std::move(inc)),
      dt_(dt),
      dx_(dx),
      b_sys_((params_.validate(), assemble_I_system(params_, dt, dx, nodes))),
      c_sys_(assemble_V_system(params_, dt, dx, nodes)) {}

FieldState NsfdStepper::step(const FieldState& state) {
    require_state(state);
    if (state.nodes() != b_sys_.size()) {
        throw ValidationError("state", "node count does not match the stepper grid");
    }
    FieldState next;
    next.t = state.t + dt_;
    const std::size_t nodes = state.nodes();
    next.S.resize(nodes);
    next.I.resize(nodes);
    next.V.resize(nodes);

    const TridiagonalSystem a_sys = assemble_S_system(state, params_, inc_, dt_, dx_);
    solve_tridiagonal_into(a_sys, next.S, scratch_);

    fill_I_rhs(b_sys_, state, next.S, inc_, dt_);
    solve_tridiagonal_into(b_sys_, next.I, scratch_);

    fill_V_rhs(c_sys_, state, next.I, params_, dt_);
    solve_tridiagonal_into(c_sys_, next.V, scratch_);
    return next;
}

FieldState nsfd_step(const FieldState& state, const ModelParams& params,
                     const IncidenceFunctions& inc, double dt, double dx) {
    NsfdStepper stepper(params, inc, dt, dx, state.nodes());
    return stepper.step(state);
}

FieldState sfd_explicit_step(const FieldState& state, const ModelParams& params,
                             const IncidenceFunctions& inc, double dt, double dx) {
    require_dt_dx(dt, dx);
    const std::size_t nodes = state.nodes();
    const double inv_dx2 = 1.0 / (dx * dx);
    FieldState next;
    next.t = state.t + dt;
    next.S.resize(nodes);
    next.I.resize(nodes);
    next.V.resize(nodes);
    for (std::size_t n = 0; n < nodes; ++n) {
        const double S = state.S[n];
        const double I = state.I[n];
        const double V = state.V[n];
        const double infection = S * (inc.f(V) + inc.g(I));
        next.S[n] = S + dt * (params.D1 * laplacian(state.S, n, inv_dx2) + params.Lambda -
                              infection - params.d_S * S);
        next.I[n] = I + dt * (params.D2 * laplacian(state.I, n, inv_dx2) + infection -
                              params.infected_loss() * I);
        next.V[n] = V + dt * (params.D3 * laplacian(state.V, n, inv_dx2) + params.alpha * I -
                              params.d_V * V);
    }
    if (!next.all_finite()) {
        std::ostringstream msg;
        msg << "explicit step to t = " << next.t << " produced a non-finite entry";
        throw NonFiniteState(msg.str());
    }
    return next;
}

double steady_state_residual(const FieldState& previous, const FieldState& next, double dt) {
    double worst = 0.0;
    auto scan = [&](const std::vector<double>& old_v, const std::vector<double>& new_v) {
        for (std::size_t n = 0; n < old_v.size(); ++n) {
            worst = std::max(worst, std::abs(new_v[n] - old_v[n]) / (dt * (1.0 + std::abs(old_v[n]))));
        }
    };
    scan(previous.S, next.S);
    scan(previous.I, next.I);
    scan(previous.V, next.V);
    return worst;
}

double relative_distance(const FieldState& state, const Equilibrium& e) {
    const double scale = std::max({std::abs(e.S), std::abs(e.I), std::abs(e.V)});
    double worst = 0.0;
    auto scan = [&](const std::vector<double>& v, double target) {
        for (double x : v) worst = std::max(worst, std::abs(x - target));
    };
    scan(state.S, e.S);
    scan(state.I, e.I);
    scan(state.V, e.V);
    return scale == 0.0 ? worst : worst / scale;
}

std::string_view to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::DiseaseFree: return "DiseaseFree";
        case Verdict::Endemic: return "Endemic";
        case Verdict::NotConverged: return "NotConverged";
    }
    return "NotConverged";
}

SimulationResult simulate(const FieldState& initial, const Grid1D& grid, const ModelParams& params,
                          const IncidenceFunctions& inc, const StepParams& step, double horizon,
                          double snapshot_every, const SimulationOptions& options) {
    params.validate();
    step.validate();
    if (!std::isfinite(horizon) || horizon < step.dt) {
        throw ValidationError("horizon", "must be finite and >= dt");
    }
    if (!std::isfinite(snapshot_every) || snapshot_every <= 0.0) {
        throw ValidationError("snapshot_every", "must be finite and > 0");
    }
    if (initial.nodes() != grid.nodes()) {
        throw ValidationError("state", "initial data do not match the grid");
    }
    require_state(initial);

    const Equilibrium e0 = disease_free_equilibrium(params);
    const std::optional<Equilibrium> e_star = endemic_equilibrium(params, inc);

    std::optional<NsfdStepper> stepper;
    if (step.scheme == Scheme::NSFD) stepper.emplace(params, inc, step.dt, grid.dx, grid.nodes());

    SimulationResult result;
    ConvergenceReport& report = result.report;
    result.snapshots.push_back(initial);

    const auto total_steps =
        static_cast<std::size_t>(std::ceil(horizon / step.dt - 1e-9));
    const double snap_eps = 1e-9 * step.dt;
    double next_snapshot = initial.t + snapshot_every;

    FieldState current = initial;
    for (std::size_t k = 1; k <= total_steps; ++k) {
        FieldState next;
        try {
            next = stepper ? stepper->step(current)
                           : sfd_explicit_step(current, params, inc, step.dt, grid.dx);
        } catch (const NonFiniteState& err) {
            report.failure = err.what();
            break;
        }
        next.t = initial.t + static_cast<double>(k) * step.dt;
        if (!report.first_nonpositive_step && !next.all_positive()) {
            report.first_nonpositive_step = k;
        }
        report.final_residual = steady_state_residual(current, next, step.dt);
        current = std::move(next);
        report.steps = k;
        if (options.on_step) options.on_step(current, k);

        const bool steady =
            options.stop_at_steady_state && report.final_residual < options.steady_tol;
        if (current.t >= next_snapshot - snap_eps) {
            result.snapshots.push_back(current);
            while (next_snapshot <= current.t + snap_eps) next_snapshot += snapshot_every;
        } else if (steady || k == total_steps) {
            result.snapshots.push_back(current);
        }
        if (steady) {
            report.converged = true;
            break;
        }
    }

    // Stepping to the horizon without a failure and ending with a positive,
    // slowly varying state also counts as convergence when early stopping is
    // disabled.
    if (!options.stop_at_steady_state && report.failure.empty() &&
        report.final_residual < options.steady_tol) {
        report.converged = true;
    }

    report.final_time = current.t;
    report.nearest = EquilibriumKind::DiseaseFree;
    report.distance = relative_distance(current, e0);
    if (e_star) {
        const double d_star = relative_distance(current, *e_star);
        if (d_star < report.distance) {
            report.distance = d_star;
            report.nearest = EquilibriumKind::Endemic;
        }
    }
    if (report.converged && report.failure.empty()) {
        report.verdict = report.nearest == EquilibriumKind::DiseaseFree ? Verdict::DiseaseFree
                                                                        : Verdict::Endemic;
    }
    result.final_state = std::move(current);
    return result;
}

}  // namespace vdyn
