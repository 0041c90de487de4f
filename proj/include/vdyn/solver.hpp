// Nonstandard finite difference time stepping of the diffusive infection
// model on a uniform 1-D grid with homogeneous Neumann boundaries, plus an
// explicit standard scheme kept as a baseline.
//
// Each NSFD step solves three linear tridiagonal systems in sequence:
//
//   A^k S^{k+1} = S^k + Lambda dt
//   B   I^{k+1} = I^k + dt S^{k+1} (f(V^k) + g(I^k))
//   C   V^{k+1} = V^k + alpha dt I^{k+1}
//
// A^k, B and C are strictly diagonally dominant with positive diagonal and
// nonpositive off-diagonals, so nonnegative data stay nonnegative for any
// dt, dx > 0. Only A^k depends on the state.
#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vdyn/model.hpp"
#include "vdyn/tridiagonal.hpp"

namespace vdyn {

struct Grid1D {
    double a = 0.0;
    double b = 1.0;
    std::size_t M = 2;  ///< subintervals; M + 1 nodes
    double dx = 0.5;

    Grid1D() = default;
    /// Throws ValidationError unless b > a and M >= 2.
    Grid1D(double a, double b, std::size_t M);

    std::size_t nodes() const noexcept { return M + 1; }
    double x(std::size_t n) const noexcept { return a + static_cast<double>(n) * dx; }
};

struct FieldState {
    double t = 0.0;
    std::vector<double> S;
    std::vector<double> I;
    std::vector<double> V;

    std::size_t nodes() const noexcept { return S.size(); }

    /// Same value at every node.
    static FieldState uniform(std::size_t nodes, double S, double I, double V, double t = 0.0);
    static FieldState at_equilibrium(std::size_t nodes, const Equilibrium& e, double t = 0.0);

    bool all_finite() const;
    bool all_positive() const;
    bool all_nonnegative() const;
};

enum class Scheme { NSFD, ExplicitSFD };

std::string_view to_string(Scheme scheme);
Scheme scheme_from_string(std::string_view name);

struct StepParams {
    double dt = 1.0;
    Scheme scheme = Scheme::NSFD;

    void validate() const;
};

/// Matrix A^k with its right-hand side S^k + Lambda dt.
TridiagonalSystem assemble_S_system(const FieldState& state, const ModelParams& params,
                                    const IncidenceFunctions& inc, double dt, double dx);

/// Matrix B (state independent); rhs left zero.
TridiagonalSystem assemble_I_system(const ModelParams& params, double dt, double dx,
                                    std::size_t nodes);

/// Matrix C (state independent); rhs left zero.
TridiagonalSystem assemble_V_system(const ModelParams& params, double dt, double dx,
                                    std::size_t nodes);

/// rhs[n] = I_n^k + dt S_n^{k+1} (f(V_n^k) + g(I_n^k))
void fill_I_rhs(TridiagonalSystem& sys, const FieldState& old_state,
                const std::vector<double>& S_new, const IncidenceFunctions& inc, double dt);

/// rhs[n] = V_n^k + alpha dt I_n^{k+1}
void fill_V_rhs(TridiagonalSystem& sys, const FieldState& old_state,
                const std::vector<double>& I_new, const ModelParams& params, double dt);

/// Reusable NSFD integrator: B and C are assembled once at construction.
class NsfdStepper {
public:
    NsfdStepper(ModelParams params, IncidenceFunctions inc, double dt, double dx, std::size_t nodes);

    /// Advances one step. Requires finite, nonnegative data of the right size.
    FieldState step(const FieldState& state);

    const TridiagonalSystem& I_matrix() const noexcept { return b_sys_; }
    const TridiagonalSystem& V_matrix() const noexcept { return c_sys_; }

private:
    ModelParams params_;
    IncidenceFunctions inc_;
    double dt_;
    double dx_;
    TridiagonalSystem b_sys_;
    TridiagonalSystem c_sys_;
    std::vector<double> scratch_;
};

FieldState nsfd_step(const FieldState& state, const ModelParams& params,
                     const IncidenceFunctions& inc, double dt, double dx);

/// Forward Euler with centred second differences and the same ghost nodes.
/// No positivity guarantee. Throws NonFiniteState on NaN/Inf output.
FieldState sfd_explicit_step(const FieldState& state, const ModelParams& params,
                             const IncidenceFunctions& inc, double dt, double dx);

/// max_n |X^{k+1}_n - X^k_n| / (dt (1 + |X^k_n|)) over all three fields.
double steady_state_residual(const FieldState& previous, const FieldState& next, double dt);

/// ||U - U_eq||_inf / ||U_eq||_inf with U the stacked (S, I, V) vector.
double relative_distance(const FieldState& state, const Equilibrium& e);

struct SimulationOptions {
    double steady_tol = 1e-10;
    bool stop_at_steady_state = true;
    /// Called after every step with the new state and its step index (>= 1).
    std::function<void(const FieldState&, std::size_t)> on_step;
};

enum class Verdict { DiseaseFree, Endemic, NotConverged };

std::string_view to_string(Verdict verdict);

struct ConvergenceReport {
    bool converged = false;
    std::size_t steps = 0;
    double final_time = 0.0;
    double final_residual = 0.0;
    Verdict verdict = Verdict::NotConverged;
    /// Equilibrium closest to the final state and the relative distance to it.
    EquilibriumKind nearest = EquilibriumKind::DiseaseFree;
    double distance = 0.0;
    /// First step that produced a nonpositive entry (never set for NSFD on
    /// valid input).
    std::optional<std::size_t> first_nonpositive_step;
    /// Non-empty when the run was aborted by a numerical error.
    std::string failure;
};

struct SimulationResult {
    std::vector<FieldState> snapshots;
    FieldState final_state;
    ConvergenceReport report;
};

/// Steps from `initial` until `horizon` (or steady state), recording a
/// snapshot at t = 0 and every `snapshot_every` days thereafter, plus the final
/// state. Numerical errors in the SFD baseline are captured in the report;
/// validation errors propagate.
SimulationResult simulate(const FieldState& initial, const Grid1D& grid, const ModelParams& params,
                          const IncidenceFunctions& inc, const StepParams& step, double horizon,
                          double snapshot_every, const SimulationOptions& options = {});

}  // namespace vdyn
