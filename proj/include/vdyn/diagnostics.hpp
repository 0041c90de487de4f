// Discrete Lyapunov functionals for the NSFD scheme and a monotonicity check
// used as the numerical witness of global stability.
#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "vdyn/model.hpp"
#include "vdyn/solver.hpp"

namespace vdyn {

/// Phi(x) = x - 1 - ln x. Throws DomainError for x <= 0.
double volterra_phi(double x);

/// Phi(value / reference), accurate when the ratio is close to 1.
double volterra_phi_ratio(double value, double reference);

/// Functional for the disease-free state:
///   L^k = sum_n (1/dt) [S0 Phi(S_n/S0) + (1 + rho0 dt) I_n + rho1 (1 + rho2 dt) V_n]
/// with S0 = Lambda/d_S, rho0 = S0 g'(0), rho1 = (gamma + d_I - S0 g'(0))/alpha,
/// rho2 = d_V. Throws ConstantsUndefined when rho1 <= 0.
double lyapunov_disease_free(const FieldState& state, const ModelParams& params,
                             const IncidenceFunctions& inc, double dt);

/// Functional for the endemic state E*:
///   H^k = sum_n (1/dt) [S* Phi(S_n/S*) + (I* + S* g(I*) dt) Phi(I_n/I*)
///                       + (S* f(V*)/d_V)(1 + d_V dt) Phi(V_n/V*)]
/// Throws DomainError on any nonpositive entry of the state or E*.
double lyapunov_endemic(const FieldState& state, const ModelParams& params,
                        const IncidenceFunctions& inc, const Equilibrium& e_star, double dt);

struct LyapunovSeries {
    std::vector<double> times;
    std::vector<double> values;
    EquilibriumKind kind = EquilibriumKind::DiseaseFree;

    void push(double t, double value) {
        times.push_back(t);
        values.push_back(value);
    }
};

struct MonotoneReport {
    bool pass = true;
    /// Indices k + 1 at which values[k + 1] exceeded the allowed bound.
    std::vector<std::size_t> violations;
    /// Largest (values[k+1] - values[k]) / max(|values[k]|, tiny) seen at a
    /// violation; zero when the series passes.
    double worst_violation = 0.0;
    std::size_t worst_index = 0;
};

/// Flags every k with values[k+1] > values[k] (1 + slack) + 1e-12.
MonotoneReport check_monotone(const LyapunovSeries& series, double slack);

}  // namespace vdyn
