// Within-host infection model with diffusion: parameters, incidence
// functions, reproduction number and steady states.
#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace vdyn {

/// Rate and diffusion constants. Rates are per day, diffusion in mm^2/day.
struct ModelParams {
    double Lambda = 0.0;  ///< recruitment of susceptible cells
    double d_S = 0.0;     ///< death rate, susceptible cells
    double d_I = 0.0;     ///< death rate, infected cells
    double d_V = 0.0;     ///< clearance rate, virions
    double gamma = 0.0;   ///< lysis rate of infected cells
    double alpha = 0.0;   ///< virion production per infected cell
    double D1 = 0.0;
    double D2 = 0.0;
    double D3 = 0.0;

    /// Throws ValidationError naming the first offending field.
    void validate() const;

    /// gamma + d_I, the total loss rate of infected cells.
    double infected_loss() const { return gamma + d_I; }
};

enum class IncidenceKind { Linear, Saturating, Custom };

std::string_view to_string(IncidenceKind kind);
IncidenceKind incidence_kind_from_string(std::string_view name);

/// One force-of-infection response x -> h(x) with h(0) = 0, nondecreasing,
/// concave. The slope at zero is carried exactly.
class Incidence {
public:
    /// beta * x
    static Incidence linear(double beta);
    /// beta * x / (1 + x)
    static Incidence saturating(double beta);
    static Incidence of_kind(IncidenceKind kind, double beta);
    /// User-supplied response. `slope_at_zero` must be the exact h'(0).
    static Incidence custom(std::function<double(double)> fn, double slope_at_zero);

    double operator()(double x) const;
    double slope_at_zero() const noexcept { return slope_; }
    IncidenceKind kind() const noexcept { return kind_; }

    /// Same functional form with a different slope at zero. Not available for
    /// custom responses.
    Incidence with_slope(double beta) const;

private:
    Incidence(IncidenceKind kind, double slope, std::function<double(double)> fn);

    IncidenceKind kind_;
    double slope_;
    std::function<double(double)> fn_;
};

/// The pair (f, g): f acts on virions, g on infected cells.
struct IncidenceFunctions {
    Incidence f;
    Incidence g;

    static IncidenceFunctions linear(double beta1, double beta2);
    static IncidenceFunctions saturating(double beta1, double beta2);

    double f_prime_0() const noexcept { return f.slope_at_zero(); }
    double g_prime_0() const noexcept { return g.slope_at_zero(); }
    bool is_linear() const noexcept {
        return f.kind() == IncidenceKind::Linear && g.kind() == IncidenceKind::Linear;
    }
};

/// Sampled check of h(0) = 0, monotonicity, concavity and
/// h'(x) x <= h(x) <= h'(0) x on a geometric grid over [0, x_max]. Returns an
/// empty string when all checks pass, else a description of the first failure.
std::string check_incidence_conditions(const Incidence& h, double x_max);

struct R0Breakdown {
    double r01 = 0.0;  ///< virus-to-cell
    double r02 = 0.0;  ///< cell-to-cell
    double total = 0.0;
};

enum class EquilibriumKind { DiseaseFree, Endemic };

std::string_view to_string(EquilibriumKind kind);

struct Equilibrium {
    EquilibriumKind kind = EquilibriumKind::DiseaseFree;
    double S = 0.0;
    double I = 0.0;
    double V = 0.0;
};

R0Breakdown compute_r0(const ModelParams& params, const IncidenceFunctions& inc);

Equilibrium disease_free_equilibrium(const ModelParams& params);

/// G(I) = ((Lambda - (gamma+d_I) I)/d_S) (f(alpha I/d_V) + g(I)) - (gamma+d_I) I.
/// Positive roots are the infected-cell levels of endemic states.
double endemic_root_function(double I, const ModelParams& params, const IncidenceFunctions& inc);

/// Endemic state by bisection on G. Requires R0 > 1; throws RootNotBracketed
/// when G has no sign change on the admissible interval.
Equilibrium endemic_equilibrium_by_root(const ModelParams& params, const IncidenceFunctions& inc);

/// Closed-form endemic state for bilinear incidence (slopes taken from `inc`).
Equilibrium endemic_equilibrium_closed_form(const ModelParams& params,
                                            const IncidenceFunctions& inc);

/// Absent when R0 <= 1. For linear incidence the closed form is returned after
/// being cross-checked against the root finder.
std::optional<Equilibrium> endemic_equilibrium(const ModelParams& params,
                                               const IncidenceFunctions& inc);

/// Steady-state residuals of the three reaction equations, each normalised by
/// the magnitude of its largest term (zero when every term is zero).
std::array<double, 3> residuals(const Equilibrium& e, const ModelParams& params,
                                const IncidenceFunctions& inc);

/// Reference parameter sets with bilinear incidence.
struct Scenario {
    std::string name;
    ModelParams params;
    double beta1 = 0.0;
    double beta2 = 0.0;

    IncidenceFunctions incidence() const { return IncidenceFunctions::linear(beta1, beta2); }
};

/// R0 = 0.21: infection clears.
Scenario scenario_a();
/// R0 = 12.6: infection persists.
Scenario scenario_b();

}  // namespace vdyn
