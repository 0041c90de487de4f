#include "vdyn/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>
#include <vector>

#include "vdyn/errors.hpp"

namespace vdyn {

namespace {

void require_positive(double value, const char* key) {
    if (!std::isfinite(value) || value <= 0.0) {
        throw ValidationError(key, "must be finite and > 0");
    }
}

void require_nonnegative(double value, const char* key) {
    if (!std::isfinite(value) || value < 0.0) {
        throw ValidationError(key, "must be finite and >= 0");
    }
}

double relative_gap(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace

void ModelParams::validate() const {
    require_positive(Lambda, "Lambda");
    require_positive(d_S, "d_S");
    require_positive(d_I, "d_I");
    require_positive(d_V, "d_V");
    require_positive(gamma, "gamma");
    require_positive(alpha, "alpha");
    require_nonnegative(D1, "D1");
    require_nonnegative(D2, "D2");
    require_nonnegative(D3, "D3");
}

std::string_view to_string(IncidenceKind kind) {
    switch (kind) {
        case IncidenceKind::Linear: return "linear";
        case IncidenceKind::Saturating: return "saturating";
        case IncidenceKind::Custom: return "custom";
    }
    return "custom";
}

IncidenceKind incidence_kind_from_string(std::string_view name) {
    if (name == "linear") return IncidenceKind::Linear;
    if (name == "saturating") return IncidenceKind::Saturating;
    throw ValidationError("incidence", "expected 'linear' or 'saturating', got '" +
                                           std::string(name) + "'");
}

Incidence::Incidence(IncidenceKind kind, double slope, std::function<double(double)> fn)
    : kind_(kind), slope_(slope), fn_(std::move(fn)) {}

Incidence Incidence::linear(double beta) {
    require_nonnegative(beta, "beta");
    return Incidence(IncidenceKind::Linear, beta, [beta](double x) { return beta * x; });
}

Incidence Incidence::saturating(double beta) {
    require_nonnegative(beta, "beta");
    return Incidence(IncidenceKind::Saturating, beta,
                     [beta](double x) { return beta * x / (1.0 + x); });
}

Incidence Incidence::of_kind(IncidenceKind kind, double beta) {
    switch (kind) {
        case IncidenceKind::Linear: return linear(beta);
        case IncidenceKind::Saturating: return saturating(beta);
        case IncidenceKind::Custom: break;
    }
    throw ValidationError("incidence", "custom incidence cannot be built from a slope");
}

Incidence Incidence::custom(std::function<double(double)> fn, double slope_at_zero) {
    require_nonnegative(slope_at_zero, "slope_at_zero");
    if (!fn) throw ValidationError("incidence", "empty callback");
    return Incidence(IncidenceKind::Custom, slope_at_zero, std::move(fn));
}

double Incidence::operator()(double x) const { return fn_(x); }

Incidence Incidence::with_slope(double beta) const { return of_kind(kind_, beta); }

IncidenceFunctions IncidenceFunctions::linear(double beta1, double beta2) {
    return {Incidence::linear(beta1), Incidence::linear(beta2)};
}

IncidenceFunctions IncidenceFunctions::saturating(double beta1, double beta2) {
    return {Incidence::saturating(beta1), Incidence::saturating(beta2)};
}

std::string check_incidence_conditions(const Incidence& h, double x_max) {
    constexpr int kPoints = 400;
    constexpr double kTol = 1e-12;
    std::ostringstream why;
    if (h(0.0) != 0.0) {
        why << "h(0) = " << h(0.0) << " != 0";
        return why.str();
    }
    std::vector<double> xs;
    xs.reserve(kPoints);
    for (int k = 0; k < kPoints; ++k) {
        xs.push_back(x_max * std::pow(10.0, -9.0 + 9.0 * k / (kPoints - 1)));
    }
    const double slope0 = h.slope_at_zero();
    double prev_x = 0.0;
    double prev_h = 0.0;
    double prev_ratio = slope0;
    for (double x : xs) {
        const double hx = h(x);
        const double scale = std::max(std::abs(hx), slope0 * x);
        if (!std::isfinite(hx) || hx < 0.0) {
            why << "h(" << x << ") = " << hx << " is not a nonnegative number";
            return why.str();
        }
        if (hx < prev_h - kTol * scale) {
            why << "h decreases between " << prev_x << " and " << x;
            return why.str();
        }
        if (hx > slope0 * x + kTol * scale) {
            why << "h(" << x << ") exceeds h'(0) x";
            return why.str();
        }
        // h(x)/x nonincreasing is equivalent to h'(x) x <= h(x).
        const double ratio = hx / x;
        if (ratio > prev_ratio * (1.0 + 1e-9)) {
            why << "h(x)/x increases near x = " << x;
            return why.str();
        }
        const double mid = 0.5 * (prev_x + x);
        if (h(mid) < 0.5 * (prev_h + hx) - kTol * scale) {
            why << "h is not concave near x = " << mid;
            return why.str();
        }
        prev_x = x;
        prev_h = hx;
        prev_ratio = ratio;
    }
    return {};
}

std::string_view to_string(EquilibriumKind kind) {
    return kind == EquilibriumKind::DiseaseFree ? "DiseaseFree" : "Endemic";
}

R0Breakdown compute_r0(const ModelParams& params, const IncidenceFunctions& inc) {
    params.validate();
    const double s0 = params.Lambda / params.d_S;
    R0Breakdown r;
    r.r01 = s0 * params.alpha * inc.f_prime_0() / (params.d_V * params.infected_loss());
    r.r02 = s0 * inc.g_prime_0() / params.infected_loss();
    r.total = r.r01 + r.r02;
    return r;
}

Equilibrium disease_free_equilibrium(const ModelParams& params) {
    params.validate();
    return {EquilibriumKind::DiseaseFree, params.Lambda / params.d_S, 0.0, 0.0};
}

double endemic_root_function(double I, const ModelParams& params, const IncidenceFunctions& inc) {
    const double loss = params.infected_loss();
    const double S = (params.Lambda - loss * I) / params.d_S;
    const double V = params.alpha * I / params.d_V;
    return S * (inc.f(V) + inc.g(I)) - loss * I;
}

namespace {

Equilibrium endemic_from_infected(double I, const ModelParams& params) {
    return {EquilibriumKind::Endemic, (params.Lambda - params.infected_loss() * I) / params.d_S, I,
            params.alpha * I / params.d_V};
}

}  // namespace

Equilibrium endemic_equilibrium_by_root(const ModelParams& params, const IncidenceFunctions& inc) {
    params.validate();
    const double upper = params.Lambda / params.infected_loss();
    const double eps = 1e-12 * upper;
    double lo = eps;
    double hi = upper - eps;
    const double g_lo = endemic_root_function(lo, params, inc);
    const double g_hi = endemic_root_function(hi, params, inc);
    if (!(g_lo > 0.0 && g_hi < 0.0)) {
        std::ostringstream msg;
        msg << "G has no sign change on [" << lo << ", " << hi << "]: G(lo) = " << g_lo
            << ", G(hi) = " << g_hi;
        throw RootNotBracketed(msg.str());
    }
    while (hi - lo > 1e-12 * hi) {
        const double mid = 0.5 * (lo + hi);
        const double g_mid = endemic_root_function(mid, params, inc);
        if (g_mid == 0.0) {
            lo = hi = mid;
            break;
        }
        if (g_mid > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return endemic_from_infected(0.5 * (lo + hi), params);
}

Equilibrium endemic_equilibrium_closed_form(const ModelParams& params,
                                            const IncidenceFunctions& inc) {
    const double r0 = compute_r0(params, inc).total;
    const double I = params.Lambda * (1.0 - 1.0 / r0) / params.infected_loss();
    return {EquilibriumKind::Endemic, params.Lambda / (params.d_S * r0), I,
            params.alpha * I / params.d_V};
}

std::optional<Equilibrium> endemic_equilibrium(const ModelParams& params,
                                               const IncidenceFunctions& inc) {
    if (compute_r0(params, inc).total <= 1.0) return std::nullopt;
    if (!inc.is_linear()) return endemic_equilibrium_by_root(params, inc);

    const Equilibrium closed = endemic_equilibrium_closed_form(params, inc);
    Equilibrium rooted;
    try {
        rooted = endemic_equilibrium_by_root(params, inc);
    } catch (const RootNotBracketed&) {
        // I* below the bisection floor (R0 within ~1e-12 of 1).
        return closed;
    }
    const double gap = std::max({relative_gap(closed.S, rooted.S), relative_gap(closed.I, rooted.I),
                                 relative_gap(closed.V, rooted.V)});
    if (gap > 1e-8) {
        std::ostringstream msg;
        msg << "closed-form and bisection endemic states disagree (relative gap " << gap << ")";
        throw NumericalError(msg.str());
    }
    return closed;
}

std::array<double, 3> residuals(const Equilibrium& e, const ModelParams& params,
                                const IncidenceFunctions& inc) {
    const double sf = e.S * inc.f(e.V);
    const double sg = e.S * inc.g(e.I);
    const double loss_i = params.infected_loss() * e.I;

    auto normalised = [](double sum, std::initializer_list<double> terms) {
        double largest = 0.0;
        for (double t : terms) largest = std::max(largest, std::abs(t));
        return largest == 0.0 ? 0.0 : std::abs(sum) / largest;
    };
    const double ds = params.d_S * e.S;
    const double av = params.alpha * e.I;
    const double dv = params.d_V * e.V;
    return {normalised(params.Lambda - sf - sg - ds, {params.Lambda, sf, sg, ds}),
            normalised(sf + sg - loss_i, {sf, sg, loss_i}), normalised(av - dv, {av, dv})};
}

Scenario scenario_a() {
    Scenario s;
    s.name = "scenario-a";
    s.params.Lambda = 1e7;
    s.params.d_S = 0.1;
    s.params.gamma = 0.01;
    s.params.d_I = 0.04;
    s.params.alpha = 100.0;
    s.params.d_V = 5.0;
    s.params.D1 = s.params.D2 = s.params.D3 = 1.0;
    s.beta1 = 5e-12;
    s.beta2 = 5e-12;
    return s;
}

Scenario scenario_b() {
    Scenario s = scenario_a();
    s.name = "scenario-b";
    s.beta1 = 3e-10;
    s.beta2 = 3e-10;
    return s;
}

}  // namespace vdyn
