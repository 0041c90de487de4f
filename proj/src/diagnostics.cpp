#include "vdyn/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vdyn/errors.hpp"

namespace vdyn {

namespace {

constexpr double kAbsoluteFloor = 1e-12;

/// u - ln(1 + u) for u > -1. The alternating series is used near zero, where
/// the direct difference cancels.
double phi_of_offset(double u) {
    if (std::abs(u) < 0.1) {
        // sum_{j>=2} (-1)^j u^j / j; 0.1^20 / 20 is far below one ulp of u^2/2.
        double term = u * u;
        double sum = 0.0;
        for (int j = 2; j <= 22; ++j) {
            sum += (j % 2 == 0 ? term : -term) / j;
            term *= u;
        }
        return sum;
    }
    return u - std::log1p(u);
}

void require_positive_entries(const std::vector<double>& v, const char* field) {
    for (std::size_t n = 0; n < v.size(); ++n) {
        if (!(v[n] > 0.0)) {
            std::ostringstream msg;
            msg << field << "[" << n << "] = " << v[n] << " is not positive";
            throw DomainError(msg.str());
        }
    }
}

}  // namespace

double volterra_phi(double x) {
    if (!(x > 0.0)) {
        std::ostringstream msg;
        msg << "Volterra function needs x > 0, got " << x;
        throw DomainError(msg.str());
    }
    return phi_of_offset(x - 1.0);
}

double volterra_phi_ratio(double value, double reference) {
    if (!(value > 0.0) || !(reference > 0.0)) {
        std::ostringstream msg;
        msg << "Volterra function needs positive arguments, got " << value << "/" << reference;
        throw DomainError(msg.str());
    }
    return phi_of_offset((value - reference) / reference);
}

double lyapunov_disease_free(const FieldState& state, const ModelParams& params,
                             const IncidenceFunctions& inc, double dt) {
    params.validate();
    const double s0 = params.Lambda / params.d_S;
    const double rho0 = s0 * inc.g_prime_0();
    const double rho1 = (params.infected_loss() - rho0) / params.alpha;
    const double rho2 = params.d_V;
    if (!(rho1 > 0.0)) {
        std::ostringstream msg;
        msg << "rho1 = " << rho1 << " <= 0: cell-to-cell reproduction number is at least 1";
        throw ConstantsUndefined(msg.str());
    }
    require_positive_entries(state.S, "S");
    const double i_weight = 1.0 + rho0 * dt;
    const double v_weight = rho1 * (1.0 + rho2 * dt);
    double sum = 0.0;
    for (std::size_t n = 0; n < state.nodes(); ++n) {
        sum += s0 * volterra_phi_ratio(state.S[n], s0) + i_weight * state.I[n] +
               v_weight * state.V[n];
    }
    return sum / dt;
}

double lyapunov_endemic(const FieldState& state, const ModelParams& params,
                        const IncidenceFunctions& inc, const Equilibrium& e_star, double dt) {
    if (!(e_star.S > 0.0 && e_star.I > 0.0 && e_star.V > 0.0)) {
        throw DomainError("endemic equilibrium must be strictly positive");
    }
    require_positive_entries(state.S, "S");
    require_positive_entries(state.I, "I");
    require_positive_entries(state.V, "V");
    const double s_weight = e_star.S;
    const double i_weight = e_star.I + e_star.S * inc.g(e_star.I) * dt;
    const double v_weight = e_star.S * inc.f(e_star.V) / params.d_V * (1.0 + params.d_V * dt);
    double sum = 0.0;
    for (std::size_t n = 0; n < state.nodes(); ++n) {
        sum += s_weight * volterra_phi_ratio(state.S[n], e_star.S) +
               i_weight * volterra_phi_ratio(state.I[n], e_star.I) +
               v_weight * volterra_phi_ratio(state.V[n], e_star.V);
    }
    return sum / dt;
}

MonotoneReport check_monotone(const LyapunovSeries& series, double slack) {
    MonotoneReport report;
    const auto& v = series.values;
    for (std::size_t k = 0; k + 1 < v.size(); ++k) {
        const double bound = v[k] * (1.0 + slack) + kAbsoluteFloor;
        if (v[k + 1] > bound || std::isnan(v[k + 1])) {
            report.pass = false;
            report.violations.push_back(k + 1);
            const double rel = (v[k + 1] - v[k]) / std::max(std::abs(v[k]), kAbsoluteFloor);
            if (!(rel <= report.worst_violation)) {
                report.worst_violation = rel;
                report.worst_index = k + 1;
            }
        }
    }
    return report;
}

}  // namespace vdyn
