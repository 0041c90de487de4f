// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "test_support.hpp"
#include "vdyn/config.hpp"
#include "vdyn/diagnostics.hpp"
#include "vdyn/errors.hpp"
#include "vdyn/experiments.hpp"
#include "vdyn/model.hpp"
#include "vdyn/sensitivity.hpp"
#include "vdyn/solver.hpp"
#include "vdyn/tridiagonal.hpp"

using namespace vdyn;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

int failures = 0;

void criterion(int id, const char* title, const std::function<void(Outcome&)>& body) {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(out);
    } catch (const std::exception& e) {
        out.pass = false;
        out.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!out.pass) ++failures;
    std::printf("criterion %d: %s  %s (%.3f s) %s\n", id, out.pass ? "PASS" : "FAIL", title, secs,
                out.detail.str().c_str());
    std::fflush(stdout);
}

/// Linear-incidence endemic state solved by hand.
Equilibrium endemic_oracle(const ModelParams& p, double beta1, double beta2) {
    const double loss = p.gamma + p.d_I;
    const double S = loss / (beta1 * p.alpha / p.d_V + beta2);
    const double I = (p.Lambda - p.d_S * S) / loss;
    return {EquilibriumKind::Endemic, S, I, p.alpha * I / p.d_V};
}

double sup_rel_distance(const FieldState& s, const Equilibrium& e) {
    double num = 0.0;
    for (std::size_t n = 0; n < s.nodes(); ++n) {
        num = std::max({num, std::abs(s.S[n] - e.S), std::abs(s.I[n] - e.I), std::abs(s.V[n] - e.V)});
    }
    return num / std::max({std::abs(e.S), std::abs(e.I), std::abs(e.V)});
}

double q_total(const FieldState& s) {
    double q = 0.0;
    for (std::size_t n = 0; n < s.nodes(); ++n) q += s.S[n] + s.I[n];
    return q;
}

bool any_bad(const FieldState& s) {
    for (const auto* f : {&s.S, &s.I, &s.V})
        for (double v : *f)
            if (!(v > 0.0) || !std::isfinite(v)) return true;
    return false;
}

}  // namespace

int main() {
    criterion(1, "R0 for scenarios A and B", [](Outcome& o) {
        const Scenario a = scenario_a();
        const Scenario b = scenario_b();
        const auto ra = compute_r0(a.params, a.incidence());
        const auto rb = compute_r0(b.params, b.incidence());
        auto hand = [](const Scenario& s) {
            const ModelParams& p = s.params;
            const double s0 = p.Lambda / p.d_S;
            return s0 * p.alpha * s.beta1 / (p.d_V * (p.gamma + p.d_I)) + s0 * s.beta2 / (p.gamma + p.d_I);
        };
        o.detail << "R0_A=" << ra.total << " (r01=" << ra.r01 << ", r02=" << ra.r02 << "), R0_B=" << rb.total;
        o.require(std::abs(ra.r01 - 0.2) <= 1e-14 && std::abs(ra.r02 - 0.01) <= 1e-14 &&
                      std::abs(ra.total - 0.21) <= 1e-14,
                  "scenario A components");
        o.require(std::abs(rb.total - 12.6) <= 1e-12, "scenario B formula value");
        o.require(std::abs(rb.total - 12.59) <= 0.02, "within 0.02 of 12.59");
        o.require(test::rel_diff(ra.total, hand(a)) <= 1e-14 && test::rel_diff(rb.total, hand(b)) <= 1e-14,
                  "independent formula");
    });

    criterion(2, "scenario B endemic equilibrium", [](Outcome& o) {
        const Scenario b = scenario_b();
        const auto t0 = std::chrono::steady_clock::now();
        const auto e = endemic_equilibrium(b.params, b.incidence());
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        o.require(e.has_value(), "endemic state exists");
        if (!e) return;
        const Equilibrium ref = endemic_oracle(b.params, b.beta1, b.beta2);
        o.detail << "E*=(" << e->S << ", " << e->I << ", " << e->V << "), " << ms << " ms";
        o.require(std::abs(e->S - 8e6) <= 0.5e6 && std::abs(e->I - 1.8e8) <= 0.05e8 && std::abs(e->V - 3.7e9) <= 0.05e9,
                  "printed digits");
        o.require(test::rel_diff(e->S, ref.S) <= 1e-9 && test::rel_diff(e->I, ref.I) <= 1e-9 &&
                      test::rel_diff(e->V, ref.V) <= 1e-9,
                  "closed form to 1e-9");
        o.require(ms < 1.0, "under 1 ms");
    });

    criterion(3, "scenario A converges to E0 with L nonincreasing", [](Outcome& o) {
        const RunConfig c = preset_config("scenario-a");
        const SimulateOutcome out = simulate_outcome(c);
        const double dist = sup_rel_distance(out.sim.final_state, disease_free_equilibrium(c.params));
        const MonotoneReport m = check_monotone(out.lyapunov, 1e-9);
        o.detail << "t=" << out.sim.report.final_time << ", distance=" << dist << ", L values=" << out.lyapunov.values.size()
                 << ", violations=" << m.violations.size();
        o.require(dist < 1e-2, "distance < 1e-2");
        o.require(m.pass, "L nonincreasing");
        o.require(out.lyapunov.values.size() == out.sim.report.steps + 1, "L recorded at every step");
    });

    criterion(4, "scenario B converges to E* with H nonincreasing", [](Outcome& o) {
        const RunConfig c = preset_config("scenario-b");
        const SimulateOutcome out = simulate_outcome(c);
        const double dist = sup_rel_distance(out.sim.final_state, endemic_oracle(c.params, c.beta1, c.beta2));
        const MonotoneReport m = check_monotone(out.lyapunov, 1e-9);
        o.detail << "t=" << out.sim.report.final_time << ", distance=" << dist << ", H values=" << out.lyapunov.values.size()
                 << ", violations=" << m.violations.size();
        o.require(dist < 0.02, "distance < 2%");
        o.require(m.pass, "H nonincreasing");
        o.require(out.lyapunov.values.size() == out.sim.report.steps + 1, "H recorded at every step");
    });

    criterion(5, "positivity and Q bound on 200 random draws x 500 steps", [](Outcome& o) {
        std::mt19937_64 rng(20240501);
        std::size_t nonpositive = 0;
        std::size_t bound_violations = 0;
        for (int draw = 0; draw < 200; ++draw) {
            const ModelParams p = test::random_params(rng);
            const auto inc = test::random_incidence(rng, p, 0.1, 30.0, draw % 2 == 0);
            const double dt = test::log_uniform(rng, 1e-3, 10.0);
            const double dx = test::log_uniform(rng, 0.05, 5.0);
            const std::size_t nodes = 3 + static_cast<std::size_t>(test::uniform(rng, 0.0, 60.0));
            FieldState s = test::random_state(rng, nodes, 1e-3, 1e9);
            NsfdStepper stepper(p, inc, dt, dx, nodes);
            const double d = std::min(p.d_S, p.d_I);
            for (int k = 0; k < 500; ++k) {
                const FieldState next = stepper.step(s);
                for (const auto* f : {&next.S, &next.I, &next.V})
                    for (double v : *f)
                        if (!(v > 0.0)) ++nonpositive;
                const double bound = (p.Lambda * static_cast<double>(nodes) * dt + q_total(s)) / (1.0 + d * dt);
                if (q_total(next) > bound * (1.0 + 1e-12)) ++bound_violations;
                s = next;
            }
        }
        o.detail << "nonpositive entries=" << nonpositive << ", bound violations=" << bound_violations;
        o.require(nonpositive == 0, "no nonpositive entries");
        o.require(bound_violations == 0, "Q bound at every step");
    });

    criterion(6, "explicit scheme loses positivity where NSFD does not", [](Outcome& o) {
        const RunConfig c = preset_config("scenario-b");
        const Grid1D grid = c.grid();
        const FieldState init = c.initial.sample(grid);
        FieldState sfd = init;
        int sfd_bad_step = -1;
        for (int k = 1; k <= 1000 && sfd_bad_step < 0; ++k) {
            try {
                sfd = sfd_explicit_step(sfd, c.params, c.incidence(), c.dt, grid.dx);
                if (any_bad(sfd)) sfd_bad_step = k;
            } catch (const NonFiniteState&) {
                sfd_bad_step = k;
            }
        }
        FieldState nsfd = init;
        NsfdStepper stepper(c.params, c.incidence(), c.dt, grid.dx, grid.nodes());
        int nsfd_bad_step = -1;
        for (int k = 1; k <= 1000 && nsfd_bad_step < 0; ++k) {
            nsfd = stepper.step(nsfd);
            if (any_bad(nsfd)) nsfd_bad_step = k;
        }
        o.detail << "explicit first bad step=" << sfd_bad_step << ", NSFD bad step=" << nsfd_bad_step
                 << " (1000 steps)";
        o.require(sfd_bad_step > 0, "explicit run produces a negative or non-finite entry");
        o.require(nsfd_bad_step < 0, "NSFD stays positive and finite");
    });

    criterion(7, "oracle equivalences", [](Outcome& o) {
        std::mt19937_64 rng(777);
        double worst_dense = 0.0;
        for (int trial = 0; trial < 50; ++trial) {
            const std::size_t n = 2 + static_cast<std::size_t>(test::uniform(rng, 0.0, 200.0));
            TridiagonalSystem sys(n);
            for (std::size_t i = 0; i < n; ++i) {
                sys.sub[i] = i > 0 ? test::uniform(rng, -10.0, 10.0) : 0.0;
                sys.super[i] = i + 1 < n ? test::uniform(rng, -10.0, 10.0) : 0.0;
                sys.diag[i] = (std::abs(sys.sub[i]) + std::abs(sys.super[i]) + test::uniform(rng, 0.01, 5.0)) *
                              (test::uniform(rng, 0.0, 1.0) < 0.3 ? -1.0 : 1.0);
                sys.rhs[i] = test::uniform(rng, -1e3, 1e3);
            }
            const auto x = solve_tridiagonal(sys);
            const auto ref = test::dense_solve(sys);
            double diff = 0.0;
            for (std::size_t i = 0; i < n; ++i) diff = std::max(diff, std::abs(x[i] - ref[i]));
            worst_dense = std::max(worst_dense, diff / std::max(1.0, test::max_abs(ref)));
        }
        double worst_scalar = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            const ModelParams p = test::random_params(rng);
            const auto inc = test::random_incidence(rng, p, 0.2, 20.0, trial % 2 == 0);
            const double dt = test::log_uniform(rng, 1e-2, 10.0);
            const std::size_t nodes = 4 + static_cast<std::size_t>(trial);
            test::ScalarState x{test::log_uniform(rng, 1.0, 1e8), test::log_uniform(rng, 1.0, 1e8),
                                test::log_uniform(rng, 1.0, 1e8)};
            FieldState s = FieldState::uniform(nodes, x.S, x.I, x.V);
            NsfdStepper stepper(p, inc, dt, test::uniform(rng, 0.1, 2.0), nodes);
            for (int k = 0; k < 100; ++k) {
                s = stepper.step(s);
                x = test::scalar_implicit_update(x, p, inc, dt);
            }
            for (std::size_t n = 0; n < nodes; ++n) {
                worst_scalar = std::max({worst_scalar, test::rel_diff(s.S[n], x.S), test::rel_diff(s.I[n], x.I),
                                         test::rel_diff(s.V[n], x.V)});
            }
        }
        o.detail << "dense oracle gap=" << worst_dense << ", scalar oracle gap=" << worst_scalar;
        o.require(worst_dense <= 1e-10, "dense solve to 1e-10");
        o.require(worst_scalar <= 1e-12, "scalar update to 1e-12");
    });

    criterion(8, "scenario B final state independent of diffusion", [](Outcome& o) {
        const DiffusionComparison cmp = compare_diffusion_outcome(preset_config("scenario-b"), 1.0, 100.0);
        double worst = 0.0;
        const FieldState& lo = cmp.low.final_state;
        const FieldState& hi = cmp.high.final_state;
        for (std::size_t n = 0; n < lo.nodes(); ++n) {
            worst = std::max({worst, test::rel_diff(lo.S[n], hi.S[n]), test::rel_diff(lo.I[n], hi.I[n]),
                              test::rel_diff(lo.V[n], hi.V[n])});
        }
        o.detail << "node-wise relative gap=" << worst << ", verdicts " << to_string(cmp.low.report.verdict) << "/"
                 << to_string(cmp.high.report.verdict);
        o.require(worst < 1e-6, "agree to 1e-6");
    });

    criterion(9, "PRCC of R0: magnitudes, signs and null data", [](Outcome& o) {
        const Scenario b = scenario_b();
        const SensitivitySpec spec = default_r0_spec(b.params, b.incidence(), 0.1, 1000, 42);
        const R0Study study = r0_sensitivity_study(spec, b.params, b.incidence());
        const auto& c = study.prcc.coefficients;
        o.detail << "PRCC";
        for (std::size_t j = 0; j < c.size(); ++j) o.detail << ' ' << study.prcc.names[j] << '=' << c[j];

        std::mt19937_64 rng(99);
        Eigen::MatrixXd x(1000, 6);
        Eigen::VectorXd y(1000);
        for (Eigen::Index i = 0; i < 1000; ++i) {
            for (Eigen::Index j = 0; j < 6; ++j) x(i, j) = test::uniform(rng, 0.0, 1.0);
            y(i) = test::uniform(rng, 0.0, 1.0);
        }
        double null_max = 0.0;
        for (double v : prcc(x, y).coefficients) null_max = std::max(null_max, std::abs(v));
        o.detail << ", null max=" << null_max;

        o.require(std::abs(c[0]) > 0.5, "|PRCC(beta1)| > 0.5");
        o.require(std::abs(c[1]) > 0.5, "|PRCC(beta2)| > 0.5");
        const int signs[] = {+1, +1, +1, -1, -1, -1};
        bool sign_ok = true;
        for (std::size_t j = 0; j < 6; ++j) sign_ok = sign_ok && c[j] * signs[j] > 0.0;
        o.require(sign_ok, "signs (+,+,+,-,-,-)");
        o.require(null_max < 0.15, "null data below 0.15");
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
