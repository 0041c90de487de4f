#include "vdyn/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include <boost/math/distributions/normal.hpp>

#include "vdyn/errors.hpp"

namespace vdyn {

namespace {

/// Uniform in [0, 1) from the top 53 bits; independent of the standard
/// library's distribution implementations so samples match across toolchains.
double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound) by rejection.
std::size_t bounded_index(std::mt19937_64& rng, std::size_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t draw;
    do {
        draw = rng();
    } while (draw >= limit);
    return static_cast<std::size_t>(draw % bound);
}

boost::math::normal_distribution<double> as_normal(const ParamDistribution& d) {
    return boost::math::normal_distribution<double>(d.mean, d.sd);
}

}  // namespace

void ParamDistribution::validate() const {
    if (!std::isfinite(mean) || mean <= 0.0) throw ValidationError(name, "mean must be > 0");
    if (!std::isfinite(sd) || sd < 0.0) throw ValidationError(name, "sd must be >= 0");
}

double ParamDistribution::quantile(double p) const {
    if (sd == 0.0) return mean;
    const auto normal = as_normal(*this);
    const double mass_below_zero = boost::math::cdf(normal, 0.0);
    const double q = mass_below_zero + p * (1.0 - mass_below_zero);
    return boost::math::quantile(normal, std::clamp(q, 1e-300, 1.0 - 1e-16));
}

double ParamDistribution::cdf(double x) const {
    if (sd == 0.0) return x < mean ? 0.0 : 1.0;
    if (x <= 0.0) return 0.0;
    const auto normal = as_normal(*this);
    const double mass_below_zero = boost::math::cdf(normal, 0.0);
    return (boost::math::cdf(normal, x) - mass_below_zero) / (1.0 - mass_below_zero);
}

void SensitivitySpec::validate() const {
    if (n_samples < 10) throw ValidationError("n_samples", "must be >= 10");
    if (distributions.empty()) throw ValidationError("distributions", "at least one is required");
    std::set<std::string> seen;
    for (const auto& d : distributions) {
        d.validate();
        if (!seen.insert(d.name).second) {
            throw ValidationError(d.name, "parameter listed twice");
        }
    }
}

const std::vector<std::string>& r0_parameter_names() {
    static const std::vector<std::string> names = {"beta1", "beta2", "alpha", "d_V", "gamma", "d_I"};
    return names;
}

SensitivitySpec default_r0_spec(const ModelParams& params, const IncidenceFunctions& inc,
                                double sd_fraction, std::size_t n_samples, std::uint64_t seed) {
    if (!std::isfinite(sd_fraction) || sd_fraction < 0.0) {
        throw ValidationError("sd_fraction", "must be >= 0");
    }
    const std::vector<double> nominal = {inc.f_prime_0(), inc.g_prime_0(), params.alpha,
                                         params.d_V,      params.gamma,    params.d_I};
    SensitivitySpec spec;
    spec.n_samples = n_samples;
    spec.seed = seed;
    const auto& names = r0_parameter_names();
    for (std::size_t j = 0; j < names.size(); ++j) {
        spec.distributions.push_back({names[j], nominal[j], sd_fraction * nominal[j]});
    }
    return spec;
}

Eigen::MatrixXd lhs_sample(const SensitivitySpec& spec) {
    spec.validate();
    const std::size_t n = spec.n_samples;
    const std::size_t p = spec.distributions.size();
    Eigen::MatrixXd samples(n, p);
    std::mt19937_64 rng(spec.seed);
    std::vector<std::size_t> strata(n);
    for (std::size_t j = 0; j < p; ++j) {
        std::iota(strata.begin(), strata.end(), std::size_t{0});
        // Fisher-Yates, spelled out so the order does not depend on the
        // standard library's shuffle.
        for (std::size_t i = n - 1; i > 0; --i) {
            std::swap(strata[i], strata[bounded_index(rng, i + 1)]);
        }
        const auto& dist = spec.distributions[j];
        for (std::size_t i = 0; i < n; ++i) {
            const double u = (static_cast<double>(strata[i]) + unit_uniform(rng)) /
                             static_cast<double>(n);
            samples(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = dist.quantile(u);
        }
    }
    return samples;
}

Eigen::VectorXd average_ranks(const Eigen::Ref<const Eigen::VectorXd>& values) {
    const auto n = values.size();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return values(a) < values(b); });
    Eigen::VectorXd ranks(n);
    Eigen::Index i = 0;
    while (i < n) {
        Eigen::Index j = i;
        while (j + 1 < n && values(order[j + 1]) == values(order[i])) ++j;
        const double shared = 0.5 * static_cast<double>(i + j) + 1.0;
        for (Eigen::Index k = i; k <= j; ++k) ranks(order[k]) = shared;
        i = j + 1;
    }
    return ranks;
}

PrccResult prcc(const Eigen::Ref<const Eigen::MatrixXd>& samples,
                const Eigen::Ref<const Eigen::VectorXd>& outputs, std::vector<std::string> names) {
    const Eigen::Index n = samples.rows();
    const Eigen::Index p = samples.cols();
    if (outputs.size() != n) {
        throw ValidationError("outputs", "length must equal the number of sample rows");
    }
    if (n <= p + 2) throw ValidationError("n_samples", "need more samples than parameters + 2");
    if (names.empty()) {
        for (Eigen::Index j = 0; j < p; ++j) names.push_back("x" + std::to_string(j));
    }
    if (static_cast<Eigen::Index>(names.size()) != p) {
        throw ValidationError("names", "one name per column is required");
    }

    Eigen::MatrixXd ranks(n, p);
    for (Eigen::Index j = 0; j < p; ++j) {
        const auto col = samples.col(j);
        if (col.maxCoeff() == col.minCoeff()) {
            throw DegenerateColumn(static_cast<std::size_t>(j),
                                   "column '" + names[static_cast<std::size_t>(j)] + "' is constant");
        }
        ranks.col(j) = average_ranks(col);
    }
    if (outputs.maxCoeff() == outputs.minCoeff()) {
        throw DegenerateColumn(static_cast<std::size_t>(p), "output is constant");
    }
    const Eigen::VectorXd out_ranks = average_ranks(outputs);

    PrccResult result;
    result.names = std::move(names);
    result.coefficients.reserve(static_cast<std::size_t>(p));
    Eigen::MatrixXd design(n, p);  // intercept + the p - 1 other columns
    for (Eigen::Index j = 0; j < p; ++j) {
        design.col(0).setOnes();
        for (Eigen::Index k = 0, c = 1; k < p; ++k) {
            if (k != j) design.col(c++) = ranks.col(k);
        }
        const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
        const Eigen::VectorXd rx = ranks.col(j) - design * qr.solve(ranks.col(j));
        const Eigen::VectorXd ry = out_ranks - design * qr.solve(out_ranks);
        const double denom = std::sqrt(rx.squaredNorm() * ry.squaredNorm());
        const double r = denom > 0.0 ? rx.dot(ry) / denom : 0.0;
        result.coefficients.push_back(std::clamp(r, -1.0, 1.0));
    }
    return result;
}

std::vector<TornadoRow> tornado_table(const PrccResult& result) {
    std::vector<TornadoRow> rows;
    for (std::size_t j = 0; j < result.coefficients.size(); ++j) {
        const double c = result.coefficients[j];
        rows.push_back({result.names[j], c, std::abs(c), result.significant(j)});
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const TornadoRow& a, const TornadoRow& b) { return a.abs_prcc > b.abs_prcc; });
    return rows;
}

R0Study r0_sensitivity_study(const SensitivitySpec& spec, const ModelParams& params,
                             const IncidenceFunctions& inc) {
    const auto& expected = r0_parameter_names();
    std::vector<std::string> names;
    for (const auto& d : spec.distributions) names.push_back(d.name);
    if (std::set<std::string>(names.begin(), names.end()) !=
            std::set<std::string>(expected.begin(), expected.end()) ||
        names.size() != expected.size()) {
        throw ValidationError("distributions",
                              "the R0 study varies exactly beta1, beta2, alpha, d_V, gamma, d_I");
    }

    R0Study study;
    study.samples = lhs_sample(spec);
    const Eigen::Index n = study.samples.rows();
    study.r0.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        ModelParams p = params;
        double beta1 = inc.f_prime_0();
        double beta2 = inc.g_prime_0();
        for (std::size_t j = 0; j < names.size(); ++j) {
            const double v = study.samples(i, static_cast<Eigen::Index>(j));
            const auto& name = names[j];
            if (name == "beta1") beta1 = v;
            else if (name == "beta2") beta2 = v;
            else if (name == "alpha") p.alpha = v;
            else if (name == "d_V") p.d_V = v;
            else if (name == "gamma") p.gamma = v;
            else if (name == "d_I") p.d_I = v;
        }
        const IncidenceFunctions row_inc{inc.f.with_slope(beta1), inc.g.with_slope(beta2)};
        study.r0(i) = compute_r0(p, row_inc).total;
    }
    study.prcc = prcc(study.samples, study.r0, names);
    study.table = tornado_table(study.prcc);
    return study;
}

}  // namespace vdyn
