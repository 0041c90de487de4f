#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "test_support.hpp"
#include "vdyn/errors.hpp"
#include "vdyn/sensitivity.hpp"

using namespace vdyn;

namespace {

/// PRCC through the inverse of the rank correlation matrix of [X y].
std::vector<double> prcc_by_inverse(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    const Eigen::Index n = x.rows();
    const Eigen::Index p = x.cols();
    Eigen::MatrixXd r(n, p + 1);
    for (Eigen::Index j = 0; j < p; ++j) r.col(j) = average_ranks(x.col(j));
    r.col(p) = average_ranks(y);
    const Eigen::MatrixXd centred = r.rowwise() - r.colwise().mean();
    const Eigen::MatrixXd cov = centred.transpose() * centred;
    const Eigen::VectorXd sd = cov.diagonal().cwiseSqrt();
    const Eigen::MatrixXd corr = cov.cwiseQuotient(sd * sd.transpose());
    const Eigen::MatrixXd inv = corr.inverse();
    std::vector<double> out;
    for (Eigen::Index j = 0; j < p; ++j) out.push_back(-inv(j, p) / std::sqrt(inv(j, j) * inv(p, p)));
    return out;
}

Eigen::MatrixXd uniform_matrix(std::mt19937_64& rng, Eigen::Index n, Eigen::Index p) {
    Eigen::MatrixXd m(n, p);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < p; ++j) m(i, j) = test::uniform(rng, 0.0, 1.0);
    return m;
}

}  // namespace

TEST_CASE("truncated normal") {
    const ParamDistribution d{"x", 10.0, 1.0};
    CHECK(d.quantile(0.5) == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(d.cdf(d.quantile(0.3)) == doctest::Approx(0.3).epsilon(1e-12));

    // Heavy truncation: every quantile stays positive.
    const ParamDistribution wide{"y", 1.0, 5.0};
    for (double p : {1e-9, 0.01, 0.5, 0.99}) {
        CHECK(wide.quantile(p) > 0.0);
        CHECK(wide.cdf(wide.quantile(p)) == doctest::Approx(p).epsilon(1e-9));
    }
    CHECK(wide.cdf(0.0) == 0.0);

    const ParamDistribution point{"z", 3.5, 0.0};
    CHECK(point.quantile(0.01) == 3.5);
    CHECK(point.quantile(0.99) == 3.5);

    CHECK_THROWS_AS((ParamDistribution{"bad", -1.0, 1.0}.validate()), ValidationError);
    CHECK_THROWS_AS((ParamDistribution{"bad", 1.0, -1.0}.validate()), ValidationError);
}

TEST_CASE("Latin hypercube stratification") {
    SensitivitySpec spec;
    spec.distributions = {{"a", 5.0, 1.0}, {"b", 1e-10, 1e-11}, {"c", 2.0, 0.0}};
    spec.n_samples = 10;
    const Eigen::MatrixXd m = lhs_sample(spec);
    REQUIRE(m.rows() == 10);
    REQUIRE(m.cols() == 3);
    for (int j = 0; j < 2; ++j) {
        std::set<int> deciles;
        for (int i = 0; i < 10; ++i) deciles.insert(static_cast<int>(spec.distributions[j].cdf(m(i, j)) * 10.0));
        CHECK(deciles.size() == 10);
    }
    for (int i = 0; i < 10; ++i) CHECK(m(i, 2) == 2.0);

    CHECK(lhs_sample(spec) == m);
    spec.seed = 43;
    CHECK(lhs_sample(spec) != m);

    spec.n_samples = 5;
    CHECK_THROWS_AS(spec.validate(), ValidationError);
    spec.n_samples = 10;
    spec.distributions[1].name = "a";
    CHECK_THROWS_AS(spec.validate(), ValidationError);
}

TEST_CASE("average ranks share ties") {
    Eigen::VectorXd v(5);
    v << 3.0, 1.0, 3.0, 2.0, 7.0;
    const Eigen::VectorXd r = average_ranks(v);
    CHECK(r(0) == 3.5);
    CHECK(r(1) == 1.0);
    CHECK(r(2) == 3.5);
    CHECK(r(3) == 2.0);
    CHECK(r(4) == 5.0);
}

TEST_CASE("PRCC basic properties") {
    std::mt19937_64 rng(8);
    const Eigen::MatrixXd x = uniform_matrix(rng, 200, 3);

    SUBCASE("monotone output in one input") {
        const Eigen::VectorXd y = x.col(1).array().cube();
        const PrccResult r = prcc(x, y);
        CHECK(r.coefficients[1] == doctest::Approx(1.0).epsilon(1e-9));
        const Eigen::VectorXd down = -x.col(0).array().exp();
        CHECK(prcc(x, down).coefficients[0] == doctest::Approx(-1.0).epsilon(1e-9));
    }
    SUBCASE("rank invariance") {
        Eigen::VectorXd y(200);
        for (int i = 0; i < 200; ++i) y(i) = x(i, 0) + 0.5 * x(i, 1) - 0.3 * x(i, 2) + test::uniform(rng, 0.0, 0.2);
        const PrccResult base = prcc(x, y);
        const PrccResult expo = prcc(x, y.array().exp().matrix());
        Eigen::MatrixXd scaled = x;
        scaled.col(0) *= 1e6;
        scaled.col(2) = (scaled.col(2).array() + 3.0).log();
        const PrccResult rescaled = prcc(scaled, y);
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(std::abs(expo.coefficients[j] - base.coefficients[j]) <= 1e-12);
            CHECK(std::abs(rescaled.coefficients[j] - base.coefficients[j]) <= 1e-12);
        }
        const auto oracle = prcc_by_inverse(x, y);
        for (std::size_t j = 0; j < 3; ++j) CHECK(base.coefficients[j] == doctest::Approx(oracle[j]).epsilon(1e-10));
        CHECK(base.coefficients[0] > 0.0);
        CHECK(base.coefficients[2] < 0.0);
    }
    SUBCASE("degenerate inputs") {
        Eigen::MatrixXd c = x;
        c.col(2).setConstant(4.0);
        try {
            prcc(c, x.col(0));
            FAIL("expected DegenerateColumn");
        } catch (const DegenerateColumn& e) {
            CHECK(e.column() == 2);
        }
        CHECK_THROWS_AS(prcc(x, Eigen::VectorXd::Constant(200, 1.0)), DegenerateColumn);
        CHECK_THROWS_AS(prcc(x.topRows(5), x.col(0).head(5)), ValidationError);
    }
}

TEST_CASE("null data gives small PRCC") {
    std::mt19937_64 rng(1234);
    for (int trial = 0; trial < 5; ++trial) {
        const Eigen::MatrixXd x = uniform_matrix(rng, 1000, 6);
        Eigen::VectorXd y(1000);
        for (auto& v : y) v = test::uniform(rng, 0.0, 1.0);
        for (double c : prcc(x, y).coefficients) CHECK(std::abs(c) < 0.15);
    }
}

TEST_CASE("R0 study sign pattern and tornado order") {
    const Scenario b = scenario_b();
    const SensitivitySpec spec = default_r0_spec(b.params, b.incidence());
    const R0Study study = r0_sensitivity_study(spec, b.params, b.incidence());
    REQUIRE(study.prcc.names == r0_parameter_names());
    const std::vector<int> signs = {+1, +1, +1, -1, -1, -1};
    for (std::size_t j = 0; j < 6; ++j) CHECK(study.prcc.coefficients[j] * signs[j] > 0.0);
    for (std::size_t i = 1; i < study.table.size(); ++i) CHECK(study.table[i - 1].abs_prcc >= study.table[i].abs_prcc);

    const R0Study again = r0_sensitivity_study(spec, b.params, b.incidence());
    CHECK(again.prcc.coefficients == study.prcc.coefficients);

    // R0 of each sampled row matches the formula.
    for (Eigen::Index i = 0; i < 5; ++i) {
        ModelParams p = b.params;
        p.alpha = study.samples(i, 2);
        p.d_V = study.samples(i, 3);
        p.gamma = study.samples(i, 4);
        p.d_I = study.samples(i, 5);
        const double r0 = compute_r0(p, IncidenceFunctions::linear(study.samples(i, 0), study.samples(i, 1))).total;
        CHECK(study.r0(i) == doctest::Approx(r0).epsilon(1e-14));
    }
}
