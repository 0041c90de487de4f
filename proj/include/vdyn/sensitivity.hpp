// Latin hypercube sampling and partial rank correlation coefficients for the
// basic reproduction number.
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vdyn/model.hpp"

namespace vdyn {

/// Normal(mean, sd) truncated to (0, inf). sd = 0 degenerates to the mean.
struct ParamDistribution {
    std::string name;
    double mean = 0.0;
    double sd = 0.0;

    void validate() const;
    /// Inverse CDF of the truncated distribution, p in (0, 1).
    double quantile(double p) const;
    /// CDF of the truncated distribution.
    double cdf(double x) const;
};

struct SensitivitySpec {
    std::vector<ParamDistribution> distributions;
    std::size_t n_samples = 1000;
    std::uint64_t seed = 42;

    /// n_samples >= 10, distinct names, valid distributions.
    void validate() const;
};

/// Names of the six parameters varied in the R0 study, in column order.
const std::vector<std::string>& r0_parameter_names();

/// Nominal values of the six R0 parameters taken from `params` and the
/// incidence slopes, each with sd = sd_fraction * nominal.
SensitivitySpec default_r0_spec(const ModelParams& params, const IncidenceFunctions& inc,
                                double sd_fraction = 0.1, std::size_t n_samples = 1000,
                                std::uint64_t seed = 42);

/// n_samples x n_params matrix. Column j holds one draw from each of
/// n_samples equiprobable strata of distribution j, in an independent random
/// order. Bit-reproducible for a given spec.
Eigen::MatrixXd lhs_sample(const SensitivitySpec& spec);

/// Average ranks (1-based) with ties sharing the mean rank.
Eigen::VectorXd average_ranks(const Eigen::Ref<const Eigen::VectorXd>& values);

struct PrccResult {
    std::vector<std::string> names;
    std::vector<double> coefficients;
    double significance = 0.5;

    bool significant(std::size_t j) const { return std::abs(coefficients[j]) > significance; }
};

/// Rank-transforms inputs and output, partials out the other inputs by OLS
/// with intercept, and correlates the residuals. Throws DegenerateColumn when
/// an input column or the output is constant.
PrccResult prcc(const Eigen::Ref<const Eigen::MatrixXd>& samples,
                const Eigen::Ref<const Eigen::VectorXd>& outputs,
                std::vector<std::string> names = {});

struct TornadoRow {
    std::string parameter;
    double prcc = 0.0;
    double abs_prcc = 0.0;
    bool significant = false;
};

/// Rows sorted by |PRCC| descending (stable on ties).
std::vector<TornadoRow> tornado_table(const PrccResult& result);

struct R0Study {
    Eigen::MatrixXd samples;
    Eigen::VectorXd r0;
    PrccResult prcc;
    std::vector<TornadoRow> table;
};

/// Samples the six R0 parameters, evaluates R0 on every row with the remaining
/// fields of `params` fixed, and ranks the parameters by PRCC. beta1 and beta2
/// replace the slopes of f and g.
R0Study r0_sensitivity_study(const SensitivitySpec& spec, const ModelParams& params,
                             const IncidenceFunctions& inc);

}  // namespace vdyn
