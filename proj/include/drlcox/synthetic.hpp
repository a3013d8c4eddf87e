#pragma once

#include <cstdint>

#include "drlcox/data.hpp"

namespace drlcox {

// Proportional-hazards generator: covariates are i.i.d. standard normal,
// event times are exponential with rate exp(beta_true . x), and censoring
// times are exponential with a rate calibrated (by bisection against the
// realized draws) so the censored fraction lands on `censoring`.
struct SyntheticSpec {
    int n = 200;
    int d = 5;
    double censoring = 0.4;   // target censored fraction in [0, 1)
    double beta_scale = 0.7;  // magnitude of the leading true coefficient
    std::uint64_t seed = 0;
};

// True coefficients: alternating sign, decaying as 1/sqrt(j+1), scaled so
// the first entry equals beta_scale.
Eigen::VectorXd synthetic_true_beta(int d, double beta_scale);

SurvivalDataset make_synthetic(const SyntheticSpec& spec);

}  // namespace drlcox
