#pragma once

#include <Eigen/Dense>

#include "drlcox/data.hpp"

namespace drlcox::detail {

// Streaming statistics over canonical prefixes of a dataset for a fixed
// coefficient vector. With eta_m = beta . x_m and the canonical decreasing
// duration order, the prefix [0, k] is the risk set of row k, so
//   lse[k]  = log sum_{m<=k} exp(eta_m)
//   wavg.col(k) = sum_{m<=k} exp(eta_m - lse[k]) * x_m
// are the log-partition and the exponentially weighted covariate average of
// that risk set. Both are computed in one pass with rescaling, so they stay
// finite for any eta that itself is finite.
struct PrefixStats {
    Eigen::VectorXd eta;
    Eigen::VectorXd lse;
    Eigen::MatrixXd wavg;  // d x N; allocated only when requested
};

inline PrefixStats compute_prefix_stats(const SurvivalDataset& ds,
                                        const Eigen::VectorXd& beta,
                                        bool need_wavg) {
    const int n = ds.size();
    const int d = ds.num_features();
    PrefixStats ps;
    ps.eta = ds.covariates() * beta;
    ps.lse.resize(n);
    if (need_wavg) ps.wavg.resize(d, n);

    double lse = ps.eta[0];
    ps.lse[0] = lse;
    Eigen::VectorXd u;
    if (need_wavg) {
        u = ds.covariates().row(0).transpose();
        ps.wavg.col(0) = u;
    }
    for (int k = 1; k < n; ++k) {
        double e = ps.eta[k];
        double hi = std::max(lse, e);
        double next = hi + std::log(std::exp(lse - hi) + std::exp(e - hi));
        if (need_wavg) {
            u = std::exp(lse - next) * u +
                std::exp(e - next) * ds.covariates().row(k).transpose();
            ps.wavg.col(k) = u;
        }
        lse = next;
        ps.lse[k] = lse;
    }
    return ps;
}

// log(1 + exp(-u)) for u >= 0 without overflow; equals softplus(u) - u.
inline double log1p_exp_neg(double u) { return std::log1p(std::exp(-u)); }

}  // namespace drlcox::detail
