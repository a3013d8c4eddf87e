#include "drlcox/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "drlcox/errors.hpp"
#include "drlcox/rng.hpp"

namespace drlcox {

Eigen::VectorXd synthetic_true_beta(int d, double beta_scale) {
    Eigen::VectorXd beta(d);
    for (int j = 0; j < d; ++j) {
        beta[j] = beta_scale * ((j % 2 == 0) ? 1.0 : -1.0) / std::sqrt(j + 1.0);
    }
    return beta;
}

SurvivalDataset make_synthetic(const SyntheticSpec& spec) {
    if (spec.n < 2) throw ValidationError("synthetic dataset needs at least 2 rows");
    if (spec.d < 1) throw ValidationError("synthetic dataset needs at least 1 feature");
    if (!(spec.censoring >= 0.0) || !(spec.censoring < 1.0)) {
        throw ValidationError("target censoring must lie in [0, 1)");
    }

    SplitMix64 rng(spec.seed);
    const int n = spec.n;
    const int d = spec.d;
    Eigen::MatrixXd x(n, d);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j) x(i, j) = rng.normal();
    }
    Eigen::VectorXd beta = synthetic_true_beta(d, spec.beta_scale);
    Eigen::VectorXd eta = x * beta;

    // Event times and raw censoring draws are fixed first so that the
    // censoring-rate calibration below is a deterministic function of them.
    Eigen::VectorXd t_event(n), censor_draw(n);
    for (int i = 0; i < n; ++i) {
        double u = 1.0 - rng.uniform();
        t_event[i] = std::max(-std::log(u) * std::exp(-eta[i]), 1e-12);
        censor_draw[i] = -std::log(1.0 - rng.uniform());
    }

    auto censored_fraction = [&](double rate) {
        int censored = 0;
        for (int i = 0; i < n; ++i) {
            if (censor_draw[i] / rate < t_event[i]) ++censored;
        }
        return static_cast<double>(censored) / n;
    };

    double rate = 0.0;
    if (spec.censoring > 0.0) {
        double lo = 1e-9, hi = 1e9;
        for (int it = 0; it < 200; ++it) {
            double mid = std::sqrt(lo * hi);
            if (censored_fraction(mid) < spec.censoring) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        rate = std::sqrt(lo * hi);
    }

    Eigen::VectorXd y(n);
    std::vector<int> events(static_cast<std::size_t>(n), 1);
    for (int i = 0; i < n; ++i) {
        double c = rate > 0.0 ? censor_draw[i] / rate
                              : std::numeric_limits<double>::infinity();
        if (c < t_event[i]) {
            y[i] = std::max(c, 1e-12);
            events[static_cast<std::size_t>(i)] = 0;
        } else {
            y[i] = t_event[i];
        }
    }
    return SurvivalDataset::from_rows(std::move(x), std::move(y), std::move(events));
}

}  // namespace drlcox
