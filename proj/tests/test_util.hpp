#pragma once

// Small random-dataset builders shared across the test binaries.

#include <Eigen/Dense>
#include <vector>

#include "drlcox/data.hpp"
#include "drlcox/rng.hpp"

namespace testutil {

// Random dataset with controllable tie mass and censoring. Durations are
// drawn from a small integer range when `tie_prob` > 0 so ties actually
// occur; otherwise they are continuous (almost surely distinct).
inline drlcox::SurvivalDataset random_dataset(drlcox::SplitMix64& rng, int n,
                                              int d, double tie_prob = 0.5,
                                              double censor_prob = 0.3) {
    Eigen::MatrixXd x(n, d);
    Eigen::VectorXd y(n);
    std::vector<int> events(static_cast<std::size_t>(n));
    bool any_event = false;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j) x(i, j) = rng.normal();
        if (rng.uniform() < tie_prob) {
            y[i] = 1.0 + static_cast<double>(rng.below(5));
        } else {
            y[i] = 0.5 + 10.0 * rng.uniform();
        }
        events[static_cast<std::size_t>(i)] = rng.uniform() < censor_prob ? 0 : 1;
        any_event |= events[static_cast<std::size_t>(i)] == 1;
    }
    if (!any_event) events[0] = 1;
    return drlcox::SurvivalDataset::from_rows(x, y, events);
}

inline Eigen::VectorXd random_vec(drlcox::SplitMix64& rng, int d,
                                  double scale = 1.0) {
    Eigen::VectorXd v(d);
    for (int i = 0; i < d; ++i) v[i] = scale * rng.normal();
    return v;
}

}  // namespace testutil
