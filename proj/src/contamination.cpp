#include "drlcox/contamination.hpp"

#include <algorithm>
#include <cmath>

#include "drlcox/errors.hpp"
#include "drlcox/rng.hpp"

namespace drlcox {

ShiftTarget parse_shift_target(const std::string& s) {
    if (s == "train") return ShiftTarget::train;
    if (s == "test") return ShiftTarget::test;
    if (s == "both") return ShiftTarget::both;
    throw ValidationError("shift target must be train, test or both (got '" + s + "')");
}

std::string shift_target_name(ShiftTarget t) {
    switch (t) {
        case ShiftTarget::train: return "train";
        case ShiftTarget::test: return "test";
        case ShiftTarget::both: return "both";
    }
    return "?";
}

namespace {

void require_standardized(const SurvivalDataset& ds, const char* op) {
    if (!ds.standardization()) {
        throw ValidationError(std::string(op) +
                              " expects a standardized dataset; run standardize() first");
    }
}

}  // namespace

SurvivalDataset apply_shift(const SurvivalDataset& ds, const ShiftSpec& spec) {
    require_standardized(ds, "apply_shift");
    const int d = ds.num_features();
    if (spec.intensity < 1 || spec.intensity > d) {
        throw ValidationError("shift intensity must lie in [1, " + std::to_string(d) +
                              "]");
    }
    SplitMix64 rng(spec.seed);
    std::vector<int> cols = sample_without_replacement(d, spec.intensity, rng);
    std::sort(cols.begin(), cols.end());

    Eigen::MatrixXd x = ds.covariates();
    for (int j : cols) {
        for (int i = 0; i < ds.size(); ++i) {
            x(i, j) = rng.normal();
        }
    }
    return ds.with_covariates(std::move(x));
}

OutlierResult inject_outliers(const SurvivalDataset& ds, const OutlierSpec& spec) {
    require_standardized(ds, "inject_outliers");
    const int n = ds.size();
    const int d = ds.num_features();
    if (!(spec.ratio > 0.0) || !(spec.ratio < 1.0)) {
        throw ValidationError("outlier ratio must lie strictly between 0 and 1");
    }
    if (spec.severity < 1 || spec.severity > 5) {
        throw ValidationError("outlier severity must lie in {1..5}");
    }
    if (!(spec.feature_fraction > 0.0) || spec.feature_fraction > 1.0) {
        throw ValidationError("feature fraction must lie in (0, 1]");
    }
    const int rows = static_cast<int>(std::ceil(spec.ratio * n));
    const int cols_per_row = static_cast<int>(std::ceil(spec.feature_fraction * d));
    if (rows == 0) {
        throw ValidationError("outlier ratio selects zero rows; increase ratio or N");
    }

    SplitMix64 rng(spec.seed);
    std::vector<int> flagged = sample_without_replacement(n, rows, rng);
    std::sort(flagged.begin(), flagged.end());

    std::vector<int> mask(static_cast<std::size_t>(n), 0);
    Eigen::MatrixXd x = ds.covariates();
    for (int r : flagged) {
        mask[static_cast<std::size_t>(r)] = 1;
        std::vector<int> cols = sample_without_replacement(d, cols_per_row, rng);
        std::sort(cols.begin(), cols.end());
        // Base draws are severity-independent; severity only scales them.
        for (int c : cols) {
            x(r, c) += spec.severity * rng.normal();
        }
    }
    return OutlierResult{ds.with_covariates(std::move(x)), std::move(mask)};
}

}  // namespace drlcox
