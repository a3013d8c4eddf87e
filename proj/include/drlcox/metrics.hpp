#pragma once

#include <Eigen/Dense>
#include <vector>

#include "drlcox/data.hpp"

namespace drlcox {

// Harrell concordance counts. A pair (i, j) is comparable iff y_i < y_j
// and subject i had an event (duration ties are never comparable). When
// comparable == 0 the index is undefined and c_index is NaN, never 0.5.
struct ConcordanceResult {
    double c_index = 0.0;
    long long concordant = 0;
    long long discordant = 0;
    long long tied_risk = 0;
    long long comparable = 0;
    bool defined() const { return comparable > 0; }
};

// Scores must align with the canonical order of ds; higher score = higher
// risk, so the shorter-duration member of a comparable pair should score
// higher. Tied scores count one half.
ConcordanceResult c_index(const SurvivalDataset& ds,
                          const Eigen::VectorXd& risk_scores);

enum class KmTarget { event, censoring };

// Product-limit curve over the distinct times at which the target outcome
// occurs. Survival before the first listed time is 1.
struct KaplanMeierCurve {
    std::vector<double> times;
    std::vector<double> survival;

    // Right-continuous step evaluation S(t).
    double at(double t) const;
    // Left limit S(t-): the product over listed times strictly below t.
    double before(double t) const;
};

KaplanMeierCurve kaplan_meier(const SurvivalDataset& ds, KmTarget target);

// Integrated cumulative/dynamic AUC. At each grid time t, cases are test
// subjects with y_i <= t and an event, controls those with y_j > t; each
// case carries the inverse-probability-of-censoring weight 1/G(y_i-), with
// G the censoring Kaplan-Meier fitted on ds_train_for_weights. AUC values
// are integrated against the event-time mass of the test event curve
// (trapezoidal in F = 1 - S) and normalized by the total mass covered.
struct IaucResult {
    double iauc = 0.0;
    std::vector<double> time_grid;
    std::vector<double> auc_at_time;
    // Set when the grid was cut short because the censoring curve reached
    // zero before the last candidate time.
    bool truncated = false;
};

IaucResult iauc(const SurvivalDataset& ds_test, const Eigen::VectorXd& risk_scores,
                const SurvivalDataset& ds_train_for_weights);

}  // namespace drlcox
