#include "drlcox/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "drlcox/errors.hpp"

namespace drlcox {

ConcordanceResult c_index(const SurvivalDataset& ds,
                          const Eigen::VectorXd& risk_scores) {
    const int n = ds.size();
    if (static_cast<int>(risk_scores.size()) != n) {
        throw ValidationError("risk score vector length does not match dataset size");
    }
    ConcordanceResult out;
    for (int i = 0; i < n; ++i) {
        if (!ds.events()[static_cast<std::size_t>(i)]) continue;
        for (int j = 0; j < n; ++j) {
            if (ds.durations()[i] >= ds.durations()[j]) continue;
            ++out.comparable;
            if (risk_scores[i] > risk_scores[j]) {
                ++out.concordant;
            } else if (risk_scores[i] < risk_scores[j]) {
                ++out.discordant;
            } else {
                ++out.tied_risk;
            }
        }
    }
    out.c_index = out.comparable > 0
                      ? (out.concordant + 0.5 * out.tied_risk) / out.comparable
                      : std::numeric_limits<double>::quiet_NaN();
    return out;
}

double KaplanMeierCurve::at(double t) const {
    // Last listed time <= t.
    auto it = std::upper_bound(times.begin(), times.end(), t);
    if (it == times.begin()) return 1.0;
    return survival[static_cast<std::size_t>(it - times.begin()) - 1];
}

double KaplanMeierCurve::before(double t) const {
    auto it = std::lower_bound(times.begin(), times.end(), t);
    if (it == times.begin()) return 1.0;
    return survival[static_cast<std::size_t>(it - times.begin()) - 1];
}

KaplanMeierCurve kaplan_meier(const SurvivalDataset& ds, KmTarget target) {
    const int n = ds.size();
    KaplanMeierCurve curve;
    // Canonical order is decreasing, so walking tie runs from the back
    // visits times in ascending order; the at-risk count at a run's time is
    // the run's end position + 1 (everything before it lasted at least as
    // long).
    double s = 1.0;
    int k = n - 1;
    std::vector<std::pair<double, double>> steps;  // (time, factor) ascending
    while (k >= 0) {
        int end = ds.risk_set_end()[static_cast<std::size_t>(k)];
        int start = k;
        while (start > 0 &&
               ds.risk_set_end()[static_cast<std::size_t>(start - 1)] == end) {
            --start;
        }
        int hits = 0;
        for (int i = start; i <= end; ++i) {
            int ev = ds.events()[static_cast<std::size_t>(i)];
            hits += (target == KmTarget::event) ? ev : 1 - ev;
        }
        if (hits > 0) {
            steps.emplace_back(ds.durations()[end],
                               1.0 - static_cast<double>(hits) / (end + 1));
        }
        k = start - 1;
    }
    for (auto& [t, factor] : steps) {
        s *= factor;
        curve.times.push_back(t);
        curve.survival.push_back(s);
    }
    return curve;
}

IaucResult iauc(const SurvivalDataset& ds_test, const Eigen::VectorXd& risk_scores,
                const SurvivalDataset& ds_train_for_weights) {
    const int n = ds_test.size();
    if (static_cast<int>(risk_scores.size()) != n) {
        throw ValidationError("risk score vector length does not match dataset size");
    }

    KaplanMeierCurve censor_km =
        kaplan_meier(ds_train_for_weights, KmTarget::censoring);
    KaplanMeierCurve event_km = kaplan_meier(ds_test, KmTarget::event);

    // Candidate grid: distinct test event times that leave at least one
    // control (strictly below the longest follow-up) and sit at or below
    // the 90th percentile of follow-up, where censoring weights are tame.
    std::vector<double> sorted_durations(ds_test.durations().data(),
                                         ds_test.durations().data() + n);
    std::sort(sorted_durations.begin(), sorted_durations.end());
    double q90 = sorted_durations[static_cast<std::size_t>(
        std::floor(0.9 * (n - 1)))];
    double max_duration = sorted_durations.back();

    std::vector<double> candidates;
    for (int i = n - 1; i >= 0; --i) {  // ascending duration
        if (!ds_test.events()[static_cast<std::size_t>(i)]) continue;
        double t = ds_test.durations()[i];
        if (!(t < max_duration) || t > q90) continue;
        if (candidates.empty() || candidates.back() != t) candidates.push_back(t);
    }
    if (candidates.size() < 2) {
        throw ComputeError("iAUC needs at least two usable distinct event times");
    }

    IaucResult out;
    for (double t : candidates) {
        double num = 0.0, wsum = 0.0;
        long long controls = 0;
        bool weight_blowup = false;
        for (int i = 0; i < n && !weight_blowup; ++i) {
            if (!ds_test.events()[static_cast<std::size_t>(i)] ||
                ds_test.durations()[i] > t) {
                continue;
            }
            double g = censor_km.before(ds_test.durations()[i]);
            if (g <= 0.0) {
                weight_blowup = true;
                break;
            }
            double w = 1.0 / g;
            wsum += w;
            for (int j = 0; j < n; ++j) {
                if (!(ds_test.durations()[j] > t)) continue;
                if (risk_scores[i] > risk_scores[j]) {
                    num += w;
                } else if (risk_scores[i] == risk_scores[j]) {
                    num += 0.5 * w;
                }
            }
        }
        if (weight_blowup) {
            out.truncated = true;
            break;
        }
        for (int j = 0; j < n; ++j) {
            if (ds_test.durations()[j] > t) ++controls;
        }
        out.time_grid.push_back(t);
        out.auc_at_time.push_back(num / (wsum * controls));
    }

    if (out.time_grid.size() < 2) {
        throw ComputeError(
            "iAUC grid collapsed below two points after weight truncation");
    }

    // Trapezoid in F = 1 - S over the surviving grid, normalized by the
    // event mass the grid covers.
    double acc = 0.0;
    double f_prev = 1.0 - event_km.at(out.time_grid.front());
    double f_first = f_prev;
    for (std::size_t k = 1; k < out.time_grid.size(); ++k) {
        double f_k = 1.0 - event_km.at(out.time_grid[k]);
        acc += 0.5 * (out.auc_at_time[k] + out.auc_at_time[k - 1]) * (f_k - f_prev);
        f_prev = f_k;
    }
    double mass = f_prev - f_first;
    if (!(mass > 0.0)) {
        throw ComputeError("iAUC integration weights vanished");
    }
    out.iauc = acc / mass;
    return out;
}

}  // namespace drlcox
