#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "drlcox/data.hpp"
#include "drlcox/optim.hpp"

namespace drlcox {

// Configuration of the distributionally robust fit: ambiguity radius
// epsilon, penalty norm order q (the Hölder conjugate of the ground-metric
// order), constraint window gamma, final smoothing temperature tau, and
// solver controls.
struct DrlConfig {
    double epsilon = 0.1;
    NormOrder q = NormOrder::l2;
    int gamma = 3;
    double tau = 1e-4;
    double tol = 1e-8;
    int max_iter = 1000;
};

void validate_drl_config(const DrlConfig& cfg);

struct DrlModel {
    Eigen::VectorXd beta;
    double alpha = 0.0;      // dual slope on duration gaps, units 1/time
    double objective = 0.0;  // hard objective at the solution
    DrlConfig config;
    SolveReport report;
    std::string note;  // non-empty for degenerate cases (e.g. no events)
};

// The per-subject loss with the extra self-exponential term: for subject i
// with event flag 1, log(exp(b.x_i) + sum_{j: y_j >= y_i} exp(b.x_j)) - b.x_i;
// zero for censored subjects.
double modified_individual_loss(const SurvivalDataset& ds,
                                const Eigen::VectorXd& beta, int i);

// Hard (exact-max) robust objective:
//   epsilon * ||(beta, alpha)||_q
//   + (1/N) sum_i zeta_i * max_{k in window(i)} g_ik
// where g_ik = log(exp(eta_i) + S_{r(k)}) - eta_i - alpha * (y_i - y_k),
// window(i) = {i, ..., min(i + gamma - 1, N-1)} over canonical positions,
// S_{r(k)} is the prefix exponential sum through the full tie run of y_k,
// so that g_ii equals the modified individual loss of i.
double drl_objective(const SurvivalDataset& ds, const Eigen::VectorXd& beta,
                     double alpha, const DrlConfig& cfg);

// Smoothed objective: each max is replaced by tau * log sum_k exp(g_ik/tau).
// `value` includes the epsilon-norm term; `smooth_part` excludes it. The
// gradient (in (beta, alpha), length d+1) covers `value` when q = 2 (the l2
// norm is smooth away from 0, subgradient 0 taken at 0) and `smooth_part`
// when q is 1 or inf (those norms enter the fitter through their proximal
// operator instead).
struct DrlSmoothedEval {
    double value = 0.0;
    double smooth_part = 0.0;
    Eigen::VectorXd gradient;
};

DrlSmoothedEval drl_objective_smoothed(const SurvivalDataset& ds,
                                       const Eigen::VectorXd& beta, double alpha,
                                       const DrlConfig& cfg);

// Minimizes the smoothed objective jointly in (beta, alpha) with temperature
// continuation tau in {1, 0.1, 0.01, ...} down to cfg.tau, warm-starting each
// stage (optionally from `warm_start`, length d+1). The reported objective is
// the hard objective at the final iterate.
DrlModel fit_drl_cox(const SurvivalDataset& ds, const DrlConfig& cfg,
                     const Eigen::VectorXd* warm_start = nullptr);

struct RadiusSuggestion {
    double b_alpha = 0.0;
    double significance = 0.0;
    DataDiameter diameter_used;
    bool approximate = false;
};

// Finite-sample radius threshold: diameter * sqrt(log(1/significance) / N).
// Radii at or above this value carry the model's generalization guarantee at
// confidence 1 - significance.
RadiusSuggestion suggest_radius(const SurvivalDataset& ds, double significance,
                                NormOrder p);

struct EpsilonCvRow {
    double epsilon = 0.0;
    double mean_c_index = 0.0;
    int folds_scored = 0;
};

struct EpsilonCvResult {
    double best_epsilon = 0.0;
    std::vector<EpsilonCvRow> table;
};

// Seeded k-fold cross-validation over an epsilon grid scored by held-out
// C-index; ties broken toward the larger (more robust) epsilon.
EpsilonCvResult cross_validate_epsilon(const SurvivalDataset& ds,
                                       const std::vector<double>& grid,
                                       int folds, const DrlConfig& cfg_template,
                                       std::uint64_t seed);

// JSON round trip for fitted models (keys: beta, alpha, epsilon, q, gamma,
// objective, converged). Values survive a round trip to 1e-12.
std::string drl_model_to_json(const DrlModel& m);
DrlModel drl_model_from_json(const std::string& text);

}  // namespace drlcox
