#pragma once

#include <Eigen/Dense>
#include <string>

#include "drlcox/data.hpp"
#include "drlcox/optim.hpp"

namespace drlcox {

enum class PenaltyKind { none, ridge, lasso, elastic_net };

PenaltyKind parse_penalty_kind(const std::string& s);
std::string penalty_kind_name(PenaltyKind k);

struct CoxPenalty {
    PenaltyKind kind = PenaltyKind::none;
    double lambda = 0.0;
    double l1_ratio = 0.5;  // elastic net only: weight on the l1 part
};

struct CoxFitConfig {
    CoxPenalty penalty;
    double tol = 1e-8;
    int max_iter = 500;
    // Newton is used up to this dimension (dense Hessian), L-BFGS above it.
    int newton_max_dim = 200;
    // Divergence guard: fitting stops unconverged once any coefficient
    // exceeds this magnitude (monotone likelihood / data separation).
    double beta_cap = 1e3;
};

struct CoxModel {
    Eigen::VectorXd beta;
    double objective = 0.0;  // penalized objective at beta
    SolveReport report;
    CoxPenalty penalty;
};

// Negative log partial likelihood with Breslow handling of ties: subjects
// with equal durations appear in each other's risk sets. Summed over
// events, not averaged.
double cox_loss(const SurvivalDataset& ds, const Eigen::VectorXd& beta);

// Loss value and analytic gradient.
SmoothEval cox_loss_gradient(const SurvivalDataset& ds, const Eigen::VectorXd& beta);

// Fits the (optionally penalized) model. Penalties:
//   ridge        loss + lambda * ||beta||_2^2
//   lasso        loss + lambda * ||beta||_1
//   elastic_net  loss + lambda * (l1_ratio * ||beta||_1
//                                 + (1 - l1_ratio) * ||beta||_2^2)
// Smooth cases use Newton (dense Hessian) up to newton_max_dim and L-BFGS
// beyond; l1-bearing cases use proximal gradient.
CoxModel fit_cox(const SurvivalDataset& ds, const CoxFitConfig& cfg = {});

// Linear risk scores x . beta in the dataset's canonical order. Higher
// score means higher hazard.
Eigen::VectorXd risk_scores(const SurvivalDataset& ds, const Eigen::VectorXd& beta);

}  // namespace drlcox
