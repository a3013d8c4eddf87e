#pragma once

#include <Eigen/Dense>
#include <functional>

#include "drlcox/data.hpp"

namespace drlcox {

// Value and gradient of a smooth objective at a point.
struct SmoothEval {
    double value = 0.0;
    Eigen::VectorXd gradient;
};

using SmoothObjective = std::function<SmoothEval(const Eigen::VectorXd&)>;

struct SolveOptions {
    double tol = 1e-8;       // sup-norm gradient / prox-residual threshold
    int max_iter = 1000;
    int lbfgs_memory = 10;
    // Optional secondary stop: relative objective change below this value
    // counts as converged (0 disables). Used by coordinate-free lasso paths
    // where the prox residual can stall on flat regions.
    double obj_change_tol = 0.0;
};

struct SolveReport {
    bool converged = false;
    int iterations = 0;
    double final_value = 0.0;
    double final_residual = 0.0;  // gradient norm or scaled prox residual
};

struct SolveResult {
    Eigen::VectorXd x;
    SolveReport report;
};

// Limited-memory BFGS (memory 10) with Armijo backtracking line search
// (sufficient-decrease constant 1e-4, step halving). Converges when the
// sup norm of the gradient drops below tol.
SolveResult minimize_smooth(const SmoothObjective& f, Eigen::VectorXd x0,
                            const SolveOptions& opts = {});

// Proximal operator of t * weight * ||.||_q.
//   q = 1:   componentwise soft threshold
//   q = 2:   block shrinkage toward the origin
//   q = inf: Moreau decomposition via projection onto the l1 ball
Eigen::VectorXd prox_norm(const Eigen::VectorXd& v, NormOrder q, double t_weight);

// Euclidean projection onto {x : ||x||_1 <= radius} (sort-based).
Eigen::VectorXd project_l1_ball(const Eigen::VectorXd& v, double radius);

// Proximal gradient for f(x) + weight * ||x||_q with backtracking on the
// quadratic upper bound. Converges when ||x - prox_step(x)||_inf / t < tol.
// Every accepted step decreases the composite objective.
SolveResult minimize_composite(const SmoothObjective& f, Eigen::VectorXd x0,
                               NormOrder q, double weight,
                               const SolveOptions& opts = {});

}  // namespace drlcox
