#include "drlcox/cox.hpp"

#include <cmath>

#include "drlcox/errors.hpp"
#include "prefix_stats.hpp"

namespace drlcox {

PenaltyKind parse_penalty_kind(const std::string& s) {
    if (s == "none") return PenaltyKind::none;
    if (s == "ridge") return PenaltyKind::ridge;
    if (s == "lasso") return PenaltyKind::lasso;
    if (s == "enet" || s == "elastic_net") return PenaltyKind::elastic_net;
    throw ValidationError("unknown penalty kind '" + s + "'");
}

std::string penalty_kind_name(PenaltyKind k) {
    switch (k) {
        case PenaltyKind::none: return "none";
        case PenaltyKind::ridge: return "ridge";
        case PenaltyKind::lasso: return "lasso";
        case PenaltyKind::elastic_net: return "elastic_net";
    }
    return "?";
}

namespace {

// Number of events whose risk set ends at each canonical index, plus the
// event-row sums that the loss and gradient subtract off.
struct EventBuckets {
    std::vector<int> count;     // events with risk_set_end == k
    double eta_sum = 0.0;       // sum over events of eta_i
    Eigen::VectorXd x_sum;      // sum over events of x_i
};

EventBuckets make_buckets(const SurvivalDataset& ds, const Eigen::VectorXd& eta) {
    EventBuckets b;
    b.count.assign(static_cast<std::size_t>(ds.size()), 0);
    b.x_sum = Eigen::VectorXd::Zero(ds.num_features());
    for (int i = 0; i < ds.size(); ++i) {
        if (!ds.events()[static_cast<std::size_t>(i)]) continue;
        ++b.count[static_cast<std::size_t>(ds.risk_set_end()[static_cast<std::size_t>(i)])];
        b.eta_sum += eta[i];
        b.x_sum += ds.covariates().row(i).transpose();
    }
    return b;
}

// One streaming pass computing value, and optionally gradient and Hessian,
// of the negative log partial likelihood.
void cox_eval(const SurvivalDataset& ds, const Eigen::VectorXd& beta,
              double* value, Eigen::VectorXd* grad, Eigen::MatrixXd* hess) {
    const int n = ds.size();
    const int d = ds.num_features();
    if (static_cast<int>(beta.size()) != d) {
        throw ValidationError("coefficient vector length does not match feature count");
    }
    if (ds.num_events() == 0) {
        // empty sum: nothing to compare against any risk set
        if (value) *value = 0.0;
        if (grad) *grad = Eigen::VectorXd::Zero(d);
        if (hess) *hess = Eigen::MatrixXd::Zero(d, d);
        return;
    }

    Eigen::VectorXd eta = ds.covariates() * beta;
    EventBuckets b = make_buckets(ds, eta);

    double lse = 0.0;
    Eigen::VectorXd u;
    Eigen::MatrixXd w;
    if (grad) u = Eigen::VectorXd::Zero(d);
    if (hess) w = Eigen::MatrixXd::Zero(d, d);

    *value = -b.eta_sum;
    if (grad) *grad = -b.x_sum;
    if (hess) hess->setZero(d, d);

    for (int k = 0; k < n; ++k) {
        Eigen::VectorXd xk = ds.covariates().row(k).transpose();
        if (k == 0) {
            lse = eta[0];
            if (grad) u = xk;
            if (hess) w = xk * xk.transpose();
        } else {
            double hi = std::max(lse, eta[k]);
            double next = hi + std::log(std::exp(lse - hi) + std::exp(eta[k] - hi));
            double carry = std::exp(lse - next);
            double fresh = std::exp(eta[k] - next);
            if (grad) u = carry * u + fresh * xk;
            if (hess) w = carry * w + fresh * (xk * xk.transpose());
            lse = next;
        }
        int cnt = b.count[static_cast<std::size_t>(k)];
        if (cnt == 0) continue;
        *value += cnt * lse;
        if (grad) *grad += cnt * u;
        if (hess) *hess += cnt * (w - u * u.transpose());
    }
}

double penalty_value(const CoxPenalty& p, const Eigen::VectorXd& beta) {
    switch (p.kind) {
        case PenaltyKind::none: return 0.0;
        case PenaltyKind::ridge: return p.lambda * beta.squaredNorm();
        case PenaltyKind::lasso: return p.lambda * beta.lpNorm<1>();
        case PenaltyKind::elastic_net:
            return p.lambda * (p.l1_ratio * beta.lpNorm<1>() +
                               (1.0 - p.l1_ratio) * beta.squaredNorm());
    }
    return 0.0;
}

void validate_penalty(const CoxPenalty& p) {
    if (p.lambda < 0.0) throw ValidationError("penalty strength must be non-negative");
    if (p.kind == PenaltyKind::elastic_net &&
        (p.l1_ratio < 0.0 || p.l1_ratio > 1.0)) {
        throw ValidationError("elastic net l1 ratio must lie in [0, 1]");
    }
}

}  // namespace

double cox_loss(const SurvivalDataset& ds, const Eigen::VectorXd& beta) {
    double v = 0.0;
    cox_eval(ds, beta, &v, nullptr, nullptr);
    return v;
}

SmoothEval cox_loss_gradient(const SurvivalDataset& ds, const Eigen::VectorXd& beta) {
    SmoothEval out;
    out.gradient.resize(beta.size());
    cox_eval(ds, beta, &out.value, &out.gradient, nullptr);
    return out;
}

namespace {

// Damped Newton with Armijo backtracking for the smooth penalized loss.
SolveResult newton_solve(const SurvivalDataset& ds, const CoxFitConfig& cfg,
                         double ridge_lambda) {
    const int d = ds.num_features();
    SolveResult res;
    res.x = Eigen::VectorXd::Zero(d);

    double value = 0.0;
    Eigen::VectorXd grad(d);
    Eigen::MatrixXd hess(d, d);
    auto evaluate = [&](const Eigen::VectorXd& beta, bool with_hess) {
        cox_eval(ds, beta, &value, &grad, with_hess ? &hess : nullptr);
        if (ridge_lambda > 0.0) {
            value += ridge_lambda * beta.squaredNorm();
            grad += 2.0 * ridge_lambda * beta;
            if (with_hess) {
                hess.diagonal().array() += 2.0 * ridge_lambda;
            }
        }
    };

    evaluate(res.x, true);
    for (int iter = 0; iter < cfg.max_iter; ++iter) {
        double gnorm = grad.lpNorm<Eigen::Infinity>();
        res.report.final_residual = gnorm;
        if (gnorm < cfg.tol) {
            res.report.converged = true;
            break;
        }
        if (res.x.lpNorm<Eigen::Infinity>() > cfg.beta_cap) break;

        Eigen::MatrixXd h = hess;
        Eigen::VectorXd dir;
        double jitter = 0.0;
        for (int attempt = 0; attempt < 8; ++attempt) {
            Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
            if (ldlt.info() == Eigen::Success) {
                dir = -ldlt.solve(grad);
                if (grad.dot(dir) < 0.0) break;
            }
            jitter = (jitter == 0.0) ? 1e-8 * (1.0 + h.trace() / d) : jitter * 10.0;
            h = hess;
            h.diagonal().array() += jitter;
            dir.resize(0);
        }
        if (dir.size() == 0) dir = -grad;

        double slope = grad.dot(dir);
        double step = 1.0;
        double base = value;
        Eigen::VectorXd x0 = res.x;
        bool accepted = false;
        while (step >= 1e-16) {
            res.x = x0 + step * dir;
            evaluate(res.x, false);
            if (std::isfinite(value) && value <= base + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            res.x = x0;
            evaluate(res.x, true);
            break;
        }
        evaluate(res.x, true);
        res.report.iterations = iter + 1;
    }
    res.report.final_value = value;
    return res;
}

}  // namespace

CoxModel fit_cox(const SurvivalDataset& ds, const CoxFitConfig& cfg) {
    validate_penalty(cfg.penalty);
    if (ds.num_events() == 0) {
        throw ValidationError("cannot fit a Cox model: dataset has no events");
    }
    const int d = ds.num_features();
    const CoxPenalty& p = cfg.penalty;

    CoxModel model;
    model.penalty = p;

    const bool has_l1 = (p.kind == PenaltyKind::lasso ||
                         p.kind == PenaltyKind::elastic_net);
    if (!has_l1) {
        double ridge_lambda = (p.kind == PenaltyKind::ridge) ? p.lambda : 0.0;
        SolveResult sol;
        if (d <= cfg.newton_max_dim) {
            sol = newton_solve(ds, cfg, ridge_lambda);
        } else {
            SolveOptions opts;
            opts.tol = cfg.tol;
            opts.max_iter = cfg.max_iter;
            sol = minimize_smooth(
                [&](const Eigen::VectorXd& b) {
                    SmoothEval e = cox_loss_gradient(ds, b);
                    if (ridge_lambda > 0.0) {
                        e.value += ridge_lambda * b.squaredNorm();
                        e.gradient += 2.0 * ridge_lambda * b;
                    }
                    return e;
                },
                Eigen::VectorXd::Zero(d), opts);
        }
        if (sol.x.lpNorm<Eigen::Infinity>() > cfg.beta_cap) {
            sol.report.converged = false;
        }
        model.beta = sol.x;
        model.report = sol.report;
        model.objective = cox_loss(ds, model.beta) + penalty_value(p, model.beta);
        return model;
    }

    // l1-bearing penalties: proximal gradient on loss (+ ridge part) with
    // an l1 prox of weight lambda * l1_ratio.
    double ridge_part = (p.kind == PenaltyKind::elastic_net)
                            ? p.lambda * (1.0 - p.l1_ratio)
                            : 0.0;
    double l1_weight = (p.kind == PenaltyKind::lasso) ? p.lambda
                                                      : p.lambda * p.l1_ratio;
    SolveOptions opts;
    opts.tol = cfg.tol;
    opts.max_iter = cfg.max_iter;
    opts.obj_change_tol = 1e-12;
    SolveResult sol = minimize_composite(
        [&](const Eigen::VectorXd& b) {
            SmoothEval e = cox_loss_gradient(ds, b);
            if (ridge_part > 0.0) {
                e.value += ridge_part * b.squaredNorm();
                e.gradient += 2.0 * ridge_part * b;
            }
            return e;
        },
        Eigen::VectorXd::Zero(d), NormOrder::l1, l1_weight, opts);
    if (sol.x.lpNorm<Eigen::Infinity>() > cfg.beta_cap) {
        sol.report.converged = false;
    }
    model.beta = sol.x;
    model.report = sol.report;
    model.objective = cox_loss(ds, model.beta) + penalty_value(p, model.beta);
    return model;
}

Eigen::VectorXd risk_scores(const SurvivalDataset& ds, const Eigen::VectorXd& beta) {
    if (static_cast<int>(beta.size()) != ds.num_features()) {
        throw ValidationError("coefficient vector length does not match feature count");
    }
    return ds.covariates() * beta;
}

}  // namespace drlcox
