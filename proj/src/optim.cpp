#include "drlcox/optim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "drlcox/errors.hpp"

namespace drlcox {

namespace {
constexpr double kArmijoC = 1e-4;
constexpr double kMinStep = 1e-16;
}  // namespace

SolveResult minimize_smooth(const SmoothObjective& f, Eigen::VectorXd x0,
                            const SolveOptions& opts) {
    const int n = static_cast<int>(x0.size());
    SolveResult res;
    res.x = std::move(x0);

    SmoothEval cur = f(res.x);
    if (!std::isfinite(cur.value)) {
        throw ComputeError("objective is non-finite at the starting point");
    }

    std::deque<Eigen::VectorXd> s_hist, y_hist;
    std::deque<double> rho_hist;

    for (int iter = 0; iter < opts.max_iter; ++iter) {
        double gnorm = cur.gradient.lpNorm<Eigen::Infinity>();
        res.report.final_residual = gnorm;
        if (gnorm < opts.tol) {
            res.report.converged = true;
            break;
        }

        // Two-loop recursion.
        Eigen::VectorXd q = cur.gradient;
        const int m = static_cast<int>(s_hist.size());
        std::vector<double> alpha(static_cast<std::size_t>(m));
        for (int i = m - 1; i >= 0; --i) {
            alpha[i] = rho_hist[i] * s_hist[i].dot(q);
            q -= alpha[i] * y_hist[i];
        }
        if (m > 0) {
            double gamma = s_hist.back().dot(y_hist.back()) /
                           y_hist.back().squaredNorm();
            q *= gamma;
        }
        for (int i = 0; i < m; ++i) {
            double beta = rho_hist[i] * y_hist[i].dot(q);
            q += (alpha[i] - beta) * s_hist[i];
        }
        Eigen::VectorXd dir = -q;

        double slope = cur.gradient.dot(dir);
        if (!(slope < 0.0)) {
            // Curvature history went bad; fall back to steepest descent.
            dir = -cur.gradient;
            slope = -cur.gradient.squaredNorm();
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
        }

        double step = (m == 0) ? 1.0 / (1.0 + cur.gradient.norm()) : 1.0;
        SmoothEval next;
        Eigen::VectorXd xn(n);
        bool accepted = false;
        while (step >= kMinStep) {
            xn = res.x + step * dir;
            next = f(xn);
            if (std::isfinite(next.value) &&
                next.value <= cur.value + kArmijoC * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;  // line search stalled; report non-converged

        Eigen::VectorXd s = xn - res.x;
        Eigen::VectorXd yv = next.gradient - cur.gradient;
        double sy = s.dot(yv);
        if (sy > 1e-12 * s.norm() * yv.norm()) {
            s_hist.push_back(std::move(s));
            y_hist.push_back(std::move(yv));
            rho_hist.push_back(1.0 / sy);
            if (static_cast<int>(s_hist.size()) > opts.lbfgs_memory) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }
        res.x = std::move(xn);
        double prev_value = cur.value;
        cur = std::move(next);
        res.report.iterations = iter + 1;
        if (opts.obj_change_tol > 0.0 &&
            std::abs(prev_value - cur.value) <=
                opts.obj_change_tol * std::max(1.0, std::abs(prev_value))) {
            res.report.converged = true;
            res.report.final_residual = cur.gradient.lpNorm<Eigen::Infinity>();
            break;
        }
    }
    res.report.final_value = cur.value;
    if (!res.report.converged) {
        res.report.final_residual = cur.gradient.lpNorm<Eigen::Infinity>();
    }
    return res;
}

Eigen::VectorXd project_l1_ball(const Eigen::VectorXd& v, double radius) {
    if (radius < 0.0) throw ValidationError("l1 ball radius must be non-negative");
    if (v.lpNorm<1>() <= radius) return v;
    const int n = static_cast<int>(v.size());
    std::vector<double> u(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) u[static_cast<std::size_t>(i)] = std::abs(v[i]);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double cssv = 0.0, theta = 0.0;
    for (int j = 0; j < n; ++j) {
        cssv += u[static_cast<std::size_t>(j)];
        double cand = (cssv - radius) / (j + 1);
        if (u[static_cast<std::size_t>(j)] > cand) {
            theta = cand;
        } else {
            break;
        }
    }
    Eigen::VectorXd out(n);
    for (int i = 0; i < n; ++i) {
        double m = std::abs(v[i]) - theta;
        out[i] = m > 0.0 ? (v[i] > 0.0 ? m : -m) : 0.0;
    }
    return out;
}

Eigen::VectorXd prox_norm(const Eigen::VectorXd& v, NormOrder q, double t_weight) {
    if (t_weight < 0.0) throw ValidationError("prox weight must be non-negative");
    if (t_weight == 0.0) return v;
    switch (q) {
        case NormOrder::l1: {
            Eigen::VectorXd out(v.size());
            for (int i = 0; i < v.size(); ++i) {
                double m = std::abs(v[i]) - t_weight;
                out[i] = m > 0.0 ? (v[i] > 0.0 ? m : -m) : 0.0;
            }
            return out;
        }
        case NormOrder::l2: {
            double r = v.norm();
            if (r <= t_weight) return Eigen::VectorXd::Zero(v.size());
            return v * ((r - t_weight) / r);
        }
        case NormOrder::linf:
            // Moreau: prox of t*||.||_inf is identity minus projection onto
            // the l1 ball of radius t.
            return v - project_l1_ball(v, t_weight);
    }
    return v;
}

SolveResult minimize_composite(const SmoothObjective& f, Eigen::VectorXd x0,
                               NormOrder q, double weight,
                               const SolveOptions& opts) {
    SolveResult res;
    res.x = std::move(x0);
    SmoothEval cur = f(res.x);
    if (!std::isfinite(cur.value)) {
        throw ComputeError("objective is non-finite at the starting point");
    }
    double t = 1.0;

    for (int iter = 0; iter < opts.max_iter; ++iter) {
        Eigen::VectorXd xp;
        SmoothEval next;
        bool accepted = false;
        while (t >= kMinStep) {
            xp = prox_norm(res.x - t * cur.gradient, q, t * weight);
            next = f(xp);
            Eigen::VectorXd dx = xp - res.x;
            double bound = cur.value + cur.gradient.dot(dx) +
                           dx.squaredNorm() / (2.0 * t);
            if (std::isfinite(next.value) && next.value <= bound + 1e-14) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;

        double residual = (xp - res.x).lpNorm<Eigen::Infinity>() / t;
        double prev_composite = cur.value + weight * vector_norm(res.x, q);
        res.x = std::move(xp);
        cur = std::move(next);
        res.report.iterations = iter + 1;
        res.report.final_residual = residual;
        if (residual < opts.tol) {
            res.report.converged = true;
            break;
        }
        if (opts.obj_change_tol > 0.0) {
            double composite = cur.value + weight * vector_norm(res.x, q);
            if (std::abs(prev_composite - composite) <=
                opts.obj_change_tol * std::max(1.0, std::abs(prev_composite))) {
                res.report.converged = true;
                break;
            }
        }
        t *= 1.2;  // cautiously re-expand after a success
    }
    res.report.final_value = cur.value + weight * vector_norm(res.x, q);
    return res;
}

}  // namespace drlcox
