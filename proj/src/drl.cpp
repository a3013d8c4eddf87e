#include "drlcox/drl.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include <nlohmann/json.hpp>

#include "drlcox/errors.hpp"
#include "drlcox/metrics.hpp"
#include "drlcox/rng.hpp"
#include "prefix_stats.hpp"

namespace drlcox {

void validate_drl_config(const DrlConfig& cfg) {
    if (!(cfg.epsilon >= 0.0) || !std::isfinite(cfg.epsilon)) {
        throw ValidationError("epsilon must be a finite non-negative real");
    }
    if (cfg.gamma < 1) throw ValidationError("gamma must be at least 1");
    if (!(cfg.tau > 0.0)) throw ValidationError("tau must be positive");
    if (!(cfg.tol > 0.0)) throw ValidationError("tol must be positive");
    if (cfg.max_iter < 1) throw ValidationError("max_iter must be at least 1");
}

namespace {

void check_beta(const SurvivalDataset& ds, const Eigen::VectorXd& beta) {
    if (static_cast<int>(beta.size()) != ds.num_features()) {
        throw ValidationError("coefficient vector length does not match feature count");
    }
}

Eigen::VectorXd stack(const Eigen::VectorXd& beta, double alpha) {
    Eigen::VectorXd v(beta.size() + 1);
    v.head(beta.size()) = beta;
    v[beta.size()] = alpha;
    return v;
}

}  // namespace

double modified_individual_loss(const SurvivalDataset& ds,
                                const Eigen::VectorXd& beta, int i) {
    check_beta(ds, beta);
    if (i < 0 || i >= ds.size()) throw ValidationError("subject index out of range");
    if (!ds.events()[static_cast<std::size_t>(i)]) return 0.0;

    const int r = ds.risk_set_end()[static_cast<std::size_t>(i)];
    double eta_i = ds.covariates().row(i).dot(beta);
    double lse = -std::numeric_limits<double>::infinity();
    for (int m = 0; m <= r; ++m) {
        double e = ds.covariates().row(m).dot(beta);
        double hi = std::max(lse, e);
        lse = hi + std::log(std::exp(lse - hi) + std::exp(e - hi));
    }
    double u = lse - eta_i;  // >= 0: the risk set contains subject i
    return u + detail::log1p_exp_neg(u);
}

double drl_objective(const SurvivalDataset& ds, const Eigen::VectorXd& beta,
                     double alpha, const DrlConfig& cfg) {
    validate_drl_config(cfg);
    check_beta(ds, beta);
    if (!std::isfinite(alpha)) throw ValidationError("alpha must be finite");

    const int n = ds.size();
    detail::PrefixStats ps = detail::compute_prefix_stats(ds, beta, false);

    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        if (!ds.events()[static_cast<std::size_t>(i)]) continue;
        const int kmax = std::min(i + cfg.gamma - 1, n - 1);
        double best = -std::numeric_limits<double>::infinity();
        for (int k = i; k <= kmax; ++k) {
            int rk = ds.risk_set_end()[static_cast<std::size_t>(k)];
            double u = ps.lse[rk] - ps.eta[i];
            double g = u + detail::log1p_exp_neg(u) -
                       alpha * (ds.durations()[i] - ds.durations()[k]);
            best = std::max(best, g);
        }
        sum += best;
    }
    double value = cfg.epsilon * vector_norm(stack(beta, alpha), cfg.q) + sum / n;
    if (!std::isfinite(value)) {
        throw ComputeError("robust objective evaluated to a non-finite value");
    }
    return value;
}

namespace {

DrlSmoothedEval smoothed_eval(const SurvivalDataset& ds,
                              const Eigen::VectorXd& beta, double alpha,
                              const DrlConfig& cfg, double tau) {
    check_beta(ds, beta);
    if (!std::isfinite(alpha)) throw ValidationError("alpha must be finite");

    const int n = ds.size();
    const int d = ds.num_features();
    detail::PrefixStats ps = detail::compute_prefix_stats(ds, beta, true);

    DrlSmoothedEval out;
    out.gradient = Eigen::VectorXd::Zero(d + 1);
    Eigen::VectorXd gbeta = Eigen::VectorXd::Zero(d);
    double galpha = 0.0;
    double sum = 0.0;

    std::vector<double> g;
    for (int i = 0; i < n; ++i) {
        if (!ds.events()[static_cast<std::size_t>(i)]) continue;
        const int kmax = std::min(i + cfg.gamma - 1, n - 1);
        const int w = kmax - i + 1;
        g.assign(static_cast<std::size_t>(w), 0.0);
        double m = -std::numeric_limits<double>::infinity();
        for (int k = i; k <= kmax; ++k) {
            int rk = ds.risk_set_end()[static_cast<std::size_t>(k)];
            double u = ps.lse[rk] - ps.eta[i];
            double val = u + detail::log1p_exp_neg(u) -
                         alpha * (ds.durations()[i] - ds.durations()[k]);
            g[static_cast<std::size_t>(k - i)] = val;
            m = std::max(m, val);
        }
        double z = 0.0;
        for (double v : g) z += std::exp((v - m) / tau);
        sum += m + tau * std::log(z);

        // Soft-max weights over the window, then the chain rule through
        // each g_ik: d/dbeta = (1 - c)(U_rk - x_i), d/dalpha = y_k - y_i
        // with c = exp(eta_i) / (exp(eta_i) + S_rk).
        Eigen::VectorXd xi = ds.covariates().row(i).transpose();
        for (int k = i; k <= kmax; ++k) {
            double wk = std::exp((g[static_cast<std::size_t>(k - i)] - m) / tau) / z;
            if (wk == 0.0) continue;
            int rk = ds.risk_set_end()[static_cast<std::size_t>(k)];
            double u = ps.lse[rk] - ps.eta[i];
            double one_minus_c = 1.0 / (1.0 + std::exp(-u));
            gbeta += wk * one_minus_c * (ps.wavg.col(rk) - xi);
            galpha += wk * (ds.durations()[k] - ds.durations()[i]);
        }
    }

    out.smooth_part = sum / n;
    gbeta /= n;
    galpha /= n;

    Eigen::VectorXd v = stack(beta, alpha);
    out.value = out.smooth_part + cfg.epsilon * vector_norm(v, cfg.q);
    out.gradient.head(d) = gbeta;
    out.gradient[d] = galpha;
    if (cfg.q == NormOrder::l2 && cfg.epsilon > 0.0) {
        double r = v.norm();
        if (r > 0.0) out.gradient += (cfg.epsilon / r) * v;
    }
    if (!std::isfinite(out.value) || !out.gradient.allFinite()) {
        throw ComputeError("smoothed objective evaluated to a non-finite value");
    }
    return out;
}

std::vector<double> tau_schedule(double final_tau) {
    std::vector<double> taus;
    double t = 1.0;
    while (t > final_tau * (1.0 + 1e-12)) {
        taus.push_back(t);
        t *= 0.1;
    }
    taus.push_back(final_tau);
    return taus;
}

}  // namespace

DrlSmoothedEval drl_objective_smoothed(const SurvivalDataset& ds,
                                       const Eigen::VectorXd& beta, double alpha,
                                       const DrlConfig& cfg) {
    validate_drl_config(cfg);
    return smoothed_eval(ds, beta, alpha, cfg, cfg.tau);
}

DrlModel fit_drl_cox(const SurvivalDataset& ds, const DrlConfig& cfg,
                     const Eigen::VectorXd* warm_start) {
    validate_drl_config(cfg);
    const int d = ds.num_features();

    DrlModel model;
    model.config = cfg;

    if (ds.num_events() == 0) {
        // Only the norm term survives; the origin minimizes it exactly.
        model.beta = Eigen::VectorXd::Zero(d);
        model.alpha = 0.0;
        model.objective = 0.0;
        model.report.converged = true;
        model.note = "all rows censored; zero model is exact";
        return model;
    }

    Eigen::VectorXd v = Eigen::VectorXd::Zero(d + 1);
    if (warm_start) {
        if (static_cast<int>(warm_start->size()) != d + 1) {
            throw ValidationError("warm start must have length d + 1");
        }
        v = *warm_start;
    }

    SolveReport last;
    int total_iters = 0;
    const bool smooth_norm = (cfg.q == NormOrder::l2 || cfg.epsilon == 0.0);

    for (double tau : tau_schedule(cfg.tau)) {
        auto objective = [&](const Eigen::VectorXd& p) {
            DrlSmoothedEval e =
                smoothed_eval(ds, p.head(d), p[d], cfg, tau);
            SmoothEval se;
            se.value = smooth_norm ? e.value : e.smooth_part;
            se.gradient = std::move(e.gradient);
            return se;
        };

        SolveOptions opts;
        opts.tol = cfg.tol;
        opts.max_iter = cfg.max_iter;
        opts.obj_change_tol = cfg.tol;

        if (smooth_norm) {
            if (cfg.q == NormOrder::l2 && cfg.epsilon > 0.0) {
                // The origin solves this stage iff the smooth part's
                // gradient there fits inside the epsilon ball.
                DrlSmoothedEval at0 = smoothed_eval(
                    ds, Eigen::VectorXd::Zero(d), 0.0, cfg, tau);
                if (at0.gradient.norm() <= cfg.epsilon) {
                    v.setZero();
                    last = SolveReport{};
                    last.converged = true;
                    last.final_value = at0.value;
                    continue;
                }
            }
            SolveResult r = minimize_smooth(objective, v, opts);
            v = std::move(r.x);
            last = r.report;
        } else {
            SolveResult r = minimize_composite(objective, v, cfg.q,
                                               cfg.epsilon, opts);
            v = std::move(r.x);
            last = r.report;
        }
        total_iters += last.iterations;
    }

    model.beta = v.head(d);
    model.alpha = v[d];
    model.objective = drl_objective(ds, model.beta, model.alpha, cfg);
    model.report = last;
    model.report.iterations = total_iters;
    model.report.final_value = model.objective;
    return model;
}

RadiusSuggestion suggest_radius(const SurvivalDataset& ds, double significance,
                                NormOrder p) {
    if (!(significance > 0.0) || !(significance < 1.0)) {
        throw ValidationError("significance must lie strictly between 0 and 1");
    }
    RadiusSuggestion out;
    out.significance = significance;
    out.diameter_used = ds.diameter(p);
    out.approximate = out.diameter_used.approximate;
    out.b_alpha = out.diameter_used.value *
                  std::sqrt(std::log(1.0 / significance) / ds.size());
    return out;
}

EpsilonCvResult cross_validate_epsilon(const SurvivalDataset& ds,
                                       const std::vector<double>& grid,
                                       int folds, const DrlConfig& cfg_template,
                                       std::uint64_t seed) {
    if (grid.empty()) throw ValidationError("epsilon grid must be non-empty");
    for (double e : grid) {
        if (!(e >= 0.0)) throw ValidationError("epsilon grid values must be >= 0");
    }
    if (folds < 2) throw ValidationError("cross-validation needs at least 2 folds");
    if (folds > ds.size()) throw ValidationError("more folds than rows");

    const int n = ds.size();
    SplitMix64 rng(seed);
    std::vector<int> perm = sample_without_replacement(n, n, rng);
    std::vector<std::vector<int>> heldout(static_cast<std::size_t>(folds));
    for (int p = 0; p < n; ++p) {
        heldout[static_cast<std::size_t>(p % folds)].push_back(
            perm[static_cast<std::size_t>(p)]);
    }

    struct Fold {
        SurvivalDataset train;
        SurvivalDataset test;
    };
    std::vector<Fold> fold_data;
    for (int f = 0; f < folds; ++f) {
        std::vector<char> is_out(static_cast<std::size_t>(n), 0);
        for (int r : heldout[static_cast<std::size_t>(f)]) {
            is_out[static_cast<std::size_t>(r)] = 1;
        }
        std::vector<int> train_rows, test_rows;
        for (int r = 0; r < n; ++r) {
            (is_out[static_cast<std::size_t>(r)] ? test_rows : train_rows).push_back(r);
        }
        Fold fd{ds.subset(train_rows), ds.subset(test_rows)};
        if (fd.train.num_events() == 0 || fd.test.num_events() == 0) {
            throw ValidationError(
                "cross-validation fold without events; use another seed or fewer folds");
        }
        fold_data.push_back(std::move(fd));
    }

    EpsilonCvResult res;
    bool have_best = false;
    double best_score = 0.0;
    for (double eps : grid) {
        DrlConfig cfg = cfg_template;
        cfg.epsilon = eps;
        EpsilonCvRow row;
        row.epsilon = eps;
        double acc = 0.0;
        for (const Fold& fd : fold_data) {
            DrlModel m = fit_drl_cox(fd.train, cfg);
            ConcordanceResult c =
                c_index(fd.test, fd.test.covariates() * m.beta);
            if (c.comparable == 0) continue;  // undefined on this fold
            acc += c.c_index;
            ++row.folds_scored;
        }
        if (row.folds_scored > 0) row.mean_c_index = acc / row.folds_scored;
        res.table.push_back(row);
        if (row.folds_scored == 0) continue;
        if (!have_best || row.mean_c_index > best_score ||
            (row.mean_c_index == best_score && eps > res.best_epsilon)) {
            res.best_epsilon = eps;
            best_score = row.mean_c_index;
            have_best = true;
        }
    }
    if (!have_best) {
        throw ComputeError("C-index undefined on every fold; cannot select epsilon");
    }
    return res;
}

std::string drl_model_to_json(const DrlModel& m) {
    char buf[40];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    std::string s = "{\n  \"beta\": [";
    for (int j = 0; j < m.beta.size(); ++j) {
        if (j) s += ", ";
        s += num(m.beta[j]);
    }
    s += "],\n";
    s += "  \"alpha\": " + num(m.alpha) + ",\n";
    s += "  \"epsilon\": " + num(m.config.epsilon) + ",\n";
    s += "  \"q\": \"" + norm_order_name(m.config.q) + "\",\n";
    s += "  \"gamma\": " + std::to_string(m.config.gamma) + ",\n";
    s += "  \"objective\": " + num(m.objective) + ",\n";
    s += std::string("  \"converged\": ") + (m.report.converged ? "true" : "false") +
         "\n}\n";
    return s;
}

DrlModel drl_model_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed model JSON: ") + e.what());
    }
    DrlModel m;
    try {
        std::vector<double> beta = j.at("beta").get<std::vector<double>>();
        m.beta = Eigen::Map<Eigen::VectorXd>(beta.data(),
                                             static_cast<long>(beta.size()));
        m.alpha = j.at("alpha").get<double>();
        m.config.epsilon = j.at("epsilon").get<double>();
        m.config.q = parse_norm_order(j.at("q").get<std::string>());
        m.config.gamma = j.at("gamma").get<int>();
        m.objective = j.at("objective").get<double>();
        m.report.converged = j.at("converged").get<bool>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("model JSON missing or mistyped field: ") +
                              e.what());
    }
    return m;
}

}  // namespace drlcox
