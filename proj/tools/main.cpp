#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "drlcox/benchmark.hpp"
#include "drlcox/contamination.hpp"
#include "drlcox/cox.hpp"
#include "drlcox/data.hpp"
#include "drlcox/drl.hpp"
#include "drlcox/errors.hpp"
#include "drlcox/metrics.hpp"

namespace {

using namespace drlcox;

std::string fmt(const char* f, double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), f, v);
    return std::string(buf);
}

struct DataArgs {
    std::string path;
    std::string duration_col;
    std::string event_col;
    bool no_standardize = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("data", path, "input CSV (last two columns are duration and "
                                      "event unless named explicitly)")
            ->required();
        cmd->add_option("--duration-col", duration_col, "duration column name");
        cmd->add_option("--event-col", event_col, "event indicator column name");
        cmd->add_flag("--no-standardize", no_standardize,
                      "skip covariate standardization");
    }

    SurvivalDataset load() const {
        SurvivalDataset ds = SurvivalDataset::load_csv(path, duration_col, event_col);
        return no_standardize ? ds : ds.standardize();
    }
};

void print_dataset_line(const SurvivalDataset& ds) {
    std::cout << "rows: " << ds.size() << "  features: " << ds.num_features()
              << "  events: " << ds.num_events() << "  censored: "
              << ds.size() - ds.num_events() << "\n";
}

std::string cox_model_to_json(const std::string& method, const CoxModel& m) {
    std::string s = "{\n  \"model\": \"" + method + "\",\n  \"beta\": [";
    for (int j = 0; j < m.beta.size(); ++j) {
        if (j) s += ", ";
        s += fmt("%.17g", m.beta[j]);
    }
    s += "],\n";
    s += "  \"objective\": " + fmt("%.17g", m.objective) + ",\n";
    s += std::string("  \"converged\": ") + (m.report.converged ? "true" : "false") +
         ",\n";
    s += "  \"penalty\": {\"kind\": \"" + penalty_kind_name(m.penalty.kind) +
         "\", \"lambda\": " + fmt("%.17g", m.penalty.lambda) +
         ", \"l1_ratio\": " + fmt("%.17g", m.penalty.l1_ratio) + "}\n}\n";
    return s;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open file for writing: " + path);
    out << text;
    if (!out) throw ValidationError("failed while writing: " + path);
}

void print_coefficients(const SurvivalDataset& ds, const Eigen::VectorXd& beta) {
    for (int j = 0; j < beta.size(); ++j) {
        std::cout << "  " << ds.feature_names()[static_cast<std::size_t>(j)] << ": "
                  << fmt("%.6g", beta[j]) << "\n";
    }
}

// Reads the beta vector (and alpha, when present) out of a model file
// written by `fit`, accepting both the robust and the classical layouts.
Eigen::VectorXd beta_from_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open model file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(buf.str());
        std::vector<double> beta = j.at("beta").get<std::vector<double>>();
        return Eigen::Map<Eigen::VectorXd>(beta.data(), static_cast<long>(beta.size()));
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("model file " + path + " is not a fitted model: " +
                              e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "drlcox: distributionally robust and classical Cox survival models.\n"
        "Benchmark row CSV columns (in order): method, cell, trial, seed,\n"
        "c_index, iauc, fit_ms, converged, status."};
    app.require_subcommand(1);
    std::function<int()> action;

    // ---- fit ----------------------------------------------------------
    auto* fit_cmd = app.add_subcommand("fit", "fit a survival model and write JSON");
    static DataArgs fit_data;
    fit_data.attach(fit_cmd);
    static std::string fit_method_name = "cox";
    static double fit_lambda = 0.1, fit_l1_ratio = 0.5;
    static DrlConfig fit_drl_cfg;
    static std::string fit_q = "2";
    static std::string fit_out;
    fit_cmd->add_option("--method", fit_method_name,
                        "cox | ridge_cox | lasso_cox | elastic_net_cox | drl_cox");
    fit_cmd->add_option("--lambda", fit_lambda, "penalty strength for penalized Cox");
    fit_cmd->add_option("--l1-ratio", fit_l1_ratio, "elastic net l1 mixing in [0,1]");
    fit_cmd->add_option("--epsilon", fit_drl_cfg.epsilon, "ambiguity radius");
    fit_cmd->add_option("--q", fit_q, "penalty norm order: 1 | 2 | inf");
    fit_cmd->add_option("--gamma", fit_drl_cfg.gamma, "constraint window (>= 1)");
    fit_cmd->add_option("--tau", fit_drl_cfg.tau, "final smoothing temperature");
    fit_cmd->add_option("--tol", fit_drl_cfg.tol, "solver tolerance");
    fit_cmd->add_option("--max-iter", fit_drl_cfg.max_iter, "iteration cap per stage");
    fit_cmd->add_option("--out", fit_out, "output model JSON path");
    fit_cmd->callback([&] {
        action = [&]() -> int {
            SurvivalDataset ds = fit_data.load();
            Method method = parse_method(fit_method_name);
            std::cout << "method: " << method_name(method) << "\n";
            print_dataset_line(ds);
            if (method == Method::drl_cox) {
                DrlConfig cfg = fit_drl_cfg;
                cfg.q = parse_norm_order(fit_q);
                DrlModel m = fit_drl_cox(ds, cfg);
                std::cout << "converged: " << (m.report.converged ? "yes" : "no")
                          << "  iterations: " << m.report.iterations << "\n"
                          << "objective: " << fmt("%.10g", m.objective) << "\n"
                          << "epsilon: " << fmt("%.6g", cfg.epsilon)
                          << "  q: " << norm_order_name(cfg.q)
                          << "  gamma: " << cfg.gamma << "\n"
                          << "alpha: " << fmt("%.6g", m.alpha) << "\n"
                          << "coefficients:\n";
                print_coefficients(ds, m.beta);
                if (!m.note.empty()) std::cout << "note: " << m.note << "\n";
                if (!fit_out.empty()) write_text(fit_out, drl_model_to_json(m));
            } else {
                CoxFitConfig cfg;
                cfg.tol = fit_drl_cfg.tol;
                cfg.max_iter = fit_drl_cfg.max_iter;
                switch (method) {
                    case Method::cox: cfg.penalty.kind = PenaltyKind::none; break;
                    case Method::ridge_cox: cfg.penalty.kind = PenaltyKind::ridge; break;
                    case Method::lasso_cox: cfg.penalty.kind = PenaltyKind::lasso; break;
                    case Method::elastic_net_cox:
                        cfg.penalty.kind = PenaltyKind::elastic_net;
                        break;
                    case Method::drl_cox: break;
                }
                if (cfg.penalty.kind != PenaltyKind::none) {
                    cfg.penalty.lambda = fit_lambda;
                    cfg.penalty.l1_ratio = fit_l1_ratio;
                }
                CoxModel m = fit_cox(ds, cfg);
                std::cout << "converged: " << (m.report.converged ? "yes" : "no")
                          << "  iterations: " << m.report.iterations << "\n"
                          << "objective: " << fmt("%.10g", m.objective) << "\n"
                          << "coefficients:\n";
                print_coefficients(ds, m.beta);
                if (!fit_out.empty()) {
                    write_text(fit_out, cox_model_to_json(method_name(method), m));
                }
            }
            return 0;
        };
    });

    // ---- evaluate -----------------------------------------------------
    auto* eval_cmd =
        app.add_subcommand("evaluate", "score a fitted model on a dataset");
    static DataArgs eval_data;
    eval_data.attach(eval_cmd);
    static std::string eval_model;
    static std::string eval_train_csv;
    eval_cmd->add_option("--model", eval_model, "model JSON from `fit`")->required();
    eval_cmd->add_option("--train-csv", eval_train_csv,
                         "training data for censoring weights (default: the "
                         "evaluation data itself)");
    eval_cmd->callback([&] {
        action = [&]() -> int {
            SurvivalDataset ds = eval_data.load();
            Eigen::VectorXd beta = beta_from_model_file(eval_model);
            if (static_cast<int>(beta.size()) != ds.num_features()) {
                throw ValidationError("model has " + std::to_string(beta.size()) +
                                      " coefficients but data has " +
                                      std::to_string(ds.num_features()) + " features");
            }
            Eigen::VectorXd scores = ds.covariates() * beta;
            print_dataset_line(ds);
            ConcordanceResult c = c_index(ds, scores);
            if (!c.defined()) {
                throw ComputeError("C-index undefined: no comparable pairs");
            }
            std::cout << "c_index: " << fmt("%.10g", c.c_index) << "  (concordant "
                      << c.concordant << ", discordant " << c.discordant
                      << ", tied " << c.tied_risk << ", comparable " << c.comparable
                      << ")\n";
            SurvivalDataset train = eval_train_csv.empty()
                                        ? ds
                                        : SurvivalDataset::load_csv(
                                              eval_train_csv, eval_data.duration_col,
                                              eval_data.event_col);
            try {
                IaucResult r = iauc(ds, scores, train);
                std::cout << "iauc: " << fmt("%.10g", r.iauc) << "  (grid points "
                          << r.time_grid.size()
                          << (r.truncated ? ", grid truncated" : "") << ")\n";
            } catch (const ComputeError& e) {
                std::cout << "iauc: undefined (" << e.what() << ")\n";
            }
            return 0;
        };
    });

    // ---- benchmark ----------------------------------------------------
    auto* bench_cmd =
        app.add_subcommand("benchmark", "run a contamination benchmark grid");
    static std::string bench_config;
    static std::vector<std::string> bench_sets;
    bench_cmd->add_option("--config", bench_config, "key = value config file")
        ->required();
    bench_cmd->add_option("--set", bench_sets,
                          "override a config key, e.g. --set trials=5");
    bench_cmd->callback([&] {
        action = [&]() -> int {
            BenchmarkConfig cfg = parse_benchmark_config(bench_config, bench_sets);
            BenchmarkResult res = run_benchmark(cfg);
            if (!cfg.rows_path.empty()) write_rows_csv(res, cfg.rows_path);
            if (!cfg.summary_path.empty()) write_summary_json(res, cfg, cfg.summary_path);
            if (!cfg.plot_path.empty()) write_plot_csv(res, cfg.plot_path);
            std::cout << "rows: " << res.rows.size() << "\n";
            std::cout << "method | cell | mean_c_index | mean_iauc | trials_ok\n";
            for (const CellSummary& s : res.summary) {
                std::cout << s.method << " | " << s.cell << " | "
                          << fmt("%.6g", s.mean_c_index) << " | "
                          << fmt("%.6g", s.mean_iauc) << " | " << s.trials_ok << "\n";
            }
            if (!cfg.rows_path.empty()) {
                std::cout << "wrote " << cfg.rows_path << "\n";
            }
            if (!cfg.summary_path.empty()) {
                std::cout << "wrote " << cfg.summary_path << "\n";
            }
            if (!cfg.plot_path.empty()) {
                std::cout << "wrote " << cfg.plot_path << "\n";
            }
            return 0;
        };
    });

    // ---- contaminate ---------------------------------------------------
    auto* cont_cmd = app.add_subcommand(
        "contaminate", "write a shifted or outlier-injected copy of a dataset");
    static DataArgs cont_data;
    cont_data.attach(cont_cmd);
    static std::string cont_kind = "outliers";
    static int cont_intensity = 1;
    static double cont_ratio = 0.1;
    static int cont_severity = 1;
    static double cont_feature_fraction = 0.3;
    static std::uint64_t cont_seed = 0;
    static std::string cont_out, cont_mask_out;
    cont_cmd->add_option("--kind", cont_kind, "shift | outliers");
    cont_cmd->add_option("--intensity", cont_intensity, "shift: columns replaced");
    cont_cmd->add_option("--ratio", cont_ratio, "outliers: fraction of rows");
    cont_cmd->add_option("--severity", cont_severity, "outliers: noise std in {1..5}");
    cont_cmd->add_option("--feature-fraction", cont_feature_fraction,
                         "outliers: fraction of columns per row");
    cont_cmd->add_option("--seed", cont_seed, "generator seed");
    cont_cmd->add_option("--out", cont_out, "output CSV path")->required();
    cont_cmd->add_option("--mask-out", cont_mask_out,
                         "outliers: CSV of per-row corruption flags");
    cont_cmd->callback([&] {
        action = [&]() -> int {
            if (cont_data.no_standardize) {
                throw ValidationError(
                    "contamination operates on the standardized scale; "
                    "--no-standardize is not supported here");
            }
            SurvivalDataset ds = cont_data.load();
            if (cont_kind == "shift") {
                ShiftSpec spec;
                spec.intensity = cont_intensity;
                spec.seed = cont_seed;
                SurvivalDataset out = apply_shift(ds, spec);
                out.write_csv(cont_out);
                std::cout << "replaced " << cont_intensity << " column(s); wrote "
                          << cont_out << "\n";
            } else if (cont_kind == "outliers") {
                OutlierSpec spec;
                spec.ratio = cont_ratio;
                spec.severity = cont_severity;
                spec.feature_fraction = cont_feature_fraction;
                spec.seed = cont_seed;
                OutlierResult res = inject_outliers(ds, spec);
                res.data.write_csv(cont_out);
                int flagged = 0;
                for (int f : res.mask) flagged += f;
                std::cout << "corrupted " << flagged << " of " << ds.size()
                          << " rows; wrote " << cont_out << "\n";
                if (!cont_mask_out.empty()) {
                    std::string text = "row,corrupted\n";
                    for (std::size_t i = 0; i < res.mask.size(); ++i) {
                        text += std::to_string(res.data.original_index()[i]) + "," +
                                std::to_string(res.mask[i]) + "\n";
                    }
                    write_text(cont_mask_out, text);
                    std::cout << "wrote " << cont_mask_out << "\n";
                }
            } else {
                throw ValidationError("--kind must be shift or outliers");
            }
            return 0;
        };
    });

    // ---- suggest-radius -------------------------------------------------
    auto* rad_cmd = app.add_subcommand(
        "suggest-radius", "print the guarantee radius and an epsilon grid");
    static DataArgs rad_data;
    rad_data.attach(rad_cmd);
    static double rad_significance = 0.05;
    static std::string rad_p = "2";
    rad_cmd->add_option("--significance", rad_significance,
                        "guarantee significance level in (0,1)");
    rad_cmd->add_option("--p", rad_p, "ground metric norm order: 1 | 2 | inf");
    rad_cmd->callback([&] {
        action = [&]() -> int {
            SurvivalDataset ds = rad_data.load();
            RadiusSuggestion r =
                suggest_radius(ds, rad_significance, parse_norm_order(rad_p));
            print_dataset_line(ds);
            std::cout << "diameter (p=" << rad_p << "): "
                      << fmt("%.10g", r.diameter_used.value)
                      << (r.approximate ? " (range bound, approximate)" : " (exact)")
                      << "\n";
            std::cout << "B(significance=" << fmt("%g", rad_significance)
                      << "): " << fmt("%.10g", r.b_alpha) << "\n";
            std::cout << "suggested epsilon grid:";
            for (int k = 0; k < 7; ++k) {
                double lo = r.b_alpha / 100.0, hi = 10.0 * r.b_alpha;
                double eps = lo * std::pow(hi / lo, k / 6.0);
                std::cout << " " << fmt("%.6g", eps);
            }
            std::cout << "\n";
            return 0;
        };
    });

    // ---- cv-epsilon ------------------------------------------------------
    auto* cv_cmd = app.add_subcommand(
        "cv-epsilon", "select the ambiguity radius by k-fold cross-validation");
    static DataArgs cv_data;
    cv_data.attach(cv_cmd);
    static std::string cv_grid;
    static int cv_folds = 5;
    static std::uint64_t cv_seed = 0;
    static DrlConfig cv_cfg;
    static std::string cv_q = "2";
    static double cv_significance = 0.05;
    cv_cmd->add_option("--grid", cv_grid,
                       "comma-separated epsilon grid (default: 7 log-spaced "
                       "points from the suggested radius)");
    cv_cmd->add_option("--folds", cv_folds, "number of folds (>= 2)");
    cv_cmd->add_option("--seed", cv_seed, "fold shuffle seed");
    cv_cmd->add_option("--q", cv_q, "penalty norm order: 1 | 2 | inf");
    cv_cmd->add_option("--gamma", cv_cfg.gamma, "constraint window");
    cv_cmd->add_option("--tau", cv_cfg.tau, "final smoothing temperature");
    cv_cmd->add_option("--tol", cv_cfg.tol, "solver tolerance");
    cv_cmd->add_option("--max-iter", cv_cfg.max_iter, "iteration cap per stage");
    cv_cmd->add_option("--significance", cv_significance,
                       "significance for the default grid");
    cv_cmd->callback([&] {
        action = [&]() -> int {
            SurvivalDataset ds = cv_data.load();
            DrlConfig cfg = cv_cfg;
            cfg.q = parse_norm_order(cv_q);
            std::vector<double> grid;
            if (cv_grid.empty()) {
                RadiusSuggestion r =
                    suggest_radius(ds, cv_significance, dual_norm_order(cfg.q));
                double lo = r.b_alpha / 100.0, hi = 10.0 * r.b_alpha;
                for (int k = 0; k < 7; ++k) {
                    grid.push_back(lo * std::pow(hi / lo, k / 6.0));
                }
            } else {
                std::stringstream ss(cv_grid);
                std::string item;
                while (std::getline(ss, item, ',')) {
                    try {
                        grid.push_back(std::stod(item));
                    } catch (const std::exception&) {
                        throw ValidationError("--grid entry '" + item +
                                              "' is not a number");
                    }
                }
            }
            EpsilonCvResult res =
                cross_validate_epsilon(ds, grid, cv_folds, cfg, cv_seed);
            std::cout << "epsilon | mean_c_index | folds\n";
            for (const EpsilonCvRow& row : res.table) {
                std::cout << fmt("%.6g", row.epsilon) << " | "
                          << fmt("%.6g", row.mean_c_index) << " | "
                          << row.folds_scored << "\n";
            }
            std::cout << "best_epsilon: " << fmt("%.10g", res.best_epsilon) << "\n";
            return 0;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        return action();
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
