#include "drlcox/benchmark.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "drlcox/errors.hpp"
#include "drlcox/metrics.hpp"
#include "drlcox/rng.hpp"

namespace drlcox {

Method parse_method(const std::string& s) {
    if (s == "cox") return Method::cox;
    if (s == "ridge_cox") return Method::ridge_cox;
    if (s == "lasso_cox") return Method::lasso_cox;
    if (s == "elastic_net_cox" || s == "enet_cox") return Method::elastic_net_cox;
    if (s == "drl_cox") return Method::drl_cox;
    throw ValidationError("unknown method '" + s + "'");
}

std::string method_name(Method m) {
    switch (m) {
        case Method::cox: return "cox";
        case Method::ridge_cox: return "ridge_cox";
        case Method::lasso_cox: return "lasso_cox";
        case Method::elastic_net_cox: return "elastic_net_cox";
        case Method::drl_cox: return "drl_cox";
    }
    return "?";
}

namespace {

std::string fmt(const char* f, double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), f, v);
    return std::string(buf);
}

std::string trim_copy(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    std::size_t e = s.find_last_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(trim_copy(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    std::string last = trim_copy(cur);
    if (!last.empty() || !out.empty()) out.push_back(last);
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double out = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw ValidationError("config key '" + key + "': expected a number, got '" +
                              v + "'");
    }
}

int to_int(const std::string& key, const std::string& v) {
    double d = to_double(key, v);
    int i = static_cast<int>(std::llround(d));
    if (d != static_cast<double>(i)) {
        throw ValidationError("config key '" + key + "': expected an integer, got '" +
                              v + "'");
    }
    return i;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        std::uint64_t out = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw ValidationError("config key '" + key +
                              "': expected an unsigned integer, got '" + v + "'");
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ValidationError("config key '" + key + "': expected true/false, got '" + v +
                          "'");
}

}  // namespace

std::string GridCell::label() const {
    switch (kind) {
        case ContaminationKind::none:
            return "none";
        case ContaminationKind::shift:
            return "shift_i=" + std::to_string(intensity);
        case ContaminationKind::outliers:
            return "outliers_r=" + fmt("%.12g", ratio) + "_s=" +
                   std::to_string(severity);
    }
    return "?";
}

BenchmarkConfig benchmark_config_from_pairs(
    const std::vector<std::pair<std::string, std::string>>& pairs) {
    // Later occurrences win, so CLI overrides can simply be appended.
    std::map<std::string, std::string> kv;
    for (const auto& [k, v] : pairs) kv[k] = v;

    BenchmarkConfig cfg;
    auto take = [&](const char* key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };

    if (auto v = take("data.path")) cfg.csv_path = *v;
    if (auto v = take("data.duration_col")) cfg.duration_col = *v;
    if (auto v = take("data.event_col")) cfg.event_col = *v;
    if (auto v = take("data.standardize")) cfg.standardize = to_bool("data.standardize", *v);
    if (auto v = take("synthetic.n")) cfg.synthetic.n = to_int("synthetic.n", *v);
    if (auto v = take("synthetic.d")) cfg.synthetic.d = to_int("synthetic.d", *v);
    if (auto v = take("synthetic.censoring")) {
        cfg.synthetic.censoring = to_double("synthetic.censoring", *v);
    }
    if (auto v = take("synthetic.beta_scale")) {
        cfg.synthetic.beta_scale = to_double("synthetic.beta_scale", *v);
    }
    if (auto v = take("synthetic.seed")) cfg.synthetic.seed = to_u64("synthetic.seed", *v);

    if (auto v = take("methods")) {
        for (const std::string& m : split_list(*v)) {
            cfg.methods.push_back(parse_method(m));
        }
    }

    if (auto v = take("contamination.kind")) {
        if (*v == "none") {
            cfg.kind = ContaminationKind::none;
        } else if (*v == "shift") {
            cfg.kind = ContaminationKind::shift;
        } else if (*v == "outliers") {
            cfg.kind = ContaminationKind::outliers;
        } else {
            throw ValidationError("contamination.kind must be none, shift or outliers");
        }
    }
    if (auto v = take("contamination.intensities")) {
        for (const std::string& s : split_list(*v)) {
            cfg.intensities.push_back(to_int("contamination.intensities", s));
        }
    }
    if (auto v = take("contamination.ratios")) {
        for (const std::string& s : split_list(*v)) {
            cfg.ratios.push_back(to_double("contamination.ratios", s));
        }
    }
    if (auto v = take("contamination.severities")) {
        for (const std::string& s : split_list(*v)) {
            cfg.severities.push_back(to_int("contamination.severities", s));
        }
    }
    if (auto v = take("contamination.feature_fraction")) {
        cfg.feature_fraction = to_double("contamination.feature_fraction", *v);
    }
    if (auto v = take("contamination.target")) cfg.target = parse_shift_target(*v);

    if (auto v = take("trials")) cfg.trials = to_int("trials", *v);
    if (auto v = take("test_fraction")) cfg.test_fraction = to_double("test_fraction", *v);
    if (auto v = take("seed")) cfg.seed = to_u64("seed", *v);

    if (auto v = take("drl.epsilon")) cfg.drl.epsilon = to_double("drl.epsilon", *v);
    if (auto v = take("drl.q")) cfg.drl.q = parse_norm_order(*v);
    if (auto v = take("drl.gamma")) cfg.drl.gamma = to_int("drl.gamma", *v);
    if (auto v = take("drl.tau")) cfg.drl.tau = to_double("drl.tau", *v);
    if (auto v = take("drl.tol")) cfg.drl.tol = to_double("drl.tol", *v);
    if (auto v = take("drl.max_iter")) cfg.drl.max_iter = to_int("drl.max_iter", *v);

    if (auto v = take("cv.epsilon_grid")) {
        for (const std::string& s : split_list(*v)) {
            cfg.epsilon_grid.push_back(to_double("cv.epsilon_grid", s));
        }
    }
    if (auto v = take("cv.lambda_grid")) {
        for (const std::string& s : split_list(*v)) {
            cfg.lambda_grid.push_back(to_double("cv.lambda_grid", s));
        }
    }
    if (auto v = take("cv.folds")) cfg.cv_folds = to_int("cv.folds", *v);
    if (auto v = take("cox.lambda")) cfg.lambda = to_double("cox.lambda", *v);
    if (auto v = take("cox.l1_ratio")) cfg.l1_ratio = to_double("cox.l1_ratio", *v);

    if (auto v = take("output.rows")) cfg.rows_path = *v;
    if (auto v = take("output.summary")) cfg.summary_path = *v;
    if (auto v = take("output.plot")) cfg.plot_path = *v;

    if (!kv.empty()) {
        throw ValidationError("unknown config key '" + kv.begin()->first + "'");
    }

    validate_benchmark_config(cfg);
    return cfg;
}

void validate_benchmark_config(const BenchmarkConfig& cfg) {
    if (cfg.methods.empty()) throw ValidationError("config: methods must be non-empty");
    if (cfg.trials < 1) throw ValidationError("config: trials must be >= 1");
    if (!(cfg.test_fraction > 0.0) || !(cfg.test_fraction < 1.0)) {
        throw ValidationError("config: test_fraction must lie strictly in (0, 1)");
    }
    switch (cfg.kind) {
        case ContaminationKind::none:
            break;
        case ContaminationKind::shift:
            if (cfg.intensities.empty()) {
                throw ValidationError("config: shift needs contamination.intensities");
            }
            break;
        case ContaminationKind::outliers:
            if (cfg.ratios.empty() || cfg.severities.empty()) {
                throw ValidationError(
                    "config: outliers need contamination.ratios and .severities");
            }
            break;
    }
}

BenchmarkConfig parse_benchmark_config(const std::string& path,
                                       const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file: " + path);
    std::vector<std::pair<std::string, std::string>> pairs;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim_copy(line);
        if (t.empty() || t[0] == '#') continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("config line " + std::to_string(lineno) +
                                  " is not of the form key = value");
        }
        pairs.emplace_back(trim_copy(t.substr(0, eq)), trim_copy(t.substr(eq + 1)));
    }
    for (const std::string& ov : overrides) {
        std::size_t eq = ov.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("override '" + ov + "' is not of the form key=value");
        }
        pairs.emplace_back(trim_copy(ov.substr(0, eq)), trim_copy(ov.substr(eq + 1)));
    }
    return benchmark_config_from_pairs(pairs);
}

namespace {

std::vector<GridCell> build_cells(const BenchmarkConfig& cfg) {
    std::vector<GridCell> cells;
    switch (cfg.kind) {
        case ContaminationKind::none: {
            cells.push_back(GridCell{});
            break;
        }
        case ContaminationKind::shift: {
            for (int i : cfg.intensities) {
                GridCell c;
                c.kind = ContaminationKind::shift;
                c.intensity = i;
                cells.push_back(c);
            }
            break;
        }
        case ContaminationKind::outliers: {
            for (double r : cfg.ratios) {
                for (int s : cfg.severities) {
                    GridCell c;
                    c.kind = ContaminationKind::outliers;
                    c.ratio = r;
                    c.severity = s;
                    cells.push_back(c);
                }
            }
            break;
        }
    }
    return cells;
}

// Generic k-fold selection of a penalty strength for the classical
// baselines, scored by held-out C-index, ties toward the stronger penalty.
double select_lambda(const SurvivalDataset& train, const std::vector<double>& grid,
                     int folds, PenaltyKind kind, double l1_ratio,
                     std::uint64_t seed) {
    const int n = train.size();
    SplitMix64 rng(seed);
    std::vector<int> perm = sample_without_replacement(n, n, rng);
    std::vector<std::vector<int>> held(static_cast<std::size_t>(folds));
    for (int p = 0; p < n; ++p) {
        held[static_cast<std::size_t>(p % folds)].push_back(
            perm[static_cast<std::size_t>(p)]);
    }
    double best = grid.front(), best_score = -1.0;
    for (double lambda : grid) {
        double acc = 0.0;
        int scored = 0;
        for (int f = 0; f < folds; ++f) {
            std::vector<char> is_out(static_cast<std::size_t>(n), 0);
            for (int r : held[static_cast<std::size_t>(f)]) {
                is_out[static_cast<std::size_t>(r)] = 1;
            }
            std::vector<int> tr, te;
            for (int r = 0; r < n; ++r) {
                (is_out[static_cast<std::size_t>(r)] ? te : tr).push_back(r);
            }
            SurvivalDataset dtr = train.subset(tr);
            SurvivalDataset dte = train.subset(te);
            if (dtr.num_events() == 0 || dte.num_events() == 0) continue;
            CoxFitConfig fc;
            fc.penalty.kind = kind;
            fc.penalty.lambda = lambda;
            fc.penalty.l1_ratio = l1_ratio;
            CoxModel m = fit_cox(dtr, fc);
            ConcordanceResult c = c_index(dte, dte.covariates() * m.beta);
            if (c.comparable == 0) continue;
            acc += c.c_index;
            ++scored;
        }
        if (scored == 0) continue;
        double mean = acc / scored;
        if (mean > best_score || (mean == best_score && lambda > best)) {
            best = lambda;
            best_score = mean;
        }
    }
    return best;
}

struct FitOutcome {
    Eigen::VectorXd beta;
    bool converged = false;
};

FitOutcome fit_method(Method method, const SurvivalDataset& train,
                      const BenchmarkConfig& cfg, std::uint64_t method_seed) {
    FitOutcome out;
    if (method == Method::drl_cox) {
        DrlConfig dc = cfg.drl;
        if (!cfg.epsilon_grid.empty()) {
            EpsilonCvResult cv = cross_validate_epsilon(
                train, cfg.epsilon_grid, cfg.cv_folds, dc,
                derive_seed(method_seed, {hash_label("cv")}));
            dc.epsilon = cv.best_epsilon;
        }
        DrlModel m = fit_drl_cox(train, dc);
        out.beta = m.beta;
        out.converged = m.report.converged;
        return out;
    }

    CoxFitConfig fc;
    switch (method) {
        case Method::cox: fc.penalty.kind = PenaltyKind::none; break;
        case Method::ridge_cox: fc.penalty.kind = PenaltyKind::ridge; break;
        case Method::lasso_cox: fc.penalty.kind = PenaltyKind::lasso; break;
        case Method::elastic_net_cox: fc.penalty.kind = PenaltyKind::elastic_net; break;
        case Method::drl_cox: break;
    }
    if (fc.penalty.kind != PenaltyKind::none) {
        fc.penalty.l1_ratio = cfg.l1_ratio;
        if (!cfg.lambda_grid.empty()) {
            fc.penalty.lambda = select_lambda(
                train, cfg.lambda_grid, cfg.cv_folds, fc.penalty.kind, cfg.l1_ratio,
                derive_seed(method_seed, {hash_label("cv")}));
        } else {
            fc.penalty.lambda = cfg.lambda;
        }
    }
    CoxModel m = fit_cox(train, fc);
    out.beta = m.beta;
    out.converged = m.report.converged;
    return out;
}

std::string sanitize(std::string s) {
    for (char& c : s) {
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    }
    return s;
}

}  // namespace

BenchmarkResult run_benchmark(const BenchmarkConfig& cfg) {
    validate_benchmark_config(cfg);
    SurvivalDataset base = [&] {
        if (!cfg.csv_path.empty()) {
            SurvivalDataset ds =
                SurvivalDataset::load_csv(cfg.csv_path, cfg.duration_col, cfg.event_col);
            return cfg.standardize ? ds.standardize() : ds;
        }
        SurvivalDataset ds = make_synthetic(cfg.synthetic);
        return cfg.standardize ? ds.standardize() : ds;
    }();

    BenchmarkResult res;
    res.cells = build_cells(cfg);
    const double nan = std::numeric_limits<double>::quiet_NaN();

    struct Prepared {
        std::optional<SplitResult> split;
        std::string failure;
        std::uint64_t data_seed = 0;
    };

    // Prepare split + contamination once per (cell, trial); every method
    // sees identical data, so per-trial method comparisons are paired.
    std::vector<Prepared> prep(res.cells.size() * static_cast<std::size_t>(cfg.trials));
    for (std::size_t ci = 0; ci < res.cells.size(); ++ci) {
        for (int t = 0; t < cfg.trials; ++t) {
            Prepared& p = prep[ci * static_cast<std::size_t>(cfg.trials) +
                               static_cast<std::size_t>(t)];
            p.data_seed = derive_seed(
                cfg.seed, {hash_label("data"), static_cast<std::uint64_t>(ci),
                           static_cast<std::uint64_t>(t)});
            try {
                SplitResult split = [&] {
                    std::string last_error = "split failed";
                    for (std::uint64_t attempt = 0; attempt < 10; ++attempt) {
                        try {
                            return base.split(
                                cfg.test_fraction,
                                derive_seed(p.data_seed, {hash_label("split"), attempt}));
                        } catch (const ValidationError& e) {
                            last_error = e.what();
                        }
                    }
                    throw ValidationError(last_error);
                }();
                const GridCell& cell = res.cells[ci];
                if (cell.kind == ContaminationKind::shift) {
                    if (cfg.target == ShiftTarget::train ||
                        cfg.target == ShiftTarget::both) {
                        ShiftSpec spec{cell.intensity,
                                       derive_seed(p.data_seed, {hash_label("shift"), 0}),
                                       cfg.target};
                        split.train = apply_shift(split.train, spec);
                    }
                    if (cfg.target == ShiftTarget::test ||
                        cfg.target == ShiftTarget::both) {
                        ShiftSpec spec{cell.intensity,
                                       derive_seed(p.data_seed, {hash_label("shift"), 1}),
                                       cfg.target};
                        split.test = apply_shift(split.test, spec);
                    }
                } else if (cell.kind == ContaminationKind::outliers) {
                    OutlierSpec spec;
                    spec.ratio = cell.ratio;
                    spec.severity = cell.severity;
                    spec.feature_fraction = cfg.feature_fraction;
                    spec.seed = derive_seed(p.data_seed, {hash_label("outliers")});
                    split.train = inject_outliers(split.train, spec).data;
                }
                p.split = std::move(split);
            } catch (const std::exception& e) {
                p.failure = e.what();
            }
        }
    }

    for (Method method : cfg.methods) {
        for (std::size_t ci = 0; ci < res.cells.size(); ++ci) {
            for (int t = 0; t < cfg.trials; ++t) {
                const Prepared& p = prep[ci * static_cast<std::size_t>(cfg.trials) +
                                         static_cast<std::size_t>(t)];
                BenchmarkRow row;
                row.method = method_name(method);
                row.cell = res.cells[ci].label();
                row.trial = t;
                row.seed = p.data_seed;
                row.c_index = nan;
                row.iauc_value = nan;

                if (!p.split) {
                    row.status = "failed: " + sanitize(p.failure);
                    res.rows.push_back(std::move(row));
                    continue;
                }

                std::uint64_t method_seed = derive_seed(
                    cfg.seed, {hash_label(row.method), static_cast<std::uint64_t>(ci),
                               static_cast<std::uint64_t>(t)});
                auto started = std::chrono::steady_clock::now();
                try {
                    FitOutcome fit = fit_method(method, p.split->train, cfg, method_seed);
                    row.fit_ms = std::chrono::duration<double, std::milli>(
                                     std::chrono::steady_clock::now() - started)
                                     .count();
                    row.converged = fit.converged;
                    Eigen::VectorXd scores = p.split->test.covariates() * fit.beta;
                    ConcordanceResult c = c_index(p.split->test, scores);
                    if (c.comparable == 0) {
                        row.status = "failed: C-index undefined on test split";
                        res.rows.push_back(std::move(row));
                        continue;
                    }
                    row.c_index = c.c_index;
                    try {
                        row.iauc_value =
                            iauc(p.split->test, scores, p.split->train).iauc;
                        row.status = "ok";
                    } catch (const std::exception& e) {
                        row.status = "ok_no_iauc: " + sanitize(e.what());
                    }
                } catch (const std::exception& e) {
                    row.fit_ms = std::chrono::duration<double, std::milli>(
                                     std::chrono::steady_clock::now() - started)
                                     .count();
                    row.status = "failed: " + sanitize(e.what());
                }
                res.rows.push_back(std::move(row));
            }
        }
    }

    // Per (method, cell) means over the rows that produced each metric.
    for (Method method : cfg.methods) {
        for (const GridCell& cell : res.cells) {
            CellSummary s;
            s.method = method_name(method);
            s.cell = cell.label();
            double acc_c = 0.0, acc_i = 0.0;
            int n_c = 0, n_i = 0;
            for (const BenchmarkRow& row : res.rows) {
                if (row.method != s.method || row.cell != s.cell) continue;
                if (std::isfinite(row.c_index)) {
                    acc_c += row.c_index;
                    ++n_c;
                }
                if (std::isfinite(row.iauc_value)) {
                    acc_i += row.iauc_value;
                    ++n_i;
                }
                if (row.status.rfind("ok", 0) == 0) ++s.trials_ok;
            }
            s.mean_c_index = n_c ? acc_c / n_c : nan;
            s.mean_iauc = n_i ? acc_i / n_i : nan;
            res.summary.push_back(std::move(s));
        }
    }
    return res;
}

void write_rows_csv(const BenchmarkResult& res, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open file for writing: " + path);
    out << "method,cell,trial,seed,c_index,iauc,fit_ms,converged,status\n";
    for (const BenchmarkRow& r : res.rows) {
        out << r.method << ',' << r.cell << ',' << r.trial << ',' << r.seed << ','
            << fmt("%.17g", r.c_index) << ',' << fmt("%.17g", r.iauc_value) << ','
            << fmt("%.3f", r.fit_ms) << ',' << (r.converged ? 1 : 0) << ','
            << r.status << '\n';
    }
    if (!out) throw ValidationError("failed while writing: " + path);
}

void write_summary_json(const BenchmarkResult& res, const BenchmarkConfig& cfg,
                        const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open file for writing: " + path);
    out << "{\n  \"seed\": " << cfg.seed << ",\n  \"trials\": " << cfg.trials
        << ",\n  \"cells\": [\n";
    for (std::size_t i = 0; i < res.summary.size(); ++i) {
        const CellSummary& s = res.summary[i];
        out << "    {\"method\": \"" << s.method << "\", \"cell\": \"" << s.cell
            << "\", \"mean_c_index\": " << fmt("%.17g", s.mean_c_index)
            << ", \"mean_iauc\": " << fmt("%.17g", s.mean_iauc)
            << ", \"trials_ok\": " << s.trials_ok << "}"
            << (i + 1 < res.summary.size() ? "," : "") << "\n";
    }
    out << "  ]\n}\n";
    if (!out) throw ValidationError("failed while writing: " + path);
}

void write_plot_csv(const BenchmarkResult& res, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open file for writing: " + path);
    out << "method,kind,intensity,ratio,severity,mean_c_index,mean_iauc\n";
    std::size_t at = 0;
    for (const CellSummary& s : res.summary) {
        const GridCell& cell = res.cells[at % res.cells.size()];
        ++at;
        out << s.method << ',';
        switch (cell.kind) {
            case ContaminationKind::none:
                out << "none,,,";
                break;
            case ContaminationKind::shift:
                out << "shift," << cell.intensity << ",,";
                break;
            case ContaminationKind::outliers:
                out << "outliers,," << fmt("%.12g", cell.ratio) << ','
                    << cell.severity;
                break;
        }
        out << ',' << fmt("%.17g", s.mean_c_index) << ','
            << fmt("%.17g", s.mean_iauc) << '\n';
    }
    if (!out) throw ValidationError("failed while writing: " + path);
}

}  // namespace drlcox
