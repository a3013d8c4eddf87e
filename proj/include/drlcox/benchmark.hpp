#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "drlcox/contamination.hpp"
#include "drlcox/cox.hpp"
#include "drlcox/data.hpp"
#include "drlcox/drl.hpp"
#include "drlcox/synthetic.hpp"

namespace drlcox {

enum class Method { cox, ridge_cox, lasso_cox, elastic_net_cox, drl_cox };

Method parse_method(const std::string& s);
std::string method_name(Method m);

enum class ContaminationKind { none, shift, outliers };

// One point of the contamination grid.
struct GridCell {
    ContaminationKind kind = ContaminationKind::none;
    int intensity = 0;     // shift
    double ratio = 0.0;    // outliers
    int severity = 0;      // outliers
    std::string label() const;
};

// Declarative description of a benchmark run; parsed from a key = value
// config file (see parse_benchmark_config) with CLI overrides applied on
// top. The documented key set is in the README and in cli --help.
struct BenchmarkConfig {
    // data source: CSV path or synthetic generator
    std::string csv_path;            // empty means synthetic
    std::string duration_col;
    std::string event_col;
    bool standardize = true;
    SyntheticSpec synthetic;

    std::vector<Method> methods;
    ContaminationKind kind = ContaminationKind::none;
    std::vector<int> intensities;    // shift grid
    std::vector<double> ratios;      // outlier grid
    std::vector<int> severities;     // outlier grid
    double feature_fraction = 0.3;
    ShiftTarget target = ShiftTarget::train;

    int trials = 1;
    double test_fraction = 0.3;
    std::uint64_t seed = 0;

    DrlConfig drl;                   // template for drl_cox
    std::vector<double> epsilon_grid;  // non-empty: select epsilon by CV
    std::vector<double> lambda_grid;   // non-empty: select lambda by CV
    int cv_folds = 3;
    double lambda = 0.1;             // fixed lambda when grid empty
    double l1_ratio = 0.5;

    std::string rows_path;
    std::string summary_path;
    std::string plot_path;           // optional
};

// Parses the key = value config format ('#' comments, blank lines ignored).
// `overrides` are raw "key=value" strings applied after the file.
BenchmarkConfig parse_benchmark_config(const std::string& path,
                                       const std::vector<std::string>& overrides);
BenchmarkConfig benchmark_config_from_pairs(
    const std::vector<std::pair<std::string, std::string>>& pairs);

struct BenchmarkRow {
    std::string method;
    std::string cell;
    int trial = 0;
    std::uint64_t seed = 0;  // data seed shared by all methods of the trial
    double c_index = 0.0;
    double iauc_value = 0.0;
    double fit_ms = 0.0;
    bool converged = false;
    std::string status;  // "ok" or a failure description
};

struct CellSummary {
    std::string method;
    std::string cell;
    double mean_c_index = 0.0;
    double mean_iauc = 0.0;
    int trials_ok = 0;
};

struct BenchmarkResult {
    std::vector<BenchmarkRow> rows;
    std::vector<CellSummary> summary;
    std::vector<GridCell> cells;
};

// Cross-field sanity checks shared by the config parser and run_benchmark.
// Throws ValidationError on an inconsistent configuration.
void validate_benchmark_config(const BenchmarkConfig& cfg);

// Runs the full grid: methods x cells x trials, in that nesting order,
// single-threaded and deterministic from cfg.seed. Failures are recorded
// in-row; the run continues.
BenchmarkResult run_benchmark(const BenchmarkConfig& cfg);

void write_rows_csv(const BenchmarkResult& res, const std::string& path);
void write_summary_json(const BenchmarkResult& res, const BenchmarkConfig& cfg,
                        const std::string& path);
void write_plot_csv(const BenchmarkResult& res, const std::string& path);

}  // namespace drlcox
