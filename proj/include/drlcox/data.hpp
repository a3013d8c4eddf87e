#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace drlcox {

// Norm order used for penalties and for the dataset diameter. The dual
// pairing is l1 <-> linf and l2 <-> l2.
enum class NormOrder { l1, l2, linf };

NormOrder parse_norm_order(const std::string& s);
std::string norm_order_name(NormOrder q);
NormOrder dual_norm_order(NormOrder p);
double vector_norm(const Eigen::VectorXd& v, NormOrder q);

// Per-column affine transform recorded by standardize() so that models can
// be interpreted on the original scale and contamination can verify its
// standardized-input precondition.
struct Standardization {
    Eigen::VectorXd mean;
    Eigen::VectorXd scale;  // population standard deviation per column
};

struct SplitResult;
struct DataDiameter {
    double value = 0.0;
    // True when the value is the cheap coordinate-range bound rather than
    // the exact pairwise maximum (used above the exact-computation cutoff).
    bool approximate = false;
};

// Right-censored survival sample held in canonical order: durations sorted
// in decreasing order, ties kept stable by original row order. Invariants
// (every duration positive, events in {0,1}, rectangular covariates, no
// non-finite values) are enforced at construction, so downstream code can
// assume them.
class SurvivalDataset {
public:
    // Builds a dataset from rows in arbitrary order. `events` entries must
    // be 0 or 1 and durations strictly positive. Throws ValidationError.
    static SurvivalDataset from_rows(Eigen::MatrixXd covariates,
                                     Eigen::VectorXd durations,
                                     std::vector<int> events,
                                     std::vector<std::string> feature_names = {});

    // Parses a CSV with a header line. `duration_col` and `event_col` name
    // the duration and event-status columns; when empty they default to the
    // last two columns (in that order). Every other column is a numeric
    // covariate. Throws ValidationError with the offending row/column on
    // malformed input.
    static SurvivalDataset load_csv(const std::string& path,
                                    const std::string& duration_col = "",
                                    const std::string& event_col = "");

    // Writes the dataset in canonical order using the stored feature names
    // plus the given duration/event column names (empty = the names the
    // dataset was loaded or built with).
    void write_csv(const std::string& path, const std::string& duration_col = "",
                   const std::string& event_col = "") const;

    const std::string& duration_name() const { return duration_name_; }
    const std::string& event_name() const { return event_name_; }

    int size() const { return static_cast<int>(durations_.size()); }
    int num_features() const { return static_cast<int>(x_.cols()); }
    int num_events() const { return num_events_; }

    const Eigen::MatrixXd& covariates() const { return x_; }
    const Eigen::VectorXd& durations() const { return durations_; }
    const std::vector<int>& events() const { return events_; }
    const std::vector<std::string>& feature_names() const { return feature_names_; }

    // Identity of each canonical row in the source the dataset was built
    // from (CSV row order for load_csv, input row order for from_rows,
    // parent canonical position for split()).
    const std::vector<int>& original_index() const { return original_index_; }

    // risk_set_end()[k] is the largest canonical index with the same
    // duration as row k. Because rows are sorted by decreasing duration,
    // the prefix [0, risk_set_end(k)] is exactly the risk set of row k
    // under weak inequality, with tied rows included.
    const std::vector<int>& risk_set_end() const { return risk_set_end_; }

    const std::optional<Standardization>& standardization() const {
        return standardization_;
    }

    // Returns a copy with its covariate columns shifted to mean zero and
    // scaled to unit population standard deviation. A zero-variance column
    // is an error (named in the message).
    SurvivalDataset standardize() const;

    // Returns a copy with the covariate matrix replaced (same shape).
    // Durations, events, ordering and standardization metadata carry over.
    // Used by contamination, which perturbs covariates only.
    SurvivalDataset with_covariates(Eigen::MatrixXd x) const;

    // Seeded train/test split. The test size is max(1, round(N*fraction)).
    // Throws ValidationError if either side would end up with zero events
    // or zero rows.
    SplitResult split(double test_fraction, std::uint64_t seed) const;

    // Dataset restricted to the given canonical rows (order free of
    // duplicates; rows must be valid indices). original_index entries
    // carry over from this dataset, as in split().
    SurvivalDataset subset(const std::vector<int>& canonical_rows) const;

    // Maximum pairwise p-norm distance between joined (x, y) rows. Exact
    // for N <= exact_cutoff via the O(N^2) scan; above that it falls back
    // to the p-norm of per-coordinate ranges and sets `approximate`.
    DataDiameter diameter(NormOrder p, int exact_cutoff = 20000) const;

private:
    SurvivalDataset() = default;

    Eigen::MatrixXd x_;           // canonical order, one row per subject
    Eigen::VectorXd durations_;   // decreasing
    std::vector<int> events_;
    std::vector<int> original_index_;
    std::vector<int> risk_set_end_;
    std::vector<std::string> feature_names_;
    std::string duration_name_ = "time";
    std::string event_name_ = "event";
    std::optional<Standardization> standardization_;
    int num_events_ = 0;

    void finalize_order(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                        const std::vector<int>& ev,
                        const std::vector<int>& source_index);
};

struct SplitResult {
    SurvivalDataset train;
    SurvivalDataset test;
};

}  // namespace drlcox
