#include "drlcox/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "drlcox/errors.hpp"
#include "drlcox/rng.hpp"

namespace drlcox {

NormOrder parse_norm_order(const std::string& s) {
    if (s == "1") return NormOrder::l1;
    if (s == "2") return NormOrder::l2;
    if (s == "inf" || s == "Inf" || s == "INF") return NormOrder::linf;
    throw ValidationError("norm order must be one of 1, 2, inf (got '" + s + "')");
}

std::string norm_order_name(NormOrder q) {
    switch (q) {
        case NormOrder::l1: return "1";
        case NormOrder::l2: return "2";
        case NormOrder::linf: return "inf";
    }
    return "?";
}

NormOrder dual_norm_order(NormOrder p) {
    switch (p) {
        case NormOrder::l1: return NormOrder::linf;
        case NormOrder::l2: return NormOrder::l2;
        case NormOrder::linf: return NormOrder::l1;
    }
    return NormOrder::l2;
}

double vector_norm(const Eigen::VectorXd& v, NormOrder q) {
    switch (q) {
        case NormOrder::l1: return v.lpNorm<1>();
        case NormOrder::l2: return v.norm();
        case NormOrder::linf: return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>();
    }
    return 0.0;
}

namespace {

double parse_double(std::string_view cell, int row, const std::string& col) {
    // Trim surrounding whitespace; from_chars wants a bare number.
    std::size_t b = cell.find_first_not_of(" \t\r");
    std::size_t e = cell.find_last_not_of(" \t\r");
    if (b == std::string_view::npos) {
        throw ValidationError("empty cell at data row " + std::to_string(row) +
                              ", column '" + col + "'");
    }
    cell = cell.substr(b, e - b + 1);
    double out = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last) {
        throw ValidationError("non-numeric value '" + std::string(cell) +
                              "' at data row " + std::to_string(row) +
                              ", column '" + col + "'");
    }
    return out;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    std::size_t e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

}  // namespace

void SurvivalDataset::finalize_order(const Eigen::MatrixXd& x,
                                     const Eigen::VectorXd& y,
                                     const std::vector<int>& ev,
                                     const std::vector<int>& source_index) {
    const int n = static_cast<int>(y.size());
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return y[a] > y[b]; });

    x_.resize(n, x.cols());
    durations_.resize(n);
    events_.resize(static_cast<std::size_t>(n));
    original_index_.resize(static_cast<std::size_t>(n));
    num_events_ = 0;
    for (int k = 0; k < n; ++k) {
        int src = order[static_cast<std::size_t>(k)];
        x_.row(k) = x.row(src);
        durations_[k] = y[src];
        events_[static_cast<std::size_t>(k)] = ev[static_cast<std::size_t>(src)];
        original_index_[static_cast<std::size_t>(k)] =
            source_index[static_cast<std::size_t>(src)];
        num_events_ += ev[static_cast<std::size_t>(src)];
    }

    // Last canonical index sharing each row's duration; scan backwards so a
    // run of ties all points at the run's end.
    risk_set_end_.assign(static_cast<std::size_t>(n), 0);
    for (int k = n - 1; k >= 0; --k) {
        if (k + 1 < n && durations_[k] == durations_[k + 1]) {
            risk_set_end_[static_cast<std::size_t>(k)] =
                risk_set_end_[static_cast<std::size_t>(k + 1)];
        } else {
            risk_set_end_[static_cast<std::size_t>(k)] = k;
        }
    }
}

SurvivalDataset SurvivalDataset::from_rows(Eigen::MatrixXd covariates,
                                           Eigen::VectorXd durations,
                                           std::vector<int> events,
                                           std::vector<std::string> feature_names) {
    const int n = static_cast<int>(durations.size());
    if (n == 0) throw ValidationError("dataset has no rows");
    if (covariates.rows() != n || static_cast<int>(events.size()) != n) {
        throw ValidationError("covariates, durations and events disagree on row count");
    }
    if (covariates.cols() == 0) throw ValidationError("dataset has no covariate columns");
    if (!feature_names.empty() &&
        static_cast<int>(feature_names.size()) != covariates.cols()) {
        throw ValidationError("feature name count does not match covariate columns");
    }
    for (int i = 0; i < n; ++i) {
        if (!std::isfinite(durations[i]) || durations[i] <= 0.0) {
            throw ValidationError("duration must be a positive finite number (row " +
                                  std::to_string(i + 1) + ")");
        }
        if (events[static_cast<std::size_t>(i)] != 0 &&
            events[static_cast<std::size_t>(i)] != 1) {
            throw ValidationError("event indicator must be 0 or 1 (row " +
                                  std::to_string(i + 1) + ")");
        }
    }
    if (!covariates.allFinite()) {
        throw ValidationError("covariates contain a non-finite value");
    }

    SurvivalDataset ds;
    if (feature_names.empty()) {
        for (int j = 0; j < covariates.cols(); ++j) {
            ds.feature_names_.push_back("x" + std::to_string(j + 1));
        }
    } else {
        ds.feature_names_ = std::move(feature_names);
    }
    std::vector<int> src(static_cast<std::size_t>(n));
    std::iota(src.begin(), src.end(), 0);
    ds.finalize_order(covariates, durations, events, src);
    return ds;
}

SurvivalDataset SurvivalDataset::load_csv(const std::string& path,
                                          const std::string& duration_col,
                                          const std::string& event_col) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open CSV file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw ValidationError("CSV file is empty: " + path);
    std::vector<std::string> header = split_line(line);
    for (auto& h : header) h = trim(h);
    if (header.size() < 3) {
        throw ValidationError("CSV needs at least one covariate column plus "
                              "duration and event columns: " + path);
    }
    const std::size_t ncol = header.size();

    auto column_of = [&](const std::string& name, std::size_t fallback) {
        if (name.empty()) return fallback;
        for (std::size_t j = 0; j < ncol; ++j) {
            if (header[j] == name) return j;
        }
        throw ValidationError("column '" + name + "' not found in " + path);
    };
    const std::size_t dur_at = column_of(duration_col, ncol - 2);
    const std::size_t ev_at = column_of(event_col, ncol - 1);
    if (dur_at == ev_at) {
        throw ValidationError("duration and event columns must differ");
    }
    std::vector<std::size_t> cov_cols;
    for (std::size_t j = 0; j < ncol; ++j) {
        if (j != dur_at && j != ev_at) cov_cols.push_back(j);
    }
    const std::size_t d = cov_cols.size();

    std::vector<double> flat;
    std::vector<double> ys;
    std::vector<int> evs;
    int row = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++row;
        std::vector<std::string> cells = split_line(line);
        if (cells.size() != ncol) {
            throw ValidationError("data row " + std::to_string(row) + " has " +
                                  std::to_string(cells.size()) + " columns, expected " +
                                  std::to_string(ncol));
        }
        for (std::size_t j : cov_cols) {
            flat.push_back(parse_double(cells[j], row, header[j]));
        }
        double y = parse_double(cells[dur_at], row, header[dur_at]);
        double e = parse_double(cells[ev_at], row, header[ev_at]);
        if (e != 0.0 && e != 1.0) {
            throw ValidationError("event indicator must be 0 or 1 at data row " +
                                  std::to_string(row) + ", column '" +
                                  header[ev_at] + "'");
        }
        ys.push_back(y);
        evs.push_back(static_cast<int>(e));
    }
    if (row == 0) throw ValidationError("CSV has a header but no data rows: " + path);

    const int n = row;
    Eigen::MatrixXd x(n, static_cast<int>(d));
    for (int i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            x(i, static_cast<int>(j)) = flat[static_cast<std::size_t>(i) * d + j];
        }
    }
    Eigen::VectorXd y = Eigen::Map<Eigen::VectorXd>(ys.data(), n);
    std::vector<std::string> names;
    for (std::size_t j : cov_cols) names.push_back(header[j]);
    SurvivalDataset ds =
        from_rows(std::move(x), std::move(y), std::move(evs), std::move(names));
    ds.duration_name_ = header[dur_at];
    ds.event_name_ = header[ev_at];
    return ds;
}

void SurvivalDataset::write_csv(const std::string& path,
                                const std::string& duration_col,
                                const std::string& event_col) const {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open file for writing: " + path);
    for (const auto& name : feature_names_) out << name << ",";
    out << (duration_col.empty() ? duration_name_ : duration_col) << ","
        << (event_col.empty() ? event_name_ : event_col) << "\n";
    char buf[40];
    for (int i = 0; i < size(); ++i) {
        for (int j = 0; j < num_features(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", x_(i, j));
            out << buf << ",";
        }
        std::snprintf(buf, sizeof(buf), "%.17g", durations_[i]);
        out << buf << "," << events_[static_cast<std::size_t>(i)] << "\n";
    }
    if (!out) throw ValidationError("failed while writing: " + path);
}

SurvivalDataset SurvivalDataset::standardize() const {
    const int n = size();
    const int d = num_features();
    Eigen::VectorXd mean(d), scale(d);
    Eigen::MatrixXd x = x_;
    for (int j = 0; j < d; ++j) {
        double m = x.col(j).mean();
        double var = (x.col(j).array() - m).square().sum() / n;
        double s = std::sqrt(var);
        if (s <= 1e-13 * (std::abs(m) + 1.0)) {
            throw ValidationError("column '" + feature_names_[static_cast<std::size_t>(j)] +
                                  "' has zero variance and cannot be standardized");
        }
        mean[j] = m;
        scale[j] = s;
        x.col(j) = (x.col(j).array() - m) / s;
    }
    SurvivalDataset out = *this;
    out.x_ = std::move(x);
    out.standardization_ = Standardization{std::move(mean), std::move(scale)};
    return out;
}

SurvivalDataset SurvivalDataset::with_covariates(Eigen::MatrixXd x) const {
    if (x.rows() != x_.rows() || x.cols() != x_.cols()) {
        throw ValidationError("replacement covariate matrix has a different shape");
    }
    if (!x.allFinite()) {
        throw ValidationError("replacement covariates contain a non-finite value");
    }
    SurvivalDataset out = *this;
    out.x_ = std::move(x);
    return out;
}

SplitResult SurvivalDataset::split(double test_fraction, std::uint64_t seed) const {
    if (!(test_fraction > 0.0) || !(test_fraction < 1.0)) {
        throw ValidationError("test fraction must lie strictly between 0 and 1");
    }
    const int n = size();
    int n_test = static_cast<int>(std::llround(test_fraction * n));
    if (n_test < 1) n_test = 1;
    if (n_test >= n) {
        throw ValidationError("test fraction leaves no training rows");
    }

    SplitMix64 rng(seed);
    std::vector<int> test_rows = sample_without_replacement(n, n_test, rng);
    std::vector<char> is_test(static_cast<std::size_t>(n), 0);
    for (int r : test_rows) is_test[static_cast<std::size_t>(r)] = 1;

    auto take = [&](bool want_test) {
        int cnt = want_test ? n_test : n - n_test;
        Eigen::MatrixXd x(cnt, num_features());
        Eigen::VectorXd y(cnt);
        std::vector<int> ev;
        std::vector<int> src;
        ev.reserve(static_cast<std::size_t>(cnt));
        src.reserve(static_cast<std::size_t>(cnt));
        int at = 0;
        for (int k = 0; k < n; ++k) {
            if (static_cast<bool>(is_test[static_cast<std::size_t>(k)]) != want_test)
                continue;
            x.row(at) = x_.row(k);
            y[at] = durations_[k];
            ev.push_back(events_[static_cast<std::size_t>(k)]);
            src.push_back(original_index_[static_cast<std::size_t>(k)]);
            ++at;
        }
        SurvivalDataset out;
        out.feature_names_ = feature_names_;
        out.duration_name_ = duration_name_;
        out.event_name_ = event_name_;
        out.standardization_ = standardization_;
        out.finalize_order(x, y, ev, src);
        return out;
    };

    SplitResult res{take(false), take(true)};
    if (res.train.num_events() == 0) {
        throw ValidationError("split produced a training set with no events");
    }
    if (res.test.num_events() == 0) {
        throw ValidationError("split produced a test set with no events");
    }
    return res;
}

SurvivalDataset SurvivalDataset::subset(const std::vector<int>& canonical_rows) const {
    if (canonical_rows.empty()) throw ValidationError("subset selects no rows");
    const int m = static_cast<int>(canonical_rows.size());
    Eigen::MatrixXd x(m, num_features());
    Eigen::VectorXd y(m);
    std::vector<int> ev, src;
    std::vector<char> seen(static_cast<std::size_t>(size()), 0);
    for (int at = 0; at < m; ++at) {
        int k = canonical_rows[static_cast<std::size_t>(at)];
        if (k < 0 || k >= size()) throw ValidationError("subset row index out of range");
        if (seen[static_cast<std::size_t>(k)]) {
            throw ValidationError("subset row indices must be distinct");
        }
        seen[static_cast<std::size_t>(k)] = 1;
        x.row(at) = x_.row(k);
        y[at] = durations_[k];
        ev.push_back(events_[static_cast<std::size_t>(k)]);
        src.push_back(original_index_[static_cast<std::size_t>(k)]);
    }
    SurvivalDataset out;
    out.feature_names_ = feature_names_;
    out.duration_name_ = duration_name_;
    out.event_name_ = event_name_;
    out.standardization_ = standardization_;
    out.finalize_order(x, y, ev, src);
    return out;
}

DataDiameter SurvivalDataset::diameter(NormOrder p, int exact_cutoff) const {
    const int n = size();
    const int d = num_features();
    DataDiameter out;
    if (n <= exact_cutoff) {
        Eigen::VectorXd diff(d + 1);
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                diff.head(d) = x_.row(i) - x_.row(j);
                diff[d] = durations_[i] - durations_[j];
                out.value = std::max(out.value, vector_norm(diff, p));
            }
        }
        return out;
    }
    // Coordinate-range upper bound for large N; cheaper and within a factor
    // of 2 of the exact diameter.
    Eigen::VectorXd range(d + 1);
    for (int j = 0; j < d; ++j) {
        range[j] = x_.col(j).maxCoeff() - x_.col(j).minCoeff();
    }
    range[d] = durations_.maxCoeff() - durations_.minCoeff();
    out.value = vector_norm(range, p);
    out.approximate = true;
    return out;
}

}  // namespace drlcox
