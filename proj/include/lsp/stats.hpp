#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "lsp/matrix.hpp"

namespace lsp::stats {

/// Fraction of `random_scores` strictly worse than `method_score`.
double likelihood_better(double method_score, std::span<const double> random_scores, bool higher_is_better);

struct Aggregate {
    double min = 0.0;
    double median = 0.0;
    double mean = 0.0;
    double std = 0.0;  // sample standard deviation (n - 1)
};

/// Needs at least two values.
Aggregate aggregate(std::span<const double> values);

/// Probabilities keyed by (dataset, method, metric). Iteration follows first
/// insertion order of each key component.
class LikelihoodTable {
public:
    void set(const std::string& dataset, const std::string& method, const std::string& metric, double value);
    std::optional<double> get(const std::string& dataset, const std::string& method, const std::string& metric) const;

    const std::vector<std::string>& datasets() const noexcept { return datasets_; }
    const std::vector<std::string>& methods() const noexcept { return methods_; }
    const std::vector<std::string>& metrics() const noexcept { return metrics_; }
    std::size_t size() const noexcept { return values_.size(); }

    /// Values of one (method, metric) over the datasets that have it, in dataset order.
    std::vector<double> column(const std::string& method, const std::string& metric) const;

    /// `dataset,method,metric,value`, values with six decimals.
    void write_csv(std::ostream& out) const;
    static LikelihoodTable read_csv(std::istream& in);

private:
    using Key = std::tuple<std::size_t, std::size_t, std::size_t>;
    static std::size_t intern(std::vector<std::string>& names, const std::string& name);
    static std::optional<std::size_t> find(const std::vector<std::string>& names, const std::string& name);

    std::vector<std::string> datasets_;
    std::vector<std::string> methods_;
    std::vector<std::string> metrics_;
    std::map<Key, double> values_;
};

Aggregate aggregate_likelihoods(const LikelihoodTable& table, const std::string& method, const std::string& metric);

struct AggregateRow {
    std::string method;
    std::string metric;
    Aggregate value;
};

/// `method,metric,min,median,mean,std`, six decimals.
void write_aggregates_csv(std::ostream& out, std::span<const AggregateRow> rows);
std::vector<AggregateRow> read_aggregates_csv(std::istream& in);

struct RankResult {
    Matrix<double> ranks;  // datasets x methods, 1 = best, ties averaged
    std::vector<double> mean_ranks;
};

/// `scores` holds one row per dataset and one column per method.
RankResult friedman_ranks(const Matrix<double>& scores, bool higher_is_better);

struct ImanDavenport {
    double chi2 = 0.0;
    double f = 0.0;
    double df1 = 0.0;
    double df2 = 0.0;
    double p = 1.0;
    bool degenerate = false;  // chi2 == N(k-1): ranks identical on every dataset, p reported as 0
};

ImanDavenport iman_davenport(std::span<const double> mean_ranks, std::size_t dataset_count);

/// Rom's step-up critical values alpha_1 >= alpha_2 >= ... >= alpha_m, where
/// alpha_i is compared with the i-th largest p-value.
std::vector<double> rom_thresholds(std::size_t m, double alpha);

struct Comparison {
    std::size_t method = 0;
    double z = 0.0;
    double p = 1.0;  // one-sided: method ranks better than control
    double threshold = 0.0;
    bool significant = false;
};

/// One entry per non-control method, in method order.
std::vector<Comparison> rom_posthoc(std::span<const double> mean_ranks, std::size_t dataset_count,
                                    std::size_t control, double alpha);

double normal_cdf(double x);
double f_cdf(double x, double df1, double df2);
/// Upper tail 1 - f_cdf, computed without cancellation.
double f_sf(double x, double df1, double df2);

}  // namespace lsp::stats
