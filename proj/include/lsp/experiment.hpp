#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lsp/cart.hpp"
#include "lsp/community.hpp"
#include "lsp/metrics.hpp"

namespace lsp::experiment {

struct DatasetEntry {
    std::string name;
    std::filesystem::path train;
    std::filesystem::path test;
    std::filesystem::path xml;
};

/// A classifier arm of the run matrix: BR, LP, the RAkELd random baseline, or
/// one community detector on the weighted or unweighted label graph.
struct MethodSpec {
    enum class Kind { binary_relevance, label_powerset, rakeld, detector };
    Kind kind = Kind::binary_relevance;
    community::Algorithm algorithm = community::Algorithm::fastgreedy;
    bool weighted = false;

    /// "BR", "LP", "rakeld", "fastgreedy", "fastgreedy-weighted", ...
    std::string name() const;
    /// Column values for the scores CSV.
    std::string method_column() const;
    std::string variant_column() const;

    static std::optional<MethodSpec> parse(std::string_view name);
    friend bool operator==(const MethodSpec&, const MethodSpec&) = default;
};

/// BR, LP, rakeld and all ten detector variants.
std::vector<MethodSpec> default_methods();

struct ExperimentConfig {
    std::vector<DatasetEntry> datasets;
    std::vector<MethodSpec> methods = default_methods();
    std::vector<int> k_percentages{10, 20, 30, 40, 50, 60, 70, 80, 90};
    std::size_t samples_per_k = 250;
    std::uint64_t seed = 0;
    cart::CartParams cart;
    std::vector<metrics::Metric> metrics{std::begin(metrics::all_metrics), std::end(metrics::all_metrics)};
    community::DetectorConfig detector;  // algorithm, weights and seed are set per cell
    std::filesystem::path output_dir = "results";
    unsigned threads = 0;  // 0 = hardware concurrency

    /// Throws ConfigError.
    void validate() const;
};

/// Parses the JSON config; relative paths resolve against `base_dir`.
/// Throws ConfigError on malformed or invalid content.
ExperimentConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

struct ScoreRecord {
    std::string dataset;
    std::string method;
    std::string variant;
    std::optional<std::size_t> k;
    std::optional<std::size_t> sample_id;
    std::string metric;
    double value = 0.0;

    friend bool operator==(const ScoreRecord&, const ScoreRecord&) = default;
};

inline constexpr const char* scores_header = "dataset,method,variant,k,sample_id,metric,value";

void write_scores_csv(std::ostream& out, const std::vector<ScoreRecord>& records);
std::vector<ScoreRecord> read_scores_csv(std::istream& in);

struct Failure {
    std::string dataset;
    std::string stage;
    std::string message;
};

struct RunResult {
    std::vector<ScoreRecord> records;
    std::vector<Failure> failures;
    std::size_t evaluations = 0;
};

/// Seed for one cell of the run matrix; depends only on its coordinates.
std::uint64_t cell_seed(std::uint64_t seed, std::string_view dataset, std::string_view method,
                        std::optional<std::size_t> k, std::optional<std::size_t> sample_id);

/// Trains and evaluates every (dataset, method, partition) cell. Output does
/// not depend on the thread count.
RunResult run(const ExperimentConfig& config, std::ostream& log);

/// run() plus scores.csv, divisions.csv and failures.csv under output_dir.
RunResult cmd_run(const ExperimentConfig& config, std::ostream& log);

struct AnalysisSummary {
    std::size_t likelihoods = 0;
    std::size_t aggregates = 0;
    std::vector<std::string> excluded_datasets;
};

/// Writes likelihoods.csv, aggregates.csv and method_scores.csv (raw method
/// scores plus the per-dataset RAkELd mean as "rakeld-mean") into out_dir.
AnalysisSummary cmd_analyze(const std::vector<ScoreRecord>& records, const std::filesystem::path& out_dir,
                            std::ostream& log);

inline constexpr const char* random_baseline_name = "rakeld-mean";

/// Reads the cmd_analyze outputs in `analysis_dir` and writes
/// report.md, histograms.csv, tests.csv and posthoc.csv into out_dir.
void cmd_report(const std::filesystem::path& analysis_dir, double alpha, const std::filesystem::path& out_dir,
                std::ostream& log);

struct HistogramBin {
    double low = 0.0;
    double high = 0.0;
    std::size_t count = 0;
};

/// `bins` equal-width bins over [0, 1]; the last bin is closed.
std::vector<HistogramBin> histogram(const std::vector<double>& values, std::size_t bins = 20);

struct SyntheticSpec {
    std::size_t labels = 6;
    std::size_t instances = 200;
    std::size_t features = 8;
    double train_fraction = 0.7;
    std::uint64_t seed = 1;
    std::string name = "synthetic";
};

/// Writes <name>-train.arff, <name>-test.arff and <name>.xml; labels come in
/// correlated groups so the co-occurrence graph has structure.
DatasetEntry write_synthetic(const SyntheticSpec& spec, const std::filesystem::path& dir);

}  // namespace lsp::experiment
