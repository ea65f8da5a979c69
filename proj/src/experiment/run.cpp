#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "lsp/dataset.hpp"
#include "lsp/error.hpp"
#include "lsp/experiment.hpp"
#include "lsp/label_graph.hpp"
#include "lsp/transform.hpp"

namespace lsp::experiment {
namespace {

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::uint64_t h, std::string_view s) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

struct Cell {
    MethodSpec method;
    std::optional<std::size_t> k;
    std::optional<std::size_t> sample_id;
    std::optional<Partition> partition;  // fixed up front for rakeld
};

struct CellOutput {
    std::vector<double> values;  // one per configured metric
    Partition partition;
    std::string error;
};

std::string format_partition(const Partition& p) {
    std::string s;
    for (std::size_t b = 0; b < p.block_count(); ++b) {
        if (b) s += '|';
        for (std::size_t i = 0; i < p.blocks()[b].size(); ++i) {
            if (i) s += ' ';
            s += std::to_string(p.blocks()[b][i]);
        }
    }
    return s;
}

class DatasetRun {
public:
    DatasetRun(const ExperimentConfig& config, const DatasetEntry& entry, const DatasetPair& data)
        : config_(config), entry_(entry), data_(data) {}

    std::vector<Cell> plan(std::vector<Failure>& failures) const {
        std::vector<Cell> cells;
        for (const auto& m : config_.methods) {
            if (m.kind != MethodSpec::Kind::rakeld) {
                cells.push_back({m, std::nullopt, std::nullopt, std::nullopt});
                continue;
            }
            try {
                const std::size_t n = data_.train.label_count();
                for (auto k : transform::k_grid(n, config_.k_percentages)) {
                    auto parts = transform::sample_partitions(
                        n, k, config_.samples_per_k, cell_seed(config_.seed, entry_.name, "rakeld", k, std::nullopt));
                    for (std::size_t s = 0; s < parts.size(); ++s) cells.push_back({m, k, s, std::move(parts[s])});
                }
            } catch (const Error& e) {
                failures.push_back({entry_.name, "rakeld", e.what()});
            }
        }
        return cells;
    }

    CellOutput evaluate(const Cell& cell) const {
        CellOutput out;
        try {
            out.partition = division(cell);
            const auto& train = data_.train;
            const auto& test = data_.test;
            LabelMatrix predicted;
            const std::size_t L = train.label_count();
            if (cell.method.kind == MethodSpec::Kind::binary_relevance) {
                auto model = transform::br_train(train, config_.cart);
                predicted = transform::predict_matrix(
                    [&](std::span<const double> x) { return transform::br_predict(model, x); }, test.features(), L);
            } else {
                auto origin = cell.method.kind == MethodSpec::Kind::rakeld      ? transform::PartitionOrigin::random
                              : cell.method.kind == MethodSpec::Kind::detector ? transform::PartitionOrigin::community
                                                                               : transform::PartitionOrigin::apriori;
                auto model = transform::ensemble_train(train, {out.partition, origin}, config_.cart);
                predicted = transform::predict_matrix(
                    [&](std::span<const double> x) { return transform::ensemble_predict(model, x); }, test.features(),
                    L);
            }
            metrics::PredictionBatch batch(test.labels(), predicted);
            for (auto m : config_.metrics) out.values.push_back(metrics::evaluate(m, batch));
        } catch (const std::exception& e) {
            out.error = e.what();
            out.values.clear();
        }
        return out;
    }

private:
    Partition division(const Cell& cell) const {
        const std::size_t L = data_.train.label_count();
        switch (cell.method.kind) {
            case MethodSpec::Kind::binary_relevance: return Partition::singletons(L);
            case MethodSpec::Kind::label_powerset: return Partition::single_block(L);
            case MethodSpec::Kind::rakeld: return *cell.partition;
            case MethodSpec::Kind::detector: break;
        }
        community::DetectorConfig dc = config_.detector;
        dc.algorithm = cell.method.algorithm;
        dc.use_weights = cell.method.weighted;
        dc.rng_seed = cell_seed(config_.seed, entry_.name, cell.method.name(), std::nullopt, std::nullopt);
        const auto graph = build_cooccurrence_graph(data_.train.labels(), cell.method.weighted);
        return community::detect(graph, dc);
    }

    const ExperimentConfig& config_;
    const DatasetEntry& entry_;
    const DatasetPair& data_;
};

template <class F>
void parallel_for(std::size_t count, unsigned threads, F&& body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) body(i);
    };
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
}

struct DivisionRow {
    std::string dataset, method, variant;
    std::optional<std::size_t> k, sample_id;
    std::string partition;
};

RunResult run_impl(const ExperimentConfig& config, std::ostream& log, std::vector<DivisionRow>* divisions) {
    config.validate();
    RunResult result;
    for (const auto& entry : config.datasets) {
        DatasetPair data;
        try {
            data = load_pair(entry.train, entry.test, entry.xml);
            if (data.train.instance_count() == 0) throw SchemaError("training set has no instances");
            if (data.test.instance_count() == 0) throw SchemaError("test set has no instances");
        } catch (const Error& e) {
            result.failures.push_back({entry.name, "load", e.what()});
            log << entry.name << ": skipped (" << e.what() << ")\n";
            continue;
        }

        DatasetRun run(config, entry, data);
        const auto cells = run.plan(result.failures);
        std::vector<CellOutput> outputs(cells.size());
        parallel_for(cells.size(), config.threads, [&](std::size_t i) { outputs[i] = run.evaluate(cells[i]); });

        std::size_t ok = 0;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const auto& cell = cells[i];
            const auto& out = outputs[i];
            if (!out.error.empty()) {
                result.failures.push_back({entry.name, cell.method.name(), out.error});
                continue;
            }
            ++ok;
            for (std::size_t m = 0; m < config.metrics.size(); ++m)
                result.records.push_back({entry.name, cell.method.method_column(), cell.method.variant_column(), cell.k,
                                          cell.sample_id, std::string(metrics::metric_name(config.metrics[m])),
                                          out.values[m]});
            if (divisions)
                divisions->push_back({entry.name, cell.method.method_column(), cell.method.variant_column(), cell.k,
                                      cell.sample_id, format_partition(out.partition)});
        }
        result.evaluations += ok;
        log << entry.name << ": " << ok << " evaluations, " << data.train.label_count() << " labels\n";
    }
    return result;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw Error("write to '" + path.string() + "' failed");
}

std::string optional_field(std::optional<std::size_t> v) { return v ? std::to_string(*v) : std::string(); }

}  // namespace

std::uint64_t cell_seed(std::uint64_t seed, std::string_view dataset, std::string_view method,
                        std::optional<std::size_t> k, std::optional<std::size_t> sample_id) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    h = fnv1a(h, dataset);
    h = fnv1a(h, "\x1f");
    h = fnv1a(h, method);
    h = fnv1a(h, "\x1f");
    h = fnv1a(h, k ? std::to_string(*k) : "-");
    h = fnv1a(h, "\x1f");
    h = fnv1a(h, sample_id ? std::to_string(*sample_id) : "-");
    return splitmix(seed ^ splitmix(h));
}

RunResult run(const ExperimentConfig& config, std::ostream& log) { return run_impl(config, log, nullptr); }

RunResult cmd_run(const ExperimentConfig& config, std::ostream& log) {
    std::vector<DivisionRow> divisions;
    auto result = run_impl(config, log, &divisions);
    std::filesystem::create_directories(config.output_dir);

    std::ostringstream scores;
    write_scores_csv(scores, result.records);
    write_file(config.output_dir / "scores.csv", scores.str());

    std::ostringstream div;
    div << "dataset,method,variant,k,sample_id,partition\n";
    for (const auto& d : divisions)
        div << d.dataset << ',' << d.method << ',' << d.variant << ',' << optional_field(d.k) << ','
            << optional_field(d.sample_id) << ',' << d.partition << '\n';
    write_file(config.output_dir / "divisions.csv", div.str());

    std::ostringstream fail;
    fail << "dataset,stage,message\n";
    for (const auto& f : result.failures) {
        std::string msg = f.message;
        std::replace_if(msg.begin(), msg.end(), [](char c) { return c == ',' || c == '\n' || c == '\r'; }, ' ');
        fail << f.dataset << ',' << f.stage << ',' << msg << '\n';
    }
    write_file(config.output_dir / "failures.csv", fail.str());
    return result;
}

}  // namespace lsp::experiment
