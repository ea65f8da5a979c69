#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "lsp/community.hpp"
#include "lsp/dataset.hpp"
#include "lsp/error.hpp"
#include "lsp/experiment.hpp"
#include "lsp/label_graph.hpp"
#include "lsp/transform.hpp"

namespace {

enum Exit { ok = 0, config_error = 1, data_error = 2, internal_error = 3 };

lsp::Dataset load_single(const std::string& arff, const std::string& xml) {
    const auto names = lsp::parse_label_header(lsp::read_text_file(xml));
    return lsp::parse_arff(lsp::read_text_file(arff), names);
}

std::vector<lsp::experiment::ScoreRecord> load_scores(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw lsp::Error("cannot open '" + path + "'");
    return lsp::experiment::read_scores_csv(in);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Label space division experiments: data-driven vs random label partitions"};
    app.require_subcommand(1);

    std::string config_path;
    int threads = -1;
    auto* run = app.add_subcommand("run", "Train and score every configured method; writes scores.csv");
    run->add_option("-c,--config", config_path, "JSON experiment config")->required();
    run->add_option("-j,--threads", threads, "Worker threads (overrides config; 0 = all cores)");

    std::string scores_path, analysis_out;
    auto* analyze = app.add_subcommand("analyze", "Likelihoods of beating RAkELd and their aggregates");
    analyze->add_option("-s,--scores", scores_path, "scores.csv from run")->required();
    analyze->add_option("-o,--out", analysis_out, "Output directory")->required();

    std::string report_in, report_out;
    double alpha = 0.05;
    auto* report = app.add_subcommand("report", "Friedman/Iman-Davenport, Rom post-hoc, histograms");
    report->add_option("-i,--input", report_in, "Directory written by analyze")->required();
    report->add_option("-o,--out", report_out, "Output directory")->required();
    report->add_option("-a,--alpha", alpha, "Significance level")->capture_default_str();

    lsp::experiment::SyntheticSpec synth_spec;
    std::string synth_out;
    auto* synth = app.add_subcommand("synth", "Write a synthetic multi-label dataset (ARFF + XML)");
    synth->add_option("-o,--out", synth_out, "Output directory")->required();
    synth->add_option("--labels", synth_spec.labels)->capture_default_str();
    synth->add_option("--instances", synth_spec.instances)->capture_default_str();
    synth->add_option("--features", synth_spec.features)->capture_default_str();
    synth->add_option("--train-fraction", synth_spec.train_fraction)->capture_default_str();
    synth->add_option("--seed", synth_spec.seed)->capture_default_str();
    synth->add_option("--name", synth_spec.name)->capture_default_str();

    std::string train_path, xml_path, algorithm = "fastgreedy";
    bool weighted = false;
    std::uint64_t seed = 0;
    auto* graph = app.add_subcommand("graph", "Print the label co-occurrence graph as an edge list");
    graph->add_option("--train", train_path, "Training ARFF")->required();
    graph->add_option("--xml", xml_path, "Label header XML")->required();
    graph->add_flag("--weighted", weighted, "Co-occurrence counts as weights");

    auto* detect = app.add_subcommand("detect", "Print the label space division found by a detector");
    detect->add_option("--train", train_path, "Training ARFF")->required();
    detect->add_option("--xml", xml_path, "Label header XML")->required();
    detect->add_option("--algorithm", algorithm,
                       "fastgreedy | leading_eigenvector | label_propagation | walktrap | infomap")
        ->capture_default_str();
    detect->add_flag("--weighted", weighted, "Use co-occurrence counts as weights");
    detect->add_option("--seed", seed)->capture_default_str();

    std::size_t n = 0, k = 0, sample = 0;
    auto* parts = app.add_subcommand("partitions", "Enumerate or sample label partitions into blocks of size k");
    parts->add_option("-n,--labels", n)->required();
    parts->add_option("-k,--block-size", k)->required();
    parts->add_option("--sample", sample, "Draw this many distinct partitions instead of enumerating");
    parts->add_option("--seed", seed)->capture_default_str();

    auto* count = app.add_subcommand("count", "Number of partitions of n labels into blocks of size k");
    count->add_option("-n,--labels", n)->required();
    count->add_option("-k,--block-size", k)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return config_error;
    }

    try {
        if (*run) {
            auto config = lsp::experiment::load_config(config_path);
            if (threads >= 0) config.threads = static_cast<unsigned>(threads);
            auto result = lsp::experiment::cmd_run(config, std::cerr);
            std::cerr << result.records.size() << " score records, " << result.failures.size() << " failures -> "
                      << (config.output_dir / "scores.csv").string() << '\n';
        } else if (*analyze) {
            auto summary = lsp::experiment::cmd_analyze(load_scores(scores_path), analysis_out, std::cerr);
            std::cerr << summary.likelihoods << " likelihoods, " << summary.aggregates << " aggregate rows\n";
        } else if (*report) {
            lsp::experiment::cmd_report(report_in, alpha, report_out, std::cerr);
        } else if (*synth) {
            auto entry = lsp::experiment::write_synthetic(synth_spec, synth_out);
            std::cout << entry.train.string() << '\n' << entry.test.string() << '\n' << entry.xml.string() << '\n';
        } else if (*graph) {
            lsp::build_cooccurrence_graph(load_single(train_path, xml_path).labels(), weighted).write_edge_list(std::cout);
        } else if (*detect) {
            auto a = lsp::community::parse_algorithm(algorithm);
            if (!a) throw lsp::ConfigError("unknown algorithm '" + algorithm + "'");
            lsp::community::DetectorConfig dc;
            dc.algorithm = *a;
            dc.use_weights = weighted;
            dc.rng_seed = seed;
            auto g = lsp::build_cooccurrence_graph(load_single(train_path, xml_path).labels(), weighted);
            lsp::community::detect(g, dc).write(std::cout);
        } else if (*parts) {
            auto list = sample ? lsp::transform::sample_partitions(n, k, sample, seed)
                               : lsp::transform::enumerate_partitions(n, k);
            for (std::size_t i = 0; i < list.size(); ++i) {
                std::cout << "# partition " << i << '\n';
                list[i].write(std::cout);
            }
        } else if (*count) {
            std::cout << lsp::transform::count_partitions(n, k) << '\n';
        }
    } catch (const lsp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const lsp::InvalidArgument& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return config_error;
    } catch (const lsp::Error& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return data_error;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return internal_error;
    }
    return ok;
}
