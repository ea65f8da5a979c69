#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lsp/error.hpp"
#include "lsp/experiment.hpp"
#include "lsp/transform.hpp"

using namespace lsp;
using namespace lsp::experiment;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("lsp-test-" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::size_t line_count(const fs::path& p) {
    auto text = slurp(p);
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

int cli(const std::string& args) {
    const std::string cmd = std::string(LSP_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

ExperimentConfig small_config(const fs::path& dir, std::size_t datasets) {
    ExperimentConfig c;
    for (std::size_t i = 0; i < datasets; ++i) {
        SyntheticSpec spec;
        spec.instances = 80;
        spec.seed = 10 + i;
        spec.name = "syn" + std::to_string(i);
        c.datasets.push_back(write_synthetic(spec, dir));
    }
    c.samples_per_k = 4;
    c.seed = 5;
    c.output_dir = dir / "out";
    return c;
}

}  // namespace

TEST_CASE("method names") {
    for (const auto& m : default_methods()) CHECK(MethodSpec::parse(m.name()) == m);
    CHECK(default_methods().size() == 13);
    auto w = MethodSpec::parse("walktrap-weighted");
    REQUIRE(w);
    CHECK(w->method_column() == "walktrap");
    CHECK(w->variant_column() == "weighted");
    CHECK(MethodSpec::parse("BR")->variant_column().empty());
    CHECK_FALSE(MethodSpec::parse("walktrap-heavy"));
}

TEST_CASE("config parsing") {
    auto c = parse_config(R"({
        "datasets": [{"name": "scene", "train": "data/scene-train.arff", "test": "data/scene-test.arff",
                      "xml": "data/scene.xml"}],
        "methods": ["BR", "rakeld", "infomap-weighted"],
        "samples_per_k": 10, "seed": 3,
        "cart": {"max_depth": 4},
        "metrics": ["f1_micro", "hamming_loss"],
        "detectors": {"walktrap_steps": 3},
        "output_dir": "res", "threads": 2})",
                          "/base");
    REQUIRE(c.datasets.size() == 1);
    CHECK(c.datasets[0].train == fs::path("/base/data/scene-train.arff"));
    CHECK(c.methods.size() == 3);
    CHECK(c.samples_per_k == 10);
    CHECK(c.cart.max_depth == 4);
    CHECK(c.cart.min_samples_to_split == 2);
    CHECK(c.metrics == std::vector<metrics::Metric>{metrics::Metric::f1_micro, metrics::Metric::hamming_loss});
    CHECK(c.detector.walktrap_steps == 3);
    CHECK(c.output_dir == fs::path("/base/res"));
    CHECK(c.threads == 2);

    auto d = parse_config("{}");
    CHECK(d.methods == default_methods());
    CHECK(d.samples_per_k == 250);
    CHECK_FALSE(d.cart.max_depth);
}

TEST_CASE("config errors") {
    CHECK_THROWS_AS(parse_config("{"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"sample_per_k": 3})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"methods": ["SVM"]})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"metrics": ["accuracy"]})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"samples_per_k": 0})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"k_percentages": [0]})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"cart": {"max_depth": 0}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"datasets": [{"name": "a"}]})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"seed": "x"})"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("scores csv round trip") {
    std::vector<ScoreRecord> records{{"d", "BR", "", std::nullopt, std::nullopt, "jaccard", 0.5},
                                     {"d", "rakeld", "", 2, 7, "jaccard", 0.1234567},
                                     {"d", "walktrap", "weighted", std::nullopt, std::nullopt, "f1_micro", 1.0}};
    std::stringstream io;
    write_scores_csv(io, records);
    CHECK(io.str() == "dataset,method,variant,k,sample_id,metric,value\nd,BR,,,,jaccard,0.500000\n"
                      "d,rakeld,,2,7,jaccard,0.123457\nd,walktrap,weighted,,,f1_micro,1.000000\n");
    auto back = read_scores_csv(io);
    REQUIRE(back.size() == 3);
    CHECK(back[1].k == 2u);
    CHECK(back[1].value == 0.123457);

    std::istringstream missing_k("dataset,method,variant,k,sample_id,metric,value\nd,rakeld,,,,jaccard,0.5\n");
    CHECK_THROWS_AS(read_scores_csv(missing_k), ParseError);
    std::istringstream bad_header("a,b\n");
    CHECK_THROWS_AS(read_scores_csv(bad_header), ParseError);
}

TEST_CASE("cell seeds depend only on coordinates") {
    CHECK(cell_seed(1, "d", "rakeld", 2, 3) == cell_seed(1, "d", "rakeld", 2, 3));
    CHECK(cell_seed(1, "d", "rakeld", 2, 3) != cell_seed(1, "d", "rakeld", 2, 4));
    CHECK(cell_seed(1, "d", "rakeld", 2, 3) != cell_seed(2, "d", "rakeld", 2, 3));
    CHECK(cell_seed(1, "ab", "c", std::nullopt, std::nullopt) != cell_seed(1, "a", "bc", std::nullopt, std::nullopt));
}

TEST_CASE("run record counts follow the closed form") {
    auto dir = scratch("count");
    auto c = small_config(dir, 1);
    std::ostringstream log;

    c.methods = {*MethodSpec::parse("BR")};
    CHECK(run(c, log).records.size() == c.metrics.size());

    c.methods = default_methods();
    auto r = run(c, log);
    std::size_t expected = 12;
    for (auto k : transform::k_grid(6, c.k_percentages)) {
        const auto universe = transform::count_partitions(6, k);
        expected += universe < c.samples_per_k ? universe.convert_to<std::size_t>() : c.samples_per_k;
    }
    CHECK(r.failures.empty());
    CHECK(r.evaluations == expected);
    CHECK(r.records.size() == expected * c.metrics.size());

    c.datasets.clear();
    CHECK(run(c, log).records.empty());
}

TEST_CASE("run output does not depend on the thread count") {
    auto dir = scratch("threads");
    auto c = small_config(dir, 1);
    std::ostringstream log;
    c.threads = 1;
    cmd_run(c, log);
    const auto single = slurp(c.output_dir / "scores.csv");
    c.threads = 4;
    cmd_run(c, log);
    CHECK(slurp(c.output_dir / "scores.csv") == single);
    CHECK(line_count(c.output_dir / "divisions.csv") > 1);
}

TEST_CASE("missing dataset files become failures") {
    auto dir = scratch("missing");
    ExperimentConfig c;
    c.datasets.push_back({"ghost", dir / "a.arff", dir / "b.arff", dir / "c.xml"});
    c.output_dir = dir / "out";
    std::ostringstream log;
    auto r = cmd_run(c, log);
    CHECK(r.records.empty());
    REQUIRE(r.failures.size() == 1);
    CHECK(r.failures[0].stage == "load");
    CHECK(slurp(c.output_dir / "scores.csv") == std::string(scores_header) + "\n");
}

TEST_CASE("analyze and report") {
    auto dir = scratch("pipeline");
    auto c = small_config(dir, 3);
    std::ostringstream log;
    auto r = cmd_run(c, log);
    auto summary = cmd_analyze(r.records, dir / "analysis", log);
    // 12 methods x 5 metrics x 3 datasets
    CHECK(summary.likelihoods == 180);
    CHECK(summary.aggregates == 60);
    CHECK(summary.excluded_datasets.empty());
    CHECK(line_count(dir / "analysis" / "likelihoods.csv") == 181);
    CHECK(line_count(dir / "analysis" / "aggregates.csv") == 61);

    cmd_report(dir / "analysis", 0.05, dir / "report", log);
    const auto md = slurp(dir / "report" / "report.md");
    CHECK(md.find("f1_micro") != std::string::npos);
    CHECK(line_count(dir / "report" / "tests.csv") == 6);
    // 12 methods plus the averaged baseline; one is the control
    CHECK(line_count(dir / "report" / "posthoc.csv") == 1 + 5 * 12);
    CHECK(line_count(dir / "report" / "histograms.csv") == 1 + 5 * 12 * 20);
    CHECK(slurp(dir / "report" / "histograms.csv").rfind("method,metric,bin_low,bin_high,count\n", 0) == 0);
}

TEST_CASE("analyze rejects inconsistent scores") {
    auto dir = scratch("bad-scores");
    std::ostringstream log;
    std::vector<ScoreRecord> dup{{"d", "BR", "", std::nullopt, std::nullopt, "jaccard", 0.5},
                                 {"d", "BR", "", std::nullopt, std::nullopt, "jaccard", 0.6}};
    CHECK_THROWS_AS(cmd_analyze(dup, dir, log), SchemaError);
    std::vector<ScoreRecord> unknown{{"d", "BR", "", std::nullopt, std::nullopt, "accuracy", 0.5}};
    CHECK_THROWS_AS(cmd_analyze(unknown, dir, log), SchemaError);
}

TEST_CASE("histogram") {
    auto h = histogram({0.0, 0.04, 0.05, 0.5, 1.0, 1.0}, 20);
    REQUIRE(h.size() == 20);
    CHECK(h[0].count == 2);
    CHECK(h[1].count == 1);
    CHECK(h[10].count == 1);
    CHECK(h[19].count == 2);
    CHECK(h[19].high == 1.0);
    std::size_t total = 0;
    for (const auto& b : h) total += b.count;
    CHECK(total == 6);
    CHECK_THROWS_AS(histogram({1.5}), InvalidArgument);
}

TEST_CASE("command line exit codes") {
    auto dir = scratch("cli");
    CHECK(cli("count -n 6 -k 2") == 0);
    CHECK(cli("count -n 6") == 1);
    CHECK(cli("count -n 6 -k 9") == 1);
    CHECK(cli("run -c " + (dir / "missing.json").string()) == 1);
    std::ofstream(dir / "bad.json") << R"({"unknown": 1})";
    CHECK(cli("run -c " + (dir / "bad.json").string()) == 1);
    std::ofstream(dir / "scores.csv") << "dataset,method\n";
    CHECK(cli("analyze -s " + (dir / "scores.csv").string() + " -o " + (dir / "a").string()) == 2);
    CHECK(cli("synth -o " + dir.string()) == 0);
    CHECK(cli("graph --train " + (dir / "synthetic-train.arff").string() + " --xml " + (dir / "synthetic.xml").string()) == 0);
    CHECK(cli("detect --train " + (dir / "synthetic-train.arff").string() + " --xml " + (dir / "synthetic.xml").string() +
              " --algorithm louvain") == 1);
}
