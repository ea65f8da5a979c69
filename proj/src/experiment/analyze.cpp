#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "lsp/error.hpp"
#include "lsp/experiment.hpp"
#include "lsp/stats.hpp"

namespace lsp::experiment {
namespace {

std::string display_name(const ScoreRecord& r) { return r.variant == "weighted" ? r.method + "-weighted" : r.method; }

bool direction_of(const std::string& metric) {
    auto m = metrics::parse_metric(metric);
    if (!m) throw SchemaError("unknown metric '" + metric + "' in scores");
    return metrics::higher_is_better(*m);
}

void save(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) throw Error("cannot write '" + path.string() + "'");
}

}  // namespace

AnalysisSummary cmd_analyze(const std::vector<ScoreRecord>& records, const std::filesystem::path& out_dir,
                            std::ostream& log) {
    std::vector<std::string> datasets, methods, metric_names;
    auto note = [](std::vector<std::string>& v, const std::string& s) {
        if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
    };
    std::map<std::pair<std::string, std::string>, std::vector<double>> random;  // (dataset, metric)
    std::map<std::tuple<std::string, std::string, std::string>, double> scores;  // (dataset, method, metric)
    for (const auto& r : records) {
        direction_of(r.metric);
        note(datasets, r.dataset);
        note(metric_names, r.metric);
        if (r.method == "rakeld") {
            random[{r.dataset, r.metric}].push_back(r.value);
            continue;
        }
        const auto name = display_name(r);
        note(methods, name);
        if (!scores.emplace(std::make_tuple(r.dataset, name, r.metric), r.value).second)
            throw SchemaError("duplicate score for " + r.dataset + "/" + name + "/" + r.metric);
    }

    AnalysisSummary summary;
    stats::LikelihoodTable likelihoods, method_scores;
    for (const auto& d : datasets) {
        bool any_random = false;
        for (const auto& t : metric_names) {
            auto it = random.find({d, t});
            if (it == random.end()) continue;
            any_random = true;
            const bool higher = direction_of(t);
            double sum = 0.0;
            for (double v : it->second) sum += v;
            for (const auto& m : methods) {
                auto s = scores.find({d, m, t});
                if (s == scores.end()) continue;
                likelihoods.set(d, m, t, stats::likelihood_better(s->second, it->second, higher));
                method_scores.set(d, m, t, s->second);
            }
            method_scores.set(d, random_baseline_name, t, sum / static_cast<double>(it->second.size()));
        }
        if (!any_random) {
            summary.excluded_datasets.push_back(d);
            log << "warning: dataset '" << d << "' has no rakeld samples; excluded\n";
        }
    }

    std::vector<stats::AggregateRow> rows;
    for (const auto& t : likelihoods.metrics())
        for (const auto& m : likelihoods.methods()) {
            auto column = likelihoods.column(m, t);
            if (column.size() >= 2) rows.push_back({m, t, stats::aggregate(column)});
        }
    if (rows.empty() && likelihoods.size() > 0) log << "note: fewer than two datasets; aggregates not computed\n";

    std::filesystem::create_directories(out_dir);
    std::ostringstream a, b, c;
    likelihoods.write_csv(a);
    stats::write_aggregates_csv(b, rows);
    method_scores.write_csv(c);
    save(out_dir / "likelihoods.csv", a.str());
    save(out_dir / "aggregates.csv", b.str());
    save(out_dir / "method_scores.csv", c.str());

    summary.likelihoods = likelihoods.size();
    summary.aggregates = rows.size();
    return summary;
}

}  // namespace lsp::experiment
