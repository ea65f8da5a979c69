#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "lsp/error.hpp"
#include "lsp/experiment.hpp"
#include "lsp/stats.hpp"

namespace lsp::experiment {
namespace {

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

std::string f6(double v) { return fmt("%.6f", v); }

stats::LikelihoodTable load_table(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    return stats::LikelihoodTable::read_csv(in);
}

void save(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) throw Error("cannot write '" + path.string() + "'");
}

bool is_data_driven(const std::string& method) {
    auto spec = MethodSpec::parse(method);
    return spec && spec->kind == MethodSpec::Kind::detector;
}

bool is_apriori(const std::string& method) { return method == "BR" || method == "LP"; }

struct MetricTests {
    std::string metric;
    std::vector<std::string> methods;
    std::size_t datasets = 0;
    std::vector<double> mean_ranks;
    stats::ImanDavenport omnibus;
    std::vector<stats::Comparison> comparisons;
    bool skipped = true;
    std::string notice;
};

MetricTests run_tests(const stats::LikelihoodTable& scores, const std::string& metric, double alpha) {
    MetricTests t;
    t.metric = metric;
    for (const auto& m : scores.methods())
        if (!scores.column(m, metric).empty()) t.methods.push_back(m);
    auto control = std::find(t.methods.begin(), t.methods.end(), random_baseline_name);
    if (control == t.methods.end()) {
        t.notice = "no random baseline scores";
        return t;
    }
    std::vector<std::vector<double>> rows;
    for (const auto& d : scores.datasets()) {
        std::vector<double> row;
        for (const auto& m : t.methods)
            if (auto v = scores.get(d, m, metric)) row.push_back(*v);
        if (row.size() == t.methods.size()) rows.push_back(std::move(row));
    }
    t.datasets = rows.size();
    if (rows.size() < 2 || t.methods.size() < 2) {
        t.notice = "fewer than two complete datasets; tests skipped";
        return t;
    }
    auto direction = metrics::parse_metric(metric);
    if (!direction) throw SchemaError("unknown metric '" + metric + "'");
    auto ranks = stats::friedman_ranks(Matrix<double>::from_rows(rows), metrics::higher_is_better(*direction));
    t.mean_ranks = ranks.mean_ranks;
    t.omnibus = stats::iman_davenport(t.mean_ranks, rows.size());
    t.comparisons = stats::rom_posthoc(t.mean_ranks, rows.size(),
                                       static_cast<std::size_t>(control - t.methods.begin()), alpha);
    t.skipped = false;
    return t;
}

struct Hypotheses {
    std::string rh1 = "n/a", rh2 = "n/a", rh3 = "n/a", rh4 = "n/a", recommended = "n/a";
};

std::string yes_no(bool b) { return b ? "Yes" : "No"; }

Hypotheses evaluate_hypotheses(const stats::LikelihoodTable& lk, const std::string& metric, const MetricTests& tests,
                               double alpha) {
    Hypotheses h;
    if (!tests.skipped) {
        bool any = false;
        for (const auto& c : tests.comparisons) any |= c.significant && is_data_driven(tests.methods[c.method]);
        h.rh1 = yes_no(any && tests.omnibus.p < alpha);
    }
    std::optional<double> dd_mean, dd_min, ap_mean, ap_min;
    std::vector<std::string> best;
    for (const auto& m : lk.methods()) {
        auto col = lk.column(m, metric);
        if (col.empty()) continue;
        double mean = 0.0;
        for (double v : col) mean += v;
        mean /= static_cast<double>(col.size());
        const double min = *std::min_element(col.begin(), col.end());
        if (is_data_driven(m)) {
            if (!dd_mean || mean > *dd_mean) best.clear();
            if (!dd_mean || mean >= *dd_mean) best.push_back(m);
            dd_mean = std::max(dd_mean.value_or(mean), mean);
            dd_min = std::max(dd_min.value_or(min), min);
        } else if (is_apriori(m)) {
            ap_mean = std::max(ap_mean.value_or(mean), mean);
            ap_min = std::max(ap_min.value_or(min), min);
        }
    }
    if (dd_mean && ap_mean) h.rh2 = yes_no(*dd_mean > *ap_mean);
    if (dd_min && ap_min) h.rh3 = yes_no(*dd_min > *ap_min);
    if (dd_min) h.rh4 = yes_no(*dd_min > 0.5);
    if (!best.empty()) {
        h.recommended.clear();
        for (std::size_t i = 0; i < best.size(); ++i) h.recommended += (i ? " and " : "") + best[i];
    }
    return h;
}

}  // namespace

std::vector<HistogramBin> histogram(const std::vector<double>& values, std::size_t bins) {
    if (bins == 0) throw InvalidArgument("histogram needs at least one bin");
    std::vector<HistogramBin> out(bins);
    for (std::size_t i = 0; i < bins; ++i)
        out[i] = {static_cast<double>(i) / static_cast<double>(bins), static_cast<double>(i + 1) / static_cast<double>(bins), 0};
    for (double v : values) {
        if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("histogram value outside [0, 1]");
        auto b = static_cast<std::size_t>(std::floor(v * static_cast<double>(bins)));
        ++out[std::min(b, bins - 1)].count;
    }
    return out;
}

void cmd_report(const std::filesystem::path& analysis_dir, double alpha, const std::filesystem::path& out_dir,
                std::ostream& log) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
    const auto lk = load_table(analysis_dir / "likelihoods.csv");
    const auto scores_path = analysis_dir / "method_scores.csv";
    const auto scores = std::filesystem::exists(scores_path) ? load_table(scores_path) : stats::LikelihoodTable{};

    std::vector<std::string> metric_list = lk.metrics();
    for (const auto& t : scores.metrics())
        if (std::find(metric_list.begin(), metric_list.end(), t) == metric_list.end()) metric_list.push_back(t);

    std::ostringstream md, hist, tests_csv, posthoc_csv;
    hist << "method,metric,bin_low,bin_high,count\n";
    tests_csv << "metric,datasets,methods,chi2,f,df1,df2,p,degenerate\n";
    posthoc_csv << "metric,method,mean_rank,z,p,threshold,significant\n";

    md << "# Label space division report\n\n";
    md << "Datasets: " << lk.datasets().size() << ". Methods: " << lk.methods().size() << ". Significance level: "
       << fmt("%g", alpha) << ".\n";

    for (const auto& m : lk.methods())
        for (const auto& t : lk.metrics()) {
            auto col = lk.column(m, t);
            if (col.empty()) continue;
            for (const auto& b : histogram(col))
                hist << m << ',' << t << ',' << fmt("%.2f", b.low) << ',' << fmt("%.2f", b.high) << ',' << b.count << '\n';
        }

    std::vector<Hypotheses> summary;
    for (const auto& metric : metric_list) {
        md << "\n## " << metric << "\n\n";
        const auto tests = run_tests(scores, metric, alpha);
        if (tests.skipped) {
            md << "Statistical tests skipped: " << tests.notice << ".\n";
            log << "note: " << metric << ": " << tests.notice << '\n';
        } else {
            const auto& o = tests.omnibus;
            tests_csv << metric << ',' << tests.datasets << ',' << tests.methods.size() << ',' << f6(o.chi2) << ','
                      << (o.degenerate ? std::string("inf") : f6(o.f)) << ',' << fmt("%g", o.df1) << ','
                      << fmt("%g", o.df2) << ',' << fmt("%.6g", o.p) << ',' << (o.degenerate ? 1 : 0) << '\n';
            md << "Friedman chi2 = " << f6(o.chi2) << ", Iman-Davenport F = "
               << (o.degenerate ? std::string("inf") : f6(o.f)) << " with (" << fmt("%g", o.df1) << ", "
               << fmt("%g", o.df2) << ") degrees of freedom, p = " << fmt("%.6g", o.p)
               << (o.degenerate ? " (identical rankings on every dataset)" : "") << ".\n\n";
            md << "| method | mean rank | z | p | Rom threshold | better than baseline |\n";
            md << "|---|---|---|---|---|---|\n";
            for (std::size_t i = 0; i < tests.methods.size(); ++i) {
                auto c = std::find_if(tests.comparisons.begin(), tests.comparisons.end(),
                                      [&](const stats::Comparison& x) { return x.method == i; });
                if (c == tests.comparisons.end()) {
                    md << "| " << tests.methods[i] << " (baseline) | " << f6(tests.mean_ranks[i]) << " | | | | |\n";
                    continue;
                }
                md << "| " << tests.methods[i] << " | " << f6(tests.mean_ranks[i]) << " | " << f6(c->z) << " | "
                   << fmt("%.6g", c->p) << " | " << fmt("%.6g", c->threshold) << " | " << (c->significant ? "yes" : "no")
                   << " |\n";
                posthoc_csv << metric << ',' << tests.methods[i] << ',' << f6(tests.mean_ranks[i]) << ',' << f6(c->z)
                            << ',' << fmt("%.6g", c->p) << ',' << fmt("%.6g", c->threshold) << ','
                            << (c->significant ? 1 : 0) << '\n';
            }
        }

        md << "\nLikelihood of beating random partitions:\n\n";
        md << "| method | datasets | min | median | mean | std |\n|---|---|---|---|---|---|\n";
        for (const auto& m : lk.methods()) {
            auto col = lk.column(m, metric);
            if (col.empty()) continue;
            md << "| " << m << " | " << col.size() << " | ";
            if (col.size() >= 2) {
                auto a = stats::aggregate(col);
                md << f6(a.min) << " | " << f6(a.median) << " | " << f6(a.mean) << " | " << f6(a.std) << " |\n";
            } else {
                md << f6(col[0]) << " | " << f6(col[0]) << " | " << f6(col[0]) << " | n/a |\n";
            }
        }
        summary.push_back(evaluate_hypotheses(lk, metric, tests, alpha));
    }

    md << "\n## Summary\n\n| question |";
    for (const auto& t : metric_list) md << ' ' << t << " |";
    md << "\n|---|";
    for (std::size_t i = 0; i < metric_list.size(); ++i) md << "---|";
    md << '\n';
    auto row = [&](const char* title, std::string Hypotheses::*field) {
        md << "| " << title << " |";
        for (const auto& h : summary) md << ' ' << h.*field << " |";
        md << '\n';
    };
    row("A data-driven method is significantly better than the averaged random baseline", &Hypotheses::rh1);
    row("Best data-driven mean likelihood exceeds the best a priori one", &Hypotheses::rh2);
    row("Best data-driven worst-case likelihood exceeds the best a priori one", &Hypotheses::rh3);
    row("Best data-driven worst-case likelihood exceeds 0.5", &Hypotheses::rh4);
    row("Recommended data-driven method", &Hypotheses::recommended);

    std::filesystem::create_directories(out_dir);
    save(out_dir / "report.md", md.str());
    save(out_dir / "histograms.csv", hist.str());
    save(out_dir / "tests.csv", tests_csv.str());
    save(out_dir / "posthoc.csv", posthoc_csv.str());
}

}  // namespace lsp::experiment
