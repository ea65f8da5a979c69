#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "lsp/error.hpp"
#include "lsp/stats.hpp"

namespace lsp::stats {

double likelihood_better(double method_score, std::span<const double> random_scores, bool higher_is_better) {
    if (random_scores.empty()) throw InvalidArgument("no random scores to compare against");
    std::size_t worse = 0;
    for (double r : random_scores) worse += higher_is_better ? r < method_score : r > method_score;
    return static_cast<double>(worse) / static_cast<double>(random_scores.size());
}

Aggregate aggregate(std::span<const double> values) {
    if (values.size() < 2) throw InvalidArgument("aggregate needs at least two values");
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    Aggregate a;
    a.min = v.front();
    a.median = n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
    double sum = 0.0;
    for (double x : values) sum += x;
    a.mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double x : values) ss += (x - a.mean) * (x - a.mean);
    a.std = std::sqrt(ss / static_cast<double>(n - 1));
    return a;
}

std::size_t LikelihoodTable::intern(std::vector<std::string>& names, const std::string& name) {
    if (auto i = find(names, name)) return *i;
    names.push_back(name);
    return names.size() - 1;
}

std::optional<std::size_t> LikelihoodTable::find(const std::vector<std::string>& names, const std::string& name) {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) return std::nullopt;
    return static_cast<std::size_t>(it - names.begin());
}

namespace {

void check_name(const std::string& s) {
    if (s.empty() || s.find_first_of(",\r\n") != std::string::npos)
        throw InvalidArgument("table key '" + s + "' is empty or contains a comma or newline");
}

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_number(const std::string& s, std::size_t line) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("not a finite number: '" + s + "'", line);
    }
}

bool getline_trimmed(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

}  // namespace

void LikelihoodTable::set(const std::string& dataset, const std::string& method, const std::string& metric,
                          double value) {
    check_name(dataset);
    check_name(method);
    check_name(metric);
    if (!(value >= 0.0 && value <= 1.0)) throw InvalidArgument("likelihood outside [0, 1]");
    values_[{intern(datasets_, dataset), intern(methods_, method), intern(metrics_, metric)}] = value;
}

std::optional<double> LikelihoodTable::get(const std::string& dataset, const std::string& method,
                                           const std::string& metric) const {
    auto d = find(datasets_, dataset), m = find(methods_, method), t = find(metrics_, metric);
    if (!d || !m || !t) return std::nullopt;
    auto it = values_.find({*d, *m, *t});
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

std::vector<double> LikelihoodTable::column(const std::string& method, const std::string& metric) const {
    std::vector<double> out;
    for (const auto& d : datasets_)
        if (auto v = get(d, method, metric)) out.push_back(*v);
    return out;
}

void LikelihoodTable::write_csv(std::ostream& out) const {
    out << "dataset,method,metric,value\n";
    for (std::size_t t = 0; t < metrics_.size(); ++t)
        for (std::size_t d = 0; d < datasets_.size(); ++d)
            for (std::size_t m = 0; m < methods_.size(); ++m) {
                auto it = values_.find({d, m, t});
                if (it == values_.end()) continue;
                out << datasets_[d] << ',' << methods_[m] << ',' << metrics_[t] << ',' << fixed6(it->second) << '\n';
            }
}

LikelihoodTable LikelihoodTable::read_csv(std::istream& in) {
    std::string line;
    if (!getline_trimmed(in, line) || line != "dataset,method,metric,value")
        throw ParseError("expected header 'dataset,method,metric,value'", 1);
    LikelihoodTable table;
    for (std::size_t n = 2; getline_trimmed(in, line); ++n) {
        if (line.empty()) continue;
        auto f = split_csv(line);
        if (f.size() != 4) throw ParseError("expected 4 fields, got " + std::to_string(f.size()), n);
        try {
            table.set(f[0], f[1], f[2], parse_number(f[3], n));
        } catch (const InvalidArgument& e) {
            throw ParseError(e.what(), n);
        }
    }
    return table;
}

Aggregate aggregate_likelihoods(const LikelihoodTable& table, const std::string& method, const std::string& metric) {
    return aggregate(table.column(method, metric));
}

void write_aggregates_csv(std::ostream& out, std::span<const AggregateRow> rows) {
    out << "method,metric,min,median,mean,std\n";
    for (const auto& r : rows)
        out << r.method << ',' << r.metric << ',' << fixed6(r.value.min) << ',' << fixed6(r.value.median) << ','
            << fixed6(r.value.mean) << ',' << fixed6(r.value.std) << '\n';
}

std::vector<AggregateRow> read_aggregates_csv(std::istream& in) {
    std::string line;
    if (!getline_trimmed(in, line) || line != "method,metric,min,median,mean,std")
        throw ParseError("expected header 'method,metric,min,median,mean,std'", 1);
    std::vector<AggregateRow> rows;
    for (std::size_t n = 2; getline_trimmed(in, line); ++n) {
        if (line.empty()) continue;
        auto f = split_csv(line);
        if (f.size() != 6) throw ParseError("expected 6 fields, got " + std::to_string(f.size()), n);
        rows.push_back({f[0], f[1],
                         {parse_number(f[2], n), parse_number(f[3], n), parse_number(f[4], n), parse_number(f[5], n)}});
    }
    return rows;
}

}  // namespace lsp::stats
