#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "lsp/error.hpp"
#include "lsp/experiment.hpp"

namespace lsp::experiment {
namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string::size_type start = 0;
    for (;;) {
        auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

std::optional<std::size_t> parse_index(const std::string& s, std::size_t line) {
    if (s.empty()) return std::nullopt;
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw ParseError("bad index '" + s + "'", line);
    return v;
}

}  // namespace

void write_scores_csv(std::ostream& out, const std::vector<ScoreRecord>& records) {
    out << scores_header << '\n';
    char value[64];
    for (const auto& r : records) {
        if (!std::isfinite(r.value)) throw InvalidArgument("score value is not finite");
        std::snprintf(value, sizeof value, "%.6f", r.value);
        out << r.dataset << ',' << r.method << ',' << r.variant << ',';
        if (r.k) out << *r.k;
        out << ',';
        if (r.sample_id) out << *r.sample_id;
        out << ',' << r.metric << ',' << value << '\n';
    }
}

std::vector<ScoreRecord> read_scores_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("missing header", 1);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != scores_header) throw ParseError(std::string("expected header '") + scores_header + "'", 1);
    std::vector<ScoreRecord> out;
    for (std::size_t n = 2; std::getline(in, line); ++n) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto f = split(line);
        if (f.size() != 7) throw ParseError("expected 7 fields, got " + std::to_string(f.size()), n);
        ScoreRecord r{f[0], f[1], f[2], parse_index(f[3], n), parse_index(f[4], n), f[5], 0.0};
        try {
            std::size_t used = 0;
            r.value = std::stod(f[6], &used);
            if (used != f[6].size() || !std::isfinite(r.value)) throw std::invalid_argument(f[6]);
        } catch (const std::exception&) {
            throw ParseError("bad value '" + f[6] + "'", n);
        }
        if (r.dataset.empty() || r.method.empty() || r.metric.empty()) throw ParseError("empty key field", n);
        if (r.method == "rakeld" && (!r.k || !r.sample_id)) throw ParseError("rakeld record without k or sample_id", n);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace lsp::experiment
