#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "lsp/dataset.hpp"
#include "lsp/error.hpp"

namespace lsp {

Dataset::Dataset(FeatureMatrix features, LabelMatrix labels, std::vector<std::string> label_names,
                 std::vector<AttributeMeta> attribute_meta)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      label_names_(std::move(label_names)),
      attribute_meta_(std::move(attribute_meta)) {
    if (labels_.cols() != label_names_.size())
        throw SchemaError("label matrix has " + std::to_string(labels_.cols()) + " columns but " +
                          std::to_string(label_names_.size()) + " label names");
    if (features_.rows() != labels_.rows())
        throw SchemaError("feature and label matrices disagree on row count");
    if (features_.cols() != attribute_meta_.size())
        throw SchemaError("feature matrix width does not match attribute metadata");
    for (auto v : labels_.values())
        if (v > 1) throw SchemaError("label value outside {0,1}");
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
           });
}

struct Token {
    std::string text;
    bool quoted = false;
};

// Reads one possibly-quoted token from the front of `s`, stopping at any of `stops`.
Token read_token(std::string_view& s, std::string_view stops, std::size_t line) {
    s = trim(s);
    Token tok;
    if (!s.empty() && (s.front() == '\'' || s.front() == '"')) {
        const char q = s.front();
        tok.quoted = true;
        std::size_t i = 1;
        for (; i < s.size() && s[i] != q; ++i) {
            if (s[i] == '\\' && i + 1 < s.size()) ++i;
            tok.text.push_back(s[i]);
        }
        if (i >= s.size()) throw ParseError("unterminated quoted value", line);
        s.remove_prefix(i + 1);
        s = trim(s);
        return tok;
    }
    std::size_t i = 0;
    while (i < s.size() && stops.find(s[i]) == std::string_view::npos) ++i;
    tok.text = std::string(trim(s.substr(0, i)));
    s.remove_prefix(i);
    return tok;
}

std::vector<Token> split_values(std::string_view s, std::size_t line) {
    std::vector<Token> out;
    s = trim(s);
    if (s.empty()) return out;
    for (;;) {
        out.push_back(read_token(s, ",", line));
        s = trim(s);
        if (s.empty()) break;
        if (s.front() != ',') throw ParseError("expected ',' between values", line);
        s.remove_prefix(1);
    }
    return out;
}

double parse_number(const Token& tok, std::size_t line, const std::string& column) {
    std::string_view t = tok.text;
    if (!t.empty() && t.front() == '+') t.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size())
        throw ParseError("non-numeric value '" + tok.text + "' in numeric column '" + column + "'", line);
    return v;
}

struct Column {
    AttributeMeta meta;
    int label_slot = -1;  // index into label_names, or -1 for features
    std::size_t feature_slot = 0;
    std::unordered_map<std::string, std::size_t> codes;
};

class ArffReader {
public:
    ArffReader(std::string_view text, std::span<const std::string> label_names)
        : text_(text), label_names_(label_names.begin(), label_names.end()) {}

    Dataset read() {
        bool in_data = false;
        std::size_t line_no = 0;
        std::size_t pos = 0;
        while (pos <= text_.size()) {
            auto eol = text_.find('\n', pos);
            if (eol == std::string_view::npos) eol = text_.size();
            std::string_view line = text_.substr(pos, eol - pos);
            pos = eol + 1;
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            line = trim(line);
            if (line.empty() || line.front() == '%') continue;
            if (!in_data) {
                if (line.front() != '@') throw ParseError("expected @-declaration in ARFF header", line_no);
                in_data = header_line(line, line_no);
            } else {
                data_line(line, line_no);
            }
            if (eol == text_.size()) break;
        }
        if (!in_data) throw ParseError("ARFF text has no @data section", line_no);
        return Dataset(std::move(features_), std::move(labels_), label_names_, feature_meta());
    }

private:
    // Returns true once @data is reached.
    bool header_line(std::string_view line, std::size_t line_no) {
        std::size_t kw_end = 0;
        while (kw_end < line.size() && !std::isspace(static_cast<unsigned char>(line[kw_end]))) ++kw_end;
        const std::string_view keyword = line.substr(0, kw_end);
        std::string_view rest = line.substr(kw_end);
        if (iequals(keyword, "@relation")) return false;
        if (iequals(keyword, "@data")) {
            finish_header(line_no);
            return true;
        }
        if (!iequals(keyword, "@attribute")) throw ParseError("unknown declaration '" + std::string(keyword) + "'", line_no);

        Column col;
        col.meta.name = read_token(rest, " \t{", line_no).text;
        if (col.meta.name.empty()) throw ParseError("attribute without a name", line_no);
        rest = trim(rest);
        if (!rest.empty() && rest.front() == '{') {
            const auto close = rest.rfind('}');
            if (close == std::string_view::npos) throw ParseError("unterminated nominal category list", line_no);
            col.meta.kind = AttributeMeta::Kind::nominal;
            for (auto& tok : split_values(rest.substr(1, close - 1), line_no)) {
                if (!col.codes.emplace(tok.text, col.meta.categories.size()).second)
                    throw ParseError("duplicate category '" + tok.text + "'", line_no);
                col.meta.categories.push_back(tok.text);
            }
        } else if (iequals(rest, "numeric") || iequals(rest, "real") || iequals(rest, "integer")) {
            col.meta.kind = AttributeMeta::Kind::numeric;
        } else {
            throw ParseError("unsupported attribute type '" + std::string(rest) + "'", line_no);
        }
        for (const auto& c : columns_)
            if (c.meta.name == col.meta.name) throw SchemaError("duplicate attribute '" + col.meta.name + "'");
        columns_.push_back(std::move(col));
        return false;
    }

    void finish_header(std::size_t line_no) {
        std::map<std::string, std::size_t> by_name;
        for (std::size_t i = 0; i < columns_.size(); ++i) by_name[columns_[i].meta.name] = i;
        for (std::size_t l = 0; l < label_names_.size(); ++l) {
            const auto it = by_name.find(label_names_[l]);
            if (it == by_name.end())
                throw SchemaError("label '" + label_names_[l] + "' is not declared as an ARFF attribute");
            columns_[it->second].label_slot = static_cast<int>(l);
        }
        std::size_t f = 0;
        for (auto& c : columns_)
            if (c.label_slot < 0) c.feature_slot = f++;
        feature_count_ = f;
        (void)line_no;
        features_ = FeatureMatrix(0, feature_count_);
        labels_ = LabelMatrix(0, label_names_.size());
        row_features_.assign(feature_count_, 0.0);
        row_labels_.assign(label_names_.size(), 0);
    }

    std::vector<AttributeMeta> feature_meta() const {
        std::vector<AttributeMeta> out;
        for (const auto& c : columns_)
            if (c.label_slot < 0) out.push_back(c.meta);
        return out;
    }

    void set_value(std::size_t index, const Token& tok, std::size_t line_no) {
        const Column& col = columns_[index];
        if (!tok.quoted && tok.text == "?")
            throw ParseError("missing value '?' in column '" + col.meta.name + "' is not supported", line_no);
        if (col.label_slot >= 0) {
            double v = 0.0;
            if (col.meta.kind == AttributeMeta::Kind::nominal) {
                if (!col.codes.contains(tok.text))
                    throw ParseError("value '" + tok.text + "' is not a category of '" + col.meta.name + "'", line_no);
                v = parse_number(tok, line_no, col.meta.name);
            } else {
                v = parse_number(tok, line_no, col.meta.name);
            }
            if (v != 0.0 && v != 1.0)
                throw ParseError("label value outside {0,1} in column '" + col.meta.name + "'", line_no);
            row_labels_[static_cast<std::size_t>(col.label_slot)] = static_cast<std::uint8_t>(v);
            return;
        }
        if (col.meta.kind == AttributeMeta::Kind::nominal) {
            const auto it = col.codes.find(tok.text);
            if (it == col.codes.end())
                throw ParseError("value '" + tok.text + "' is not a category of '" + col.meta.name + "'", line_no);
            row_features_[col.feature_slot] = static_cast<double>(it->second);
        } else {
            row_features_[col.feature_slot] = parse_number(tok, line_no, col.meta.name);
        }
    }

    void data_line(std::string_view line, std::size_t line_no) {
        std::fill(row_features_.begin(), row_features_.end(), 0.0);
        std::fill(row_labels_.begin(), row_labels_.end(), std::uint8_t{0});
        if (line.front() == '{') {
            if (line.back() != '}') throw ParseError("unterminated sparse row", line_no);
            std::string_view body = line.substr(1, line.size() - 2);
            std::vector<bool> seen(columns_.size(), false);
            for (;;) {
                body = trim(body);
                if (body.empty()) break;
                std::size_t i = 0;
                while (i < body.size() && std::isdigit(static_cast<unsigned char>(body[i]))) ++i;
                std::size_t index = 0;
                if (i == 0 || std::from_chars(body.data(), body.data() + i, index).ec != std::errc{})
                    throw ParseError("malformed sparse entry", line_no);
                body.remove_prefix(i);
                if (index >= columns_.size())
                    throw ParseError("unknown attribute index " + std::to_string(index) + " in data row", line_no);
                if (seen[index]) throw ParseError("attribute index repeated in sparse row", line_no);
                seen[index] = true;
                const Token tok = read_token(body, ",", line_no);
                if (tok.text.empty() && !tok.quoted) throw ParseError("sparse entry without value", line_no);
                set_value(index, tok, line_no);
                body = trim(body);
                if (!body.empty()) {
                    if (body.front() != ',') throw ParseError("expected ',' in sparse row", line_no);
                    body.remove_prefix(1);
                }
            }
        } else {
            const auto values = split_values(line, line_no);
            if (values.size() > columns_.size())
                throw ParseError("data row has more values than declared attributes (unknown attribute)", line_no);
            if (values.size() < columns_.size())
                throw ParseError("data row has " + std::to_string(values.size()) + " values, expected " +
                                     std::to_string(columns_.size()),
                                 line_no);
            for (std::size_t i = 0; i < values.size(); ++i) set_value(i, values[i], line_no);
        }
        features_.append_row(row_features_);
        labels_.append_row(row_labels_);
    }

    std::string_view text_;
    std::vector<std::string> label_names_;
    std::vector<Column> columns_;
    std::size_t feature_count_ = 0;
    FeatureMatrix features_;
    LabelMatrix labels_;
    std::vector<double> row_features_;
    std::vector<std::uint8_t> row_labels_;
};

std::string quote_if_needed(const std::string& s) {
    const bool plain = !s.empty() && std::none_of(s.begin(), s.end(), [](char c) {
        return std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == '\'' || c == '"' || c == '{' ||
               c == '}' || c == '%' || c == '\\';
    }) && s != "?";
    if (plain) return s;
    std::string out = "'";
    for (char c : s) {
        if (c == '\'' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('\'');
    return out;
}

}  // namespace

Dataset parse_arff(std::string_view arff_text, std::span<const std::string> label_names) {
    if (label_names.empty()) throw SchemaError("a dataset needs at least one label");
    return ArffReader(arff_text, label_names).read();
}

void write_arff(std::ostream& out, const Dataset& data, std::string_view relation) {
    out << "@relation " << quote_if_needed(std::string(relation)) << "\n\n";
    for (const auto& a : data.attribute_meta()) {
        out << "@attribute " << quote_if_needed(a.name) << ' ';
        if (a.kind == AttributeMeta::Kind::numeric) {
            out << "numeric\n";
        } else {
            out << '{';
            for (std::size_t i = 0; i < a.categories.size(); ++i)
                out << (i ? "," : "") << quote_if_needed(a.categories[i]);
            out << "}\n";
        }
    }
    for (const auto& n : data.label_names()) out << "@attribute " << quote_if_needed(n) << " {0,1}\n";
    out << "\n@data\n";
    char buf[64];
    const auto& meta = data.attribute_meta();
    for (std::size_t r = 0; r < data.instance_count(); ++r) {
        bool first = true;
        for (std::size_t c = 0; c < data.feature_count(); ++c) {
            if (!first) out << ',';
            first = false;
            const double v = data.features()(r, c);
            if (meta[c].kind == AttributeMeta::Kind::nominal) {
                out << quote_if_needed(meta[c].categories.at(static_cast<std::size_t>(v)));
            } else {
                std::snprintf(buf, sizeof buf, "%.17g", v);
                out << buf;
            }
        }
        for (std::size_t l = 0; l < data.label_count(); ++l) {
            if (!first) out << ',';
            first = false;
            out << static_cast<int>(data.labels()(r, l));
        }
        out << '\n';
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

DatasetPair load_pair(const std::filesystem::path& train_path, const std::filesystem::path& test_path,
                      const std::filesystem::path& xml_path) {
    const auto names = parse_label_header(read_text_file(xml_path));
    DatasetPair pair{parse_arff(read_text_file(train_path), names), parse_arff(read_text_file(test_path), names)};

    const auto& a = pair.train.attribute_meta();
    const auto& b = pair.test.attribute_meta();
    std::ostringstream diff;
    if (a.size() != b.size())
        diff << "\n  feature count: train " << a.size() << ", test " << b.size();
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
        if (a[i].name != b[i].name)
            diff << "\n  column " << i << ": train '" << a[i].name << "', test '" << b[i].name << "'";
        else if (a[i].kind != b[i].kind)
            diff << "\n  column '" << a[i].name << "': attribute kinds differ";
        else if (a[i].categories != b[i].categories)
            diff << "\n  column '" << a[i].name << "': nominal categories differ";
    }
    for (std::size_t i = b.size(); i < a.size(); ++i) diff << "\n  test lacks attribute '" << a[i].name << "'";
    for (std::size_t i = a.size(); i < b.size(); ++i) diff << "\n  train lacks attribute '" << b[i].name << "'";
    if (!diff.str().empty())
        throw SchemaError("schema mismatch between '" + train_path.string() + "' and '" + test_path.string() +
                          "':" + diff.str());
    return pair;
}

}  // namespace lsp
