#include <cctype>
#include <ostream>
#include <set>
#include <string>

#include "lsp/dataset.hpp"
#include "lsp/error.hpp"

namespace lsp {
namespace {

// Minimal XML scanner: enough for MULAN label headers (declaration,
// comments, nested elements, quoted attributes, entity-free names).
class XmlScanner {
public:
    explicit XmlScanner(std::string_view text) : text_(text) {}

    std::vector<std::string> label_names() {
        std::vector<std::string> stack;
        std::vector<std::string> names;
        bool saw_root = false;
        while (skip_to_tag()) {
            const std::size_t tag_line = line_;
            if (starts_with("<?")) {
                skip_past("?>", "unterminated processing instruction");
                continue;
            }
            if (starts_with("<!--")) {
                skip_past("-->", "unterminated comment");
                continue;
            }
            if (starts_with("<!")) {
                skip_past(">", "unterminated declaration");
                continue;
            }
            advance(1);  // '<'
            const bool closing = peek() == '/';
            if (closing) advance(1);
            const std::string name = read_name();
            if (name.empty()) fail("expected element name", tag_line);
            if (closing) {
                skip_space();
                expect('>');
                if (stack.empty() || stack.back() != name)
                    fail("mismatched closing tag </" + name + ">", tag_line);
                stack.pop_back();
                continue;
            }
            std::string label_name;
            bool has_name = false;
            bool self_closing = false;
            for (;;) {
                skip_space();
                if (at_end()) fail("unterminated tag <" + name + ">", tag_line);
                if (peek() == '/') {
                    advance(1);
                    expect('>');
                    self_closing = true;
                    break;
                }
                if (peek() == '>') {
                    advance(1);
                    break;
                }
                const std::string attr = read_name();
                if (attr.empty()) fail("malformed attribute in <" + name + ">", line_);
                skip_space();
                expect('=');
                skip_space();
                const std::string value = read_quoted();
                if (attr == "name") {
                    label_name = value;
                    has_name = true;
                }
            }
            if (stack.empty()) {
                if (saw_root) fail("more than one root element", tag_line);
                saw_root = true;
                if (local_name(name) != "labels") fail("root element must be <labels>", tag_line);
            } else if (local_name(name) == "label") {
                if (!has_name) fail("<label> without name attribute", tag_line);
                names.push_back(label_name);
            }
            if (!self_closing) stack.push_back(name);
        }
        if (!saw_root) fail("no <labels> root element", line_);
        if (!stack.empty()) fail("unclosed element <" + stack.back() + ">", line_);
        return names;
    }

private:
    static std::string_view local_name(std::string_view qname) {
        const auto colon = qname.find(':');
        return colon == std::string_view::npos ? qname : qname.substr(colon + 1);
    }

    [[noreturn]] void fail(const std::string& what, std::size_t line) const {
        throw ParseError("malformed label header: " + what, line);
    }

    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }
    bool starts_with(std::string_view s) const { return text_.substr(pos_).starts_with(s); }

    void advance(std::size_t n) {
        for (std::size_t i = 0; i < n && !at_end(); ++i, ++pos_)
            if (text_[pos_] == '\n') ++line_;
    }

    void skip_space() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance(1);
    }

    bool skip_to_tag() {
        while (!at_end() && peek() != '<') {
            if (!std::isspace(static_cast<unsigned char>(peek())))
                fail("unexpected character data", line_);
            advance(1);
        }
        return !at_end();
    }

    void skip_past(std::string_view end, const char* what) {
        const std::size_t start_line = line_;
        const auto found = text_.find(end, pos_);
        if (found == std::string_view::npos) fail(what, start_line);
        advance(found + end.size() - pos_);
    }

    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'", line_);
        advance(1);
    }

    std::string read_name() {
        std::string out;
        while (!at_end()) {
            const char c = peek();
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == ':' || c == '.') {
                out.push_back(c);
                advance(1);
            } else {
                break;
            }
        }
        return out;
    }

    std::string read_quoted() {
        const char q = peek();
        if (q != '"' && q != '\'') fail("expected quoted attribute value", line_);
        advance(1);
        std::string out;
        while (!at_end() && peek() != q) {
            out.push_back(peek());
            advance(1);
        }
        if (at_end()) fail("unterminated attribute value", line_);
        advance(1);
        return out;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
};

}  // namespace

std::vector<std::string> parse_label_header(std::string_view xml_text) {
    auto names = XmlScanner(xml_text).label_names();
    if (names.empty()) throw SchemaError("label header declares zero labels");
    std::set<std::string> seen;
    for (const auto& n : names)
        if (!seen.insert(n).second) throw SchemaError("duplicate label name '" + n + "' in label header");
    return names;
}

void write_label_header(std::ostream& out, std::span<const std::string> label_names) {
    out << "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n"
        << "<labels xmlns=\"http://mulan.sourceforge.net/labels\">\n";
    for (const auto& n : label_names) out << "<label name=\"" << n << "\"></label>\n";
    out << "</labels>\n";
}

}  // namespace lsp
