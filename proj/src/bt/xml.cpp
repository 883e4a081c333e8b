#include "bt/xml.hpp"

#include <algorithm>
#include <utility>

#include "bt/validate.hpp"

namespace bt {

syntax_error::syntax_error(std::string message, int line_, int column_)
    : parse_error("line " + std::to_string(line_) + ", column " + std::to_string(column_) + ": " +
                  message),
      line(line_),
      column(column_) {}

schema_error::schema_error(std::string message, std::string element_)
    : parse_error(std::move(message)), element(std::move(element_)) {}

namespace {

bool is_name_start(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_' || c == ':';
}

bool is_name_char(char c) {
    return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

struct raw_attr {
    std::string name;
    std::string value;
};

struct raw_element {
    std::string name;
    std::vector<raw_attr> attrs;
    std::vector<raw_element> children;
    int line = 0;
    int column = 0;

    const std::string* attr(std::string_view key) const {
        for (const raw_attr& a : attrs) {
            if (a.name == key) {
                return &a.value;
            }
        }
        return nullptr;
    }
};

// Minimal XML reader: elements, attributes, comments, prolog, the five named
// entities plus numeric references. No DTD, no text content (the schema has
// none), no namespaces.
class reader {
  public:
    explicit reader(std::string_view text) : text_(text) {}

    raw_element read_document() {
        skip_bom();
        skip_misc(/*allow_prolog=*/true);
        if (eof()) {
            fail("expected a root element");
        }
        raw_element root = read_element();
        skip_misc(false);
        if (!eof()) {
            fail("unexpected content after the root element");
        }
        return root;
    }

  private:
    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;

    [[noreturn]] void fail(const std::string& message) const {
        throw syntax_error(message, line_, col_);
    }

    bool eof() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    bool looking_at(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void advance(std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) {
            advance();
        }
    }

    void skip_bom() {
        if (looking_at("\xEF\xBB\xBF")) {
            pos_ += 3;
        }
    }

    void skip_ws() {
        while (!eof() && is_space(peek())) {
            advance();
        }
    }

    // Whitespace, comments, and (optionally) the XML prolog between elements.
    void skip_misc(bool allow_prolog) {
        while (true) {
            skip_ws();
            if (looking_at("<!--")) {
                skip_comment();
                continue;
            }
            if (allow_prolog && looking_at("<?")) {
                skip_prolog();
                allow_prolog = false;
                continue;
            }
            return;
        }
    }

    void skip_comment() {
        advance(4);
        while (!looking_at("-->")) {
            if (eof()) {
                fail("unterminated comment");
            }
            advance();
        }
        advance(3);
    }

    void skip_prolog() {
        advance(2);
        while (!looking_at("?>")) {
            if (eof()) {
                fail("unterminated XML prolog");
            }
            advance();
        }
        advance(2);
    }

    std::string read_name() {
        if (eof() || !is_name_start(peek())) {
            fail("expected a name");
        }
        const std::size_t start = pos_;
        while (!eof() && is_name_char(peek())) {
            advance();
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    raw_element read_element() {
        if (eof() || peek() != '<') {
            fail("expected '<'");
        }
        raw_element el;
        el.line = line_;
        el.column = col_;
        advance();
        el.name = read_name();
        while (true) {
            const bool had_ws = !eof() && is_space(peek());
            skip_ws();
            if (eof()) {
                fail("unterminated start tag <" + el.name + ">");
            }
            if (peek() == '/') {
                advance();
                if (eof() || peek() != '>') {
                    fail("expected '>' after '/'");
                }
                advance();
                return el;
            }
            if (peek() == '>') {
                advance();
                read_children(el);
                return el;
            }
            if (!had_ws) {
                fail("expected whitespace before attribute in <" + el.name + ">");
            }
            read_attribute(el);
        }
    }

    void read_attribute(raw_element& el) {
        raw_attr attr;
        attr.name = read_name();
        skip_ws();
        if (eof() || peek() != '=') {
            fail("expected '=' after attribute " + attr.name);
        }
        advance();
        skip_ws();
        if (eof() || (peek() != '"' && peek() != '\'')) {
            fail("expected a quoted value for attribute " + attr.name);
        }
        const char quote = peek();
        advance();
        std::string value;
        while (true) {
            if (eof()) {
                fail("unterminated value for attribute " + attr.name);
            }
            const char c = peek();
            if (c == quote) {
                advance();
                break;
            }
            if (c == '<') {
                fail("'<' is not allowed inside an attribute value");
            }
            if (c == '&') {
                value += read_reference();
                continue;
            }
            // XML attribute-value normalization: literal whitespace becomes a
            // plain space; the serializer escapes these so round-trips hold.
            value += is_space(c) ? ' ' : c;
            advance();
        }
        if (el.attr(attr.name) != nullptr) {
            fail("duplicate attribute " + attr.name + " in <" + el.name + ">");
        }
        el.attrs.push_back(std::move(attr));
        el.attrs.back().value = std::move(value);
    }

    std::string read_reference() {
        advance();  // '&'
        const std::size_t start = pos_;
        while (!eof() && peek() != ';') {
            if (pos_ - start > 8) {
                fail("unterminated entity reference");
            }
            advance();
        }
        if (eof()) {
            fail("unterminated entity reference");
        }
        const std::string_view body = text_.substr(start, pos_ - start);
        advance();  // ';'
        if (body == "amp") {
            return "&";
        }
        if (body == "lt") {
            return "<";
        }
        if (body == "gt") {
            return ">";
        }
        if (body == "quot") {
            return "\"";
        }
        if (body == "apos") {
            return "'";
        }
        if (body.size() > 1 && body[0] == '#') {
            long code = 0;
            std::size_t i = 1;
            const bool hex = body[1] == 'x' || body[1] == 'X';
            if (hex) {
                ++i;
            }
            if (i >= body.size()) {
                fail("empty character reference");
            }
            for (; i < body.size(); ++i) {
                const char c = body[i];
                int digit;
                if (c >= '0' && c <= '9') {
                    digit = c - '0';
                } else if (hex && c >= 'a' && c <= 'f') {
                    digit = c - 'a' + 10;
                } else if (hex && c >= 'A' && c <= 'F') {
                    digit = c - 'A' + 10;
                } else {
                    fail("bad character reference &" + std::string(body) + ";");
                }
                code = code * (hex ? 16 : 10) + digit;
                if (code > 0x10FFFF) {
                    fail("character reference out of range");
                }
            }
            return encode_utf8(code);
        }
        fail("unknown entity &" + std::string(body) + ";");
    }

    static std::string encode_utf8(long code) {
        std::string out;
        if (code < 0x80) {
            out += static_cast<char>(code);
        } else if (code < 0x800) {
            out += static_cast<char>(0xC0 | (code >> 6));
            out += static_cast<char>(0x80 | (code & 0x3F));
        } else if (code < 0x10000) {
            out += static_cast<char>(0xE0 | (code >> 12));
            out += static_cast<char>(0x80 | ((code >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (code & 0x3F));
        } else {
            out += static_cast<char>(0xF0 | (code >> 18));
            out += static_cast<char>(0x80 | ((code >> 12) & 0x3F));
            out += static_cast<char>(0x80 | ((code >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (code & 0x3F));
        }
        return out;
    }

    void read_children(raw_element& el) {
        while (true) {
            // Non-whitespace text would be well-formed XML, but the schema has
            // no text content; report it at the schema layer with a position.
            skip_ws();
            if (eof()) {
                fail("missing closing tag </" + el.name + ">");
            }
            if (looking_at("<!--")) {
                skip_comment();
                continue;
            }
            if (looking_at("</")) {
                advance(2);
                const std::string closing = read_name();
                if (closing != el.name) {
                    fail("mismatched closing tag </" + closing + ">, expected </" + el.name +
                         ">");
                }
                skip_ws();
                if (eof() || peek() != '>') {
                    fail("expected '>' in closing tag");
                }
                advance();
                return;
            }
            if (peek() == '<') {
                el.children.push_back(read_element());
                continue;
            }
            throw schema_error("unexpected text content inside <" + el.name + ">", el.name);
        }
    }
};

// --- schema layer -----------------------------------------------------------

class tree_builder {
  public:
    task_graph build(const raw_element& root_el) {
        if (root_el.name != "TaskGraph") {
            throw schema_error("root element must be TaskGraph, got " + root_el.name,
                               root_el.name);
        }
        for (const raw_attr& a : root_el.attrs) {
            if (a.name == "name") {
                graph_.name = a.value;
            } else {
                throw schema_error("unknown attribute " + a.name + " on TaskGraph", "TaskGraph");
            }
        }
        if (root_el.children.size() != 1) {
            throw schema_error("TaskGraph requires exactly one child element", "TaskGraph");
        }
        graph_.root = build_node(root_el.children[0]);
        return std::move(graph_);
    }

  private:
    task_graph graph_;

    node_id build_node(const raw_element& el) {
        // Reserve the id first so ids come out in document order.
        const node_id id = static_cast<node_id>(graph_.nodes.size());
        graph_.nodes.emplace_back();
        node n;
        n.id = id;
        if (el.name == "Sequence" || el.name == "Fallback") {
            n.kind = el.name == "Sequence" ? node_kind::sequence : node_kind::fallback;
            require_no_attrs(el);
            if (el.children.empty()) {
                throw schema_error(el.name + " requires at least one child", el.name);
            }
            for (const raw_element& child : el.children) {
                n.children.push_back(build_node(child));
            }
        } else if (el.name == "Retry") {
            n.kind = node_kind::retry;
            const std::string* attempts = el.attr("num_attempts");
            if (attempts == nullptr || el.children.size() != 1) {
                throw schema_error("Retry requires num_attempts and one child", "Retry");
            }
            for (const raw_attr& a : el.attrs) {
                if (a.name != "num_attempts") {
                    throw schema_error("unknown attribute " + a.name + " on Retry", "Retry");
                }
            }
            const auto value = parse_attempts(*attempts);
            if (!value) {
                throw schema_error("Retry num_attempts must be a positive integer, got \"" +
                                       *attempts + "\"",
                                   "Retry");
            }
            n.max_attempts = *value;
            n.children.push_back(build_node(el.children[0]));
        } else if (el.name == "Action" || el.name == "Condition") {
            n.kind = el.name == "Action" ? node_kind::action : node_kind::condition;
            if (!el.children.empty()) {
                throw schema_error(el.name + " must not have children", el.name);
            }
            for (const raw_attr& a : el.attrs) {
                if (a.name == "name") {
                    n.name = a.value;
                } else {
                    n.params[a.name] = a.value;
                }
            }
            if (n.name.empty()) {
                throw schema_error(el.name + " requires a name attribute", el.name);
            }
        } else {
            throw schema_error("unknown element " + el.name, el.name);
        }
        graph_.nodes[id] = std::move(n);
        return id;
    }

    static void require_no_attrs(const raw_element& el) {
        if (!el.attrs.empty()) {
            throw schema_error("unknown attribute " + el.attrs.front().name + " on " + el.name,
                               el.name);
        }
    }

    static std::optional<int> parse_attempts(const std::string& s) {
        if (s.empty() || s.size() > 9) {
            return std::nullopt;
        }
        int v = 0;
        for (char c : s) {
            if (c < '0' || c > '9') {
                return std::nullopt;
            }
            v = v * 10 + (c - '0');
        }
        if (v < 1) {
            return std::nullopt;
        }
        return v;
    }
};

void append_escaped(std::string& out, std::string_view raw, bool in_attribute) {
    for (char c : raw) {
        switch (c) {
            case '&':
                out += "&amp;";
                break;
            case '<':
                out += "&lt;";
                break;
            case '>':
                out += "&gt;";
                break;
            case '"':
                if (in_attribute) {
                    out += "&quot;";
                } else {
                    out += c;
                }
                break;
            case '\t':
                out += in_attribute ? "&#9;" : "\t";
                break;
            case '\n':
                out += in_attribute ? "&#10;" : "\n";
                break;
            case '\r':
                out += in_attribute ? "&#13;" : "\r";
                break;
            default:
                out += c;
        }
    }
}

class writer {
  public:
    explicit writer(const task_graph& graph) : graph_(graph) {}

    std::string write() {
        out_ += "<TaskGraph name=\"";
        append_escaped(out_, graph_.name, true);
        out_ += "\">\n";
        write_node(graph_.root, 1);
        out_ += "</TaskGraph>\n";
        return std::move(out_);
    }

  private:
    const task_graph& graph_;
    std::string out_;

    void indent(int depth) { out_.append(static_cast<std::size_t>(depth) * 2, ' '); }

    void write_node(node_id id, int depth) {
        const node& n = graph_.at(id);
        indent(depth);
        switch (n.kind) {
            case node_kind::sequence:
            case node_kind::fallback: {
                const char* tag = n.kind == node_kind::sequence ? "Sequence" : "Fallback";
                out_ += "<";
                out_ += tag;
                out_ += ">\n";
                for (node_id child : n.children) {
                    write_node(child, depth + 1);
                }
                indent(depth);
                out_ += "</";
                out_ += tag;
                out_ += ">\n";
                break;
            }
            case node_kind::retry:
                out_ += "<Retry num_attempts=\"" + std::to_string(n.max_attempts) + "\">\n";
                write_node(n.children[0], depth + 1);
                indent(depth);
                out_ += "</Retry>\n";
                break;
            case node_kind::action:
            case node_kind::condition: {
                out_ += n.kind == node_kind::action ? "<Action name=\"" : "<Condition name=\"";
                append_escaped(out_, n.name, true);
                out_ += "\"";
                for (const auto& [key, value] : n.params) {
                    out_ += " " + key + "=\"";
                    append_escaped(out_, value, true);
                    out_ += "\"";
                }
                out_ += "/>\n";
                break;
            }
        }
    }
};

}  // namespace

task_graph parse_xml(std::string_view text) {
    reader r(text);
    const raw_element root = r.read_document();
    tree_builder b;
    return b.build(root);
}

std::string serialize(const task_graph& graph) {
    const auto issues = structural_issues(graph);
    if (!issues.empty()) {
        throw std::invalid_argument("cannot serialize invalid graph: " + issues.front().message);
    }
    writer w(graph);
    return w.write();
}

std::string escape_attribute(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    append_escaped(out, raw, true);
    return out;
}

std::string escape_text(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    append_escaped(out, raw, false);
    return out;
}

std::string unescape_text(std::string_view escaped) {
    // Runs the parser's reference decoder by wrapping the payload as an
    // attribute value; newlines are pre-escaped so normalization is a no-op.
    std::string wrapped = "<x a=\"";
    for (char c : escaped) {
        switch (c) {
            case '\t':
                wrapped += "&#9;";
                break;
            case '\n':
                wrapped += "&#10;";
                break;
            case '\r':
                wrapped += "&#13;";
                break;
            case '"':
                wrapped += "&quot;";
                break;
            case '<':
                wrapped += "&lt;";
                break;
            default:
                wrapped += c;
        }
    }
    wrapped += "\"/>";
    reader r(wrapped);
    const raw_element el = r.read_document();
    return *el.attr("a");
}

}  // namespace bt
