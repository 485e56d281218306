#include "aihs/toml_lite.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace aihs::toml {

namespace {

struct Cursor {
    const std::string& s;
    size_t pos = 0;
    int line;
    const std::string& origin;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ConfigInvalid(origin + ":" + std::to_string(line) + ": " + msg);
    }
    bool eol() const { return pos >= s.size(); }
    char peek() const { return s[pos]; }
    void skip_ws() {
        while (!eol() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    }
};

bool is_bare_key_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
}

std::string parse_bare_key(Cursor& c) {
    c.skip_ws();
    const size_t start = c.pos;
    while (!c.eol() && is_bare_key_char(c.peek())) ++c.pos;
    if (c.pos == start) c.fail("expected a key");
    return c.s.substr(start, c.pos - start);
}

std::string parse_basic_string(Cursor& c) {
    // opening quote consumed by caller
    std::string out;
    while (true) {
        if (c.eol()) c.fail("unterminated string");
        const char ch = c.s[c.pos++];
        if (ch == '"') break;
        if (ch == '\\') {
            if (c.eol()) c.fail("dangling escape");
            const char esc = c.s[c.pos++];
            switch (esc) {
                case '"': out += '"'; break;
                case '\\': out += '\\'; break;
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                default: c.fail(std::string("unsupported escape \\") + esc);
            }
        } else {
            out += ch;
        }
    }
    return out;
}

Value parse_value(Cursor& c);

Value parse_array(Cursor& c) {
    // opening bracket consumed by caller
    Array arr;
    c.skip_ws();
    if (!c.eol() && c.peek() == ']') {
        ++c.pos;
        return Value{arr};
    }
    while (true) {
        c.skip_ws();
        arr.push_back(parse_value(c));
        c.skip_ws();
        if (c.eol()) c.fail("unterminated array");
        const char ch = c.s[c.pos++];
        if (ch == ']') break;
        if (ch != ',') c.fail("expected ',' or ']' in array");
    }
    return Value{arr};
}

Value parse_scalar(Cursor& c) {
    const size_t start = c.pos;
    while (!c.eol()) {
        const char ch = c.peek();
        if (ch == ',' || ch == ']' || ch == '#' || ch == ' ' || ch == '\t') break;
        ++c.pos;
    }
    std::string tok = c.s.substr(start, c.pos - start);
    if (tok.empty()) c.fail("expected a value");
    if (tok == "true") return Value{true};
    if (tok == "false") return Value{false};

    const bool looks_float = tok.find('.') != std::string::npos ||
                             tok.find('e') != std::string::npos ||
                             tok.find('E') != std::string::npos ||
                             tok == "inf" || tok == "-inf" || tok == "nan";
    if (!looks_float) {
        std::int64_t iv = 0;
        const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), iv);
        if (ec == std::errc() && p == tok.data() + tok.size()) return Value{iv};
    }
    try {
        size_t n = 0;
        const double dv = std::stod(tok, &n);
        if (n == tok.size()) return Value{dv};
    } catch (...) {
    }
    c.fail("cannot parse value '" + tok + "'");
}

Value parse_value(Cursor& c) {
    c.skip_ws();
    if (c.eol()) c.fail("expected a value");
    const char ch = c.peek();
    if (ch == '"') {
        ++c.pos;
        return Value{parse_basic_string(c)};
    }
    if (ch == '[') {
        ++c.pos;
        return parse_array(c);
    }
    return parse_scalar(c);
}

void strip_comment_check_rest(Cursor& c) {
    c.skip_ws();
    if (!c.eol() && c.peek() == '#') return;
    if (!c.eol()) c.fail("unexpected trailing characters");
}

}  // namespace

bool Value::as_bool() const {
    if (!is_bool()) throw ConfigInvalid("value is not a boolean");
    return std::get<bool>(data);
}

std::int64_t Value::as_int() const {
    if (!is_int()) throw ConfigInvalid("value is not an integer");
    return std::get<std::int64_t>(data);
}

double Value::as_double() const {
    if (is_int()) return static_cast<double>(std::get<std::int64_t>(data));
    if (!is_float()) throw ConfigInvalid("value is not a number");
    return std::get<double>(data);
}

const std::string& Value::as_string() const {
    if (!is_string()) throw ConfigInvalid("value is not a string");
    return std::get<std::string>(data);
}

const Array& Value::as_array() const {
    if (!is_array()) throw ConfigInvalid("value is not an array");
    return std::get<Array>(data);
}

const Table* Document::find_table(const std::string& name) const {
    const auto it = tables.find(name);
    return it == tables.end() ? nullptr : &it->second;
}

const Value* Document::find(const std::string& table, const std::string& key) const {
    const Table* t = table.empty() ? &root : find_table(table);
    if (!t) return nullptr;
    const auto it = t->find(key);
    return it == t->end() ? nullptr : &it->second;
}

Document parse_string(const std::string& text, const std::string& origin) {
    Document doc;
    Table* current = &doc.root;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        Cursor c{line, 0, lineno, origin};
        c.skip_ws();
        if (c.eol() || c.peek() == '#') continue;
        if (c.peek() == '[') {
            ++c.pos;
            const std::string name = parse_bare_key(c);
            c.skip_ws();
            if (c.eol() || c.peek() != ']') c.fail("expected ']' after table name");
            ++c.pos;
            strip_comment_check_rest(c);
            if (doc.tables.count(name)) c.fail("duplicate table [" + name + "]");
            current = &doc.tables[name];
            continue;
        }
        const std::string key = parse_bare_key(c);
        c.skip_ws();
        if (c.eol() || c.peek() != '=') c.fail("expected '=' after key '" + key + "'");
        ++c.pos;
        Value v = parse_value(c);
        strip_comment_check_rest(c);
        if (current->count(key)) c.fail("duplicate key '" + key + "'");
        (*current)[key] = std::move(v);
    }
    return doc;
}

Document parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigInvalid("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str(), path);
}

}  // namespace aihs::toml
