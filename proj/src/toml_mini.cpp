#include "normlab/toml_mini.hpp"

#include <cctype>
#include <cstdio>
#include <sstream>

namespace normlab::tomlmini {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

// Strips a # comment that is not inside a quoted string.
std::string strip_comment(const std::string& s) {
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') quoted = !quoted;
        if (s[i] == '#' && !quoted) return s.substr(0, i);
    }
    return s;
}

bool parse_scalar(const std::string& text, Value& out, std::string& err);

bool parse_array(const std::string& text, Value& out, std::string& err) {
    std::vector<Value> items;
    std::size_t pos = 1; // past '['
    bool expecting_value = true;
    while (pos < text.size()) {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos >= text.size()) break;
        if (text[pos] == ']') {
            out.data = std::move(items);
            return true;
        }
        if (!expecting_value) {
            if (text[pos] != ',') {
                err = "expected ',' or ']' in array";
                return false;
            }
            ++pos;
            expecting_value = true;
            continue;
        }
        // scan one element: up to the matching comma/bracket outside quotes
        std::size_t start = pos;
        bool quoted = false;
        while (pos < text.size()) {
            char c = text[pos];
            if (c == '"') quoted = !quoted;
            if (!quoted && (c == ',' || c == ']')) break;
            ++pos;
        }
        Value v;
        if (!parse_scalar(trim(text.substr(start, pos - start)), v, err)) return false;
        items.push_back(std::move(v));
        expecting_value = false;
    }
    err = "unterminated array";
    return false;
}

bool parse_scalar(const std::string& text, Value& out, std::string& err) {
    if (text.empty()) {
        err = "empty value";
        return false;
    }
    if (text.front() == '[') return parse_array(text, out, err);
    if (text.front() == '"') {
        if (text.size() < 2 || text.back() != '"') {
            err = "unterminated string";
            return false;
        }
        std::string s;
        for (std::size_t i = 1; i + 1 < text.size(); ++i) {
            if (text[i] == '\\' && i + 2 < text.size()) {
                ++i;
                switch (text[i]) {
                case 'n': s += '\n'; break;
                case 't': s += '\t'; break;
                case '"': s += '"'; break;
                case '\\': s += '\\'; break;
                default:
                    err = "unsupported escape";
                    return false;
                }
            } else {
                s += text[i];
            }
        }
        out.data = std::move(s);
        return true;
    }
    if (text == "true") {
        out.data = true;
        return true;
    }
    if (text == "false") {
        out.data = false;
        return true;
    }
    // number: integer unless it contains '.', 'e' or 'E'
    bool is_float = text.find_first_of(".eE") != std::string::npos;
    try {
        std::size_t used = 0;
        if (is_float) {
            double d = std::stod(text, &used);
            if (used != text.size()) throw std::invalid_argument("trailing");
            out.data = d;
        } else {
            std::int64_t v = std::stoll(text, &used);
            if (used != text.size()) throw std::invalid_argument("trailing");
            out.data = v;
        }
    } catch (const std::exception&) {
        err = "bad value '" + text + "'";
        return false;
    }
    return true;
}

bool valid_key(const std::string& k) {
    if (k.empty()) return false;
    for (char c : k)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return false;
    return true;
}

std::string serialize_value(const Value& v) {
    if (v.is_string()) {
        std::string s = "\"";
        for (char c : v.as_string()) {
            switch (c) {
            case '"': s += "\\\""; break;
            case '\\': s += "\\\\"; break;
            case '\n': s += "\\n"; break;
            case '\t': s += "\\t"; break;
            default: s += c;
            }
        }
        return s + "\"";
    }
    if (v.is_int()) return std::to_string(v.as_int());
    if (v.is_float()) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", std::get<double>(v.data));
        std::string s = buf;
        // make sure it reads back as a float, not an int
        if (s.find_first_of(".eEni") == std::string::npos) s += ".0";
        return s;
    }
    if (v.is_bool()) return v.as_bool() ? "true" : "false";
    std::string s = "[";
    const auto& items = v.as_array();
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) s += ", ";
        s += serialize_value(items[i]);
    }
    return s + "]";
}

} // namespace

Document parse(const std::string& text, std::vector<ParseError>& errors) {
    Document doc;
    Table* current = &doc.root;

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;

        if (line.front() == '[') {
            bool is_array = line.size() > 1 && line[1] == '[';
            std::string close = is_array ? "]]" : "]";
            std::size_t end = line.find(close);
            if (end == std::string::npos || trim(line.substr(end + close.size())) != "") {
                errors.push_back({lineno, "malformed section header"});
                continue;
            }
            std::string name = trim(line.substr(is_array ? 2 : 1, end - (is_array ? 2 : 1)));
            if (!valid_key(name)) {
                errors.push_back({lineno, "bad section name '" + name + "'"});
                continue;
            }
            if (is_array) {
                doc.table_arrays[name].emplace_back();
                current = &doc.table_arrays[name].back();
            } else {
                current = &doc.tables[name];
            }
            continue;
        }

        std::size_t eq = std::string::npos;
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') quoted = !quoted;
            if (line[i] == '=' && !quoted) {
                eq = i;
                break;
            }
        }
        if (eq == std::string::npos) {
            errors.push_back({lineno, "expected key = value"});
            continue;
        }
        std::string key = trim(line.substr(0, eq));
        if (!valid_key(key)) {
            errors.push_back({lineno, "bad key '" + key + "'"});
            continue;
        }
        Value v;
        std::string err;
        if (!parse_scalar(trim(line.substr(eq + 1)), v, err)) {
            errors.push_back({lineno, err});
            continue;
        }
        (*current)[key] = std::move(v);
    }
    return doc;
}

std::string serialize(const Document& doc) {
    std::string out;
    for (const auto& [k, v] : doc.root) out += k + " = " + serialize_value(v) + "\n";
    for (const auto& [name, table] : doc.tables) {
        out += "\n[" + name + "]\n";
        for (const auto& [k, v] : table) out += k + " = " + serialize_value(v) + "\n";
    }
    for (const auto& [name, tables] : doc.table_arrays) {
        for (const auto& table : tables) {
            out += "\n[[" + name + "]]\n";
            for (const auto& [k, v] : table) out += k + " = " + serialize_value(v) + "\n";
        }
    }
    return out;
}

} // namespace normlab::tomlmini
