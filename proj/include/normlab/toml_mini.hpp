#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace normlab::tomlmini {

// Minimal TOML subset for sweep configs: top-level keys, [table] sections,
// [[array-of-table]] sections, values of type string / integer / float /
// bool / flat array, and # comments. Enough for hand-written configs;
// nested tables and dates are out of scope.
struct Value {
    std::variant<std::string, std::int64_t, double, bool, std::vector<Value>> data;

    bool is_string() const { return std::holds_alternative<std::string>(data); }
    bool is_int() const { return std::holds_alternative<std::int64_t>(data); }
    bool is_float() const { return std::holds_alternative<double>(data); }
    bool is_bool() const { return std::holds_alternative<bool>(data); }
    bool is_array() const { return std::holds_alternative<std::vector<Value>>(data); }

    const std::string& as_string() const { return std::get<std::string>(data); }
    std::int64_t as_int() const { return std::get<std::int64_t>(data); }
    // Accepts integer literals where a float is wanted.
    double as_float() const {
        return is_int() ? static_cast<double>(as_int()) : std::get<double>(data);
    }
    bool as_bool() const { return std::get<bool>(data); }
    const std::vector<Value>& as_array() const { return std::get<std::vector<Value>>(data); }
};

using Table = std::map<std::string, Value>;

struct Document {
    Table root;
    std::map<std::string, Table> tables;
    std::map<std::string, std::vector<Table>> table_arrays;
};

struct ParseError {
    int line = 0;
    std::string message;
};

// Returns the document; syntax problems are appended to `errors` (the
// offending lines are skipped, parsing continues).
Document parse(const std::string& text, std::vector<ParseError>& errors);

// Inverse of parse for documents in the supported subset.
std::string serialize(const Document& doc);

} // namespace normlab::tomlmini
