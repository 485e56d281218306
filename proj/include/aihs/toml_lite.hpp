// Minimal TOML reader covering the scenario config schema: [table] headers,
// bare keys, strings, booleans, integers, floats, homogeneous single-line
// arrays, and # comments. Parse errors throw ConfigInvalid with line numbers.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "aihs/errors.hpp"

namespace aihs::toml {

struct Value;
using Array = std::vector<Value>;

struct Value {
    std::variant<bool, std::int64_t, double, std::string, Array> data;

    bool is_bool() const { return std::holds_alternative<bool>(data); }
    bool is_int() const { return std::holds_alternative<std::int64_t>(data); }
    bool is_float() const { return std::holds_alternative<double>(data); }
    bool is_number() const { return is_int() || is_float(); }
    bool is_string() const { return std::holds_alternative<std::string>(data); }
    bool is_array() const { return std::holds_alternative<Array>(data); }

    bool as_bool() const;
    std::int64_t as_int() const;
    double as_double() const;  // accepts integers
    const std::string& as_string() const;
    const Array& as_array() const;
};

using Table = std::map<std::string, Value>;

struct Document {
    Table root;                          // keys before the first [table]
    std::map<std::string, Table> tables;

    const Table* find_table(const std::string& name) const;
    const Value* find(const std::string& table, const std::string& key) const;
};

Document parse_string(const std::string& text, const std::string& origin = "<string>");
Document parse_file(const std::string& path);

}  // namespace aihs::toml
