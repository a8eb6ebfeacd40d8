#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "detproj/core.hpp"

namespace detproj::harness {

enum class KeyType { Double, Int, Uint64, String };

struct KeySpec {
    std::string key;
    KeyType type = KeyType::String;
    std::string default_value;
    std::string doc;
};

/// Declared key set of one run configuration. Unknown keys in a config file
/// are hard errors, so typos never silently fall back to defaults.
class ConfigSchema {
  public:
    ConfigSchema& add(std::string key, KeyType type, std::string default_value,
                      std::string doc) {
        require(find(key) == nullptr, "schema: duplicate key '" + key + "'");
        keys_.push_back({std::move(key), type, std::move(default_value), std::move(doc)});
        return *this;
    }

    const KeySpec* find(const std::string& key) const {
        for (const auto& k : keys_)
            if (k.key == key) return &k;
        return nullptr;
    }

    const std::vector<KeySpec>& keys() const { return keys_; }

  private:
    std::vector<KeySpec> keys_;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

inline bool parse_ll(const std::string& s, long long& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtoll(s.c_str(), &end, 10);
    return end == s.c_str() + s.size();
}

inline std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace detail

/// Parsed `key = value` configuration resolved against a schema. Accessors
/// fall back to the declared defaults; resolved() lists every key (set or
/// defaulted) so runs can embed their full configuration.
class RunConfig {
  public:
    static RunConfig parse(const std::string& text, const ConfigSchema& schema) {
        RunConfig cfg;
        cfg.schema_ = &schema;
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            std::size_t hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = detail::trim(line);
            if (line.empty()) continue;
            std::size_t eq = line.find('=');
            require(eq != std::string::npos, "config: malformed line " + std::to_string(lineno) +
                                                 ": expected 'key = value'");
            std::string key = detail::trim(line.substr(0, eq));
            std::string value = detail::trim(line.substr(eq + 1));
            require(!key.empty() && !value.empty(),
                    "config: malformed line " + std::to_string(lineno) +
                        ": expected 'key = value'");
            const KeySpec* spec = schema.find(key);
            require(spec != nullptr, "config: unknown key '" + key + "' (line " +
                                         std::to_string(lineno) + ")");
            require(cfg.values_.find(key) == cfg.values_.end(),
                    "config: duplicate key '" + key + "' (line " + std::to_string(lineno) + ")");
            cfg.check_type(*spec, value, lineno);
            cfg.values_[key] = value;
        }
        return cfg;
    }

    static RunConfig load(const std::string& path, const ConfigSchema& schema) {
        std::ifstream in(path);
        require(in.good(), "config: cannot open '" + path + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        return parse(buf.str(), schema);
    }

    const std::string& get_string(const std::string& key) const { return raw(key); }

    double get_double(const std::string& key) const {
        double v = 0.0;
        ensure(detail::parse_double(raw(key), v), "config: key '" + key + "' is not a number");
        return v;
    }

    int get_int(const std::string& key) const {
        long long v = 0;
        ensure(detail::parse_ll(raw(key), v), "config: key '" + key + "' is not an integer");
        return static_cast<int>(v);
    }

    std::uint64_t get_u64(const std::string& key) const {
        long long v = 0;
        ensure(detail::parse_ll(raw(key), v) && v >= 0,
               "config: key '" + key + "' is not a non-negative integer");
        return static_cast<std::uint64_t>(v);
    }

    bool was_set(const std::string& key) const { return values_.count(key) != 0; }

    /// Every schema key with its effective value, in schema order.
    std::vector<std::pair<std::string, std::string>> resolved() const {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& spec : schema_->keys()) out.emplace_back(spec.key, raw(spec.key));
        return out;
    }

    std::uint64_t hash() const {
        std::string blob;
        for (const auto& [k, v] : resolved()) blob += k + "=" + v + "\n";
        return detail::fnv1a(blob);
    }

  private:
    const std::string& raw(const std::string& key) const {
        auto it = values_.find(key);
        if (it != values_.end()) return it->second;
        const KeySpec* spec = schema_->find(key);
        ensure(spec != nullptr, "config: undeclared key '" + key + "'");
        return spec->default_value;
    }

    void check_type(const KeySpec& spec, const std::string& value, int lineno) const {
        bool ok = true;
        if (spec.type == KeyType::Double) {
            double d;
            ok = detail::parse_double(value, d);
        } else if (spec.type == KeyType::Int || spec.type == KeyType::Uint64) {
            long long v;
            ok = detail::parse_ll(value, v) && (spec.type == KeyType::Int || v >= 0);
        }
        require(ok, "config: bad value for key '" + spec.key + "' (line " +
                        std::to_string(lineno) + ")");
    }

    const ConfigSchema* schema_ = nullptr;
    std::map<std::string, std::string> values_;
};

}  // namespace detproj::harness
