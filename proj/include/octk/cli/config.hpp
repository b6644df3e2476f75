#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "octk/core/errors.hpp"

namespace octk::cli {

/// Scenario configuration: flat key = value lines, '#' comments, dotted
/// keys for nesting, whitespace-separated numbers for lists. Unknown keys
/// are rejected at validation time so typos cannot silently fall back to
/// defaults.
struct ScenarioConfig {
    std::string scenario;
    std::map<std::string, std::string> values;
    std::string source_path;

    bool has(const std::string& key) const { return values.count(key) != 0; }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        auto it = values.find(key);
        return it == values.end() ? fallback : it->second;
    }

    double get_double(const std::string& key, double fallback) const {
        auto it = values.find(key);
        if (it == values.end()) return fallback;
        try {
            std::size_t used = 0;
            const double v = std::stod(it->second, &used);
            if (used != it->second.size()) throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            throw ConfigurationError("config key '" + key + "': cannot parse '" + it->second +
                                     "' as a number");
        }
    }

    std::size_t get_count(const std::string& key, std::size_t fallback) const {
        const double v = get_double(key, static_cast<double>(fallback));
        if (v < 0.0 || v != std::floor(v))
            throw ConfigurationError("config key '" + key + "': expected a whole number");
        return static_cast<std::size_t>(v);
    }

    std::vector<double> get_list(const std::string& key,
                                 const std::vector<double>& fallback) const {
        auto it = values.find(key);
        if (it == values.end()) return fallback;
        std::vector<double> out;
        std::istringstream iss(it->second);
        std::string tok;
        while (iss >> tok) {
            try {
                out.push_back(std::stod(tok));
            } catch (const std::exception&) {
                throw ConfigurationError("config key '" + key + "': cannot parse '" + tok +
                                         "' as a number");
            }
        }
        if (out.empty())
            throw ConfigurationError("config key '" + key + "': empty list");
        return out;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

}  // namespace detail

inline ScenarioConfig parse_config_text(std::istream& in, const std::string& path) {
    ScenarioConfig cfg;
    cfg.source_path = path;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = detail::trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigurationError(path + ":" + std::to_string(lineno) +
                                     ": expected 'key = value'");
        const std::string key = detail::trim(stripped.substr(0, eq));
        const std::string value = detail::trim(stripped.substr(eq + 1));
        if (key.empty())
            throw ConfigurationError(path + ":" + std::to_string(lineno) + ": empty key");
        if (value.empty())
            throw ConfigurationError(path + ":" + std::to_string(lineno) + ": empty value for '" +
                                     key + "'");
        if (cfg.values.count(key))
            throw ConfigurationError(path + ":" + std::to_string(lineno) + ": duplicate key '" +
                                     key + "'");
        cfg.values[key] = value;
    }
    auto it = cfg.values.find("scenario");
    if (it == cfg.values.end())
        throw ConfigurationError(path + ": missing required key 'scenario'");
    cfg.scenario = it->second;
    return cfg;
}

inline ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigurationError("cannot read config file: " + path);
    return parse_config_text(in, path);
}

}  // namespace octk::cli
