#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "octk/core/errors.hpp"
#include "octk/core/field.hpp"
#include "octk/core/residual.hpp"
#include "octk/core/types.hpp"

namespace octk::cli {

inline constexpr const char* kToolkitVersion = "0.1.0";

/// One checked claim: what was measured, the bar it must clear, and the
/// identity it traces back to.
struct Verdict {
    std::string name;
    std::string anchor;  // which identity or reference value is being checked
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::optional<double> expected;
};

inline Verdict check_abs(std::string name, std::string anchor, double measured,
                         double expected, double tolerance) {
    Verdict v{std::move(name), std::move(anchor), measured, tolerance, false, expected};
    v.pass = std::isfinite(measured) && std::abs(measured - expected) <= tolerance;
    return v;
}

inline Verdict check_below(std::string name, std::string anchor, double measured,
                           double tolerance) {
    Verdict v{std::move(name), std::move(anchor), measured, tolerance, false, std::nullopt};
    v.pass = std::isfinite(measured) && measured <= tolerance;
    return v;
}

inline Verdict check_at_least(std::string name, std::string anchor, double measured,
                              double threshold) {
    Verdict v{std::move(name), std::move(anchor), measured, threshold, false, std::nullopt};
    v.pass = std::isfinite(measured) && measured >= threshold;
    return v;
}

/// Numeric table emitted next to the report (one CSV per table).
struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct RunReport {
    std::string scenario;
    std::string family;  // compare() only accepts runs of the same family
    std::map<std::string, std::string> config_echo;
    std::vector<Verdict> verdicts;
    std::vector<std::pair<std::string, double>> metrics;
    std::vector<Table> tables;

    bool all_pass() const {
        for (const auto& v : verdicts)
            if (!v.pass) return false;
        return true;
    }
};

namespace detail {

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

/// Trajectory CSV: t, x, p_or_lambda, u with 17-significant-digit decimals;
/// the control column is left empty when the trajectory has none.
inline void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
    std::ofstream out(path);
    if (!out) throw ConfigurationError("cannot open " + path.string() + " for writing");
    out << "t,x,p_or_lambda,u\n";
    for (std::size_t k = 0; k < traj.size(); ++k) {
        out << detail::fmt17(traj.times[k]) << ',' << detail::fmt17(traj.states[k]) << ','
            << detail::fmt17(traj.costates[k]) << ',';
        if (traj.has_controls()) out << detail::fmt17(traj.controls[k]);
        out << '\n';
    }
}

/// Long-format field CSV: x, t, value_re, value_im, thinned by the given
/// strides. Masked nodes are skipped.
template <typename T>
void write_field_csv(const std::filesystem::path& path, const Field<T>& field,
                     std::size_t stride_x = 1, std::size_t stride_t = 1) {
    std::ofstream out(path);
    if (!out) throw ConfigurationError("cannot open " + path.string() + " for writing");
    out << "x,t,value_re,value_im\n";
    for (std::size_t k = 0; k < field.slices(); k += stride_t) {
        const double t = field.slices() == 1 ? field.grid.t0 : field.grid.t(k);
        for (std::size_t i = 0; i < field.nx(); i += stride_x) {
            if (!field.valid(i, k)) continue;
            const cplx v = octk::detail::as_complex(field.at(i, k));
            out << detail::fmt17(field.grid.x(i)) << ',' << detail::fmt17(t) << ','
                << detail::fmt17(v.real()) << ',' << detail::fmt17(v.imag()) << '\n';
        }
    }
}

inline void write_table_csv(const std::filesystem::path& path, const Table& table) {
    std::ofstream out(path);
    if (!out) throw ConfigurationError("cannot open " + path.string() + " for writing");
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        out << table.columns[c] << (c + 1 < table.columns.size() ? ',' : '\n');
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            out << detail::fmt17(row[c]) << (c + 1 < row.size() ? ',' : '\n');
    }
}

/// Stable report serialization: insertion-ordered JSON, no timing data
/// (wall-clock numbers go to a separate, explicitly non-deterministic
/// file).
inline void write_report_json(const std::filesystem::path& path, const RunReport& report) {
    nlohmann::ordered_json j;
    j["toolkit"] = {{"name", "octk"}, {"version", kToolkitVersion}};
    j["scenario"] = report.scenario;
    j["family"] = report.family;
    nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
    for (const auto& [k, v] : report.config_echo) cfg[k] = v;
    j["config"] = cfg;

    j["verdicts"] = nlohmann::ordered_json::array();
    for (const auto& v : report.verdicts) {
        nlohmann::ordered_json jv;
        jv["name"] = v.name;
        jv["anchor"] = v.anchor;
        jv["measured"] = v.measured;
        if (v.expected) jv["expected"] = *v.expected;
        jv["tolerance"] = v.tolerance;
        jv["pass"] = v.pass;
        j["verdicts"].push_back(jv);
    }
    nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
    for (const auto& [k, v] : report.metrics) metrics[k] = v;
    j["metrics"] = metrics;
    j["all_pass"] = report.all_pass();

    std::ofstream out(path);
    if (!out) throw ConfigurationError("cannot open " + path.string() + " for writing");
    out << j.dump(2) << '\n';
}

inline void write_timings_json(const std::filesystem::path& path,
                               const std::vector<std::pair<std::string, double>>& wall_ms) {
    nlohmann::ordered_json j;
    j["note"] = "wall-clock data; excluded from the deterministic output set";
    nlohmann::ordered_json t = nlohmann::ordered_json::object();
    for (const auto& [k, v] : wall_ms) t[k] = v;
    j["wall_ms"] = t;
    std::ofstream out(path);
    if (out) out << j.dump(2) << '\n';
}

}  // namespace octk::cli
