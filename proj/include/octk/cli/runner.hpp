#pragma once

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "octk/cli/config.hpp"
#include "octk/cli/report.hpp"
#include "octk/cli/scenarios.hpp"

namespace octk::cli {

// Exit-code contract: 0 all verdicts pass, 1 some verdict failed,
// 2 configuration problem, 3 solver failure.
enum ExitCode : int {
    kExitPass = 0,
    kExitFail = 1,
    kExitConfig = 2,
    kExitSolver = 3,
};

namespace detail {

inline std::filesystem::path resolve_out_dir(const ScenarioConfig& cfg,
                                             const std::string& out_flag) {
    if (!out_flag.empty()) return out_flag;
    if (cfg.has("out")) return cfg.get_string("out", "");
    std::string root = "octk-runs";
    if (const char* env = std::getenv("OCTK_OUT")) root = env;
    return std::filesystem::path(root) / cfg.scenario;
}

inline void print_verdicts(const RunReport& report) {
    for (const auto& v : report.verdicts) {
        std::ostringstream line;
        line << (v.pass ? "PASS " : "FAIL ") << v.name << ": measured " << v.measured;
        if (v.expected) line << " vs " << *v.expected;
        line << " (tolerance " << v.tolerance << ") [" << v.anchor << "]";
        std::cout << line.str() << '\n';
    }
}

// Scenarios write into a staging directory that becomes the output
// directory only after the run finished; a failed run leaves nothing
// behind.
struct StagingDir {
    std::filesystem::path staging;
    bool committed = false;

    explicit StagingDir(const std::filesystem::path& out) : staging(out) {
        staging += ".staging";
        std::filesystem::remove_all(staging);
        std::filesystem::create_directories(staging);
    }

    void commit(const std::filesystem::path& out) {
        namespace fs = std::filesystem;
        fs::create_directories(out);
        for (const auto& entry : fs::directory_iterator(staging)) {
            const fs::path target = out / entry.path().filename();
            fs::remove_all(target);
            fs::rename(entry.path(), target);
        }
        fs::remove_all(staging);
        committed = true;
    }

    ~StagingDir() {
        if (!committed) {
            std::error_code ec;
            std::filesystem::remove_all(staging, ec);
        }
    }
};

}  // namespace detail

inline int cmd_list() {
    std::cout << "scenario          tag                       description\n";
    for (const auto& e : catalog()) {
        std::ostringstream line;
        line.width(18);
        line << std::left << e.id;
        line.width(26);
        line << std::left << e.tag;
        line << e.description;
        std::cout << line.str() << '\n';
    }
    return kExitPass;
}

inline int cmd_run(const std::string& config_path, const std::string& out_flag) {
    ScenarioConfig cfg;
    const CatalogEntry* entry = nullptr;
    std::filesystem::path out;
    try {
        cfg = load_config(config_path);
        entry = find_scenario(cfg.scenario);
        if (!entry) throw ConfigurationError("unknown scenario '" + cfg.scenario + "'");
        out = detail::resolve_out_dir(cfg, out_flag);
    } catch (const Error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    RunReport report;
    double wall_ms = 0.0;
    try {
        detail::StagingDir staging(out);
        const auto t0 = std::chrono::steady_clock::now();
        report = entry->run(cfg, staging.staging);
        wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                            t0)
                      .count();
        write_report_json(staging.staging / "report.json", report);
        write_timings_json(staging.staging / "timings.json", {{"run", wall_ms}});
        staging.commit(out);
    } catch (const ConfigurationError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const Error& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return kExitSolver;
    }

    detail::print_verdicts(report);
    std::cout << (report.all_pass() ? "ALL PASS" : "FAILURES PRESENT") << " -> "
              << out.string() << '\n';
    return report.all_pass() ? kExitPass : kExitFail;
}

namespace detail {

inline RunReport sweep_hbar(const ScenarioConfig& cfg, const std::filesystem::path& out) {
    const auto hbars = cfg.get_list("hbar_list", {1.0, 0.5, 0.25, 0.125});
    if (hbars.size() < 3)
        throw ConfigurationError("sweep: need at least 3 hbar values on the axis");
    const auto rows = quantum::classical_limit_sweep(gaussian_limit_scenario(cfg), hbars);

    RunReport report;
    report.scenario = cfg.scenario + "/sweep-hbar";
    report.family = cfg.scenario;
    report.config_echo = cfg.values;
    Table table{"sweep", {"hbar", "discrepancy", "quantum_correction", "empirical_order"}, {}};
    bool monotone = true;
    for (std::size_t j = 0; j < rows.size(); ++j) {
        double order = 0.0;
        if (j + 1 < rows.size())
            order = std::log2(rows[j].discrepancy / rows[j + 1].discrepancy) /
                    std::log2(rows[j].hbar / rows[j + 1].hbar);
        table.rows.push_back(
            {rows[j].hbar, rows[j].discrepancy, rows[j].quantum_correction, order});
        if (j > 0) monotone = monotone && rows[j].discrepancy < rows[j - 1].discrepancy;
    }
    report.tables.push_back(table);
    report.verdicts.push_back(check_at_least("classical_limit_monotone",
                                             "discrepancy decreases along the hbar axis",
                                             monotone ? 1.0 : 0.0, 1.0));
    write_table_csv(out / "sweep.csv", table);
    return report;
}

inline RunReport sweep_grid(const ScenarioConfig& cfg, const std::filesystem::path& out) {
    if (cfg.scenario != "lq")
        throw ConfigurationError("sweep: the grid axis is available for the lq scenario");
    const auto levels = cfg.get_count("sweep.levels", 3);
    if (levels < 3) throw ConfigurationError("sweep: need at least 3 grid levels");

    const GridSpec fine =
        detail::grid_from(cfg, "grid", GridSpec{-2.0, 2.0, 401, 0.0, 1.0, 2001});
    const auto lq = control::make_lq_problem();
    const double exact = -0.5 * std::tanh(1.0);

    std::vector<double> errors;
    std::vector<GridSpec> grids;
    for (std::size_t lvl = 0; lvl < levels; ++lvl) {
        const std::size_t div = std::size_t{1} << (levels - 1 - lvl);
        GridSpec g = fine;
        if ((fine.nx - 1) % div != 0 || (fine.nt - 1) % div != 0)
            throw ConfigurationError("sweep: grid.nx-1 and grid.nt-1 must be divisible by " +
                                     std::to_string(div));
        g.nx = (fine.nx - 1) / div + 1;
        g.nt = (fine.nt - 1) / div + 1;
        grids.push_back(g);
    }

    RunReport report;
    report.scenario = cfg.scenario + "/sweep-grid";
    report.family = cfg.scenario;
    report.config_echo = cfg.values;
    Table table{"sweep", {"nx", "nt", "value_error", "empirical_order"}, {}};
    for (std::size_t lvl = 0; lvl < grids.size(); ++lvl) {
        const auto sol = bellman::solve_hjb(lq, grids[lvl]);
        std::size_t i1 = 0;
        double best = 1e300;
        for (std::size_t i = 0; i < grids[lvl].nx; ++i)
            if (std::abs(grids[lvl].x(i) - 1.0) < best) {
                best = std::abs(grids[lvl].x(i) - 1.0);
                i1 = i;
            }
        errors.push_back(std::abs(sol.J.at(i1, 0) - exact));
        double order = 0.0;
        if (lvl > 0) order = std::log2(errors[lvl - 1] / errors[lvl]);
        table.rows.push_back({static_cast<double>(grids[lvl].nx),
                              static_cast<double>(grids[lvl].nt), errors[lvl], order});
    }
    report.tables.push_back(table);
    double min_order = 1e300;
    for (std::size_t lvl = 1; lvl < errors.size(); ++lvl)
        min_order = std::min(min_order, std::log2(errors[lvl - 1] / errors[lvl]));
    report.verdicts.push_back(check_at_least("refinement_order",
                                             "value error drops with order >= 0.9 per halving",
                                             min_order, 0.9));
    write_table_csv(out / "sweep.csv", table);
    return report;
}

}  // namespace detail

inline int cmd_sweep(const std::string& config_path, const std::string& axis,
                     const std::string& out_flag) {
    ScenarioConfig cfg;
    std::filesystem::path out;
    try {
        cfg = load_config(config_path);
        if (!find_scenario(cfg.scenario))
            throw ConfigurationError("unknown scenario '" + cfg.scenario + "'");
        if (axis != "hbar" && axis != "grid")
            throw ConfigurationError("sweep: axis must be hbar or grid");
        out = detail::resolve_out_dir(cfg, out_flag);
        out += "-sweep-" + axis;
    } catch (const Error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    RunReport report;
    double wall_ms = 0.0;
    try {
        detail::StagingDir staging(out);
        const auto t0 = std::chrono::steady_clock::now();
        report = (axis == "hbar") ? detail::sweep_hbar(cfg, staging.staging)
                                  : detail::sweep_grid(cfg, staging.staging);
        wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                            t0)
                      .count();
        write_report_json(staging.staging / "report.json", report);
        write_timings_json(staging.staging / "timings.json", {{"sweep", wall_ms}});
        staging.commit(out);
    } catch (const ConfigurationError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const Error& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return kExitSolver;
    }

    detail::print_verdicts(report);
    return report.all_pass() ? kExitPass : kExitFail;
}

namespace detail {

struct CsvTrajectory {
    std::vector<double> t, x, p, u;
    bool has_u = false;
};

inline CsvTrajectory read_trajectory_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigurationError("cannot read " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "t,x,p_or_lambda,u")
        throw ConfigurationError(path.string() + ": unexpected trajectory header");
    CsvTrajectory traj;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream iss(line);
        std::string tok;
        std::vector<std::string> cells;
        while (std::getline(iss, tok, ',')) cells.push_back(tok);
        while (cells.size() < 4) cells.emplace_back();
        traj.t.push_back(std::stod(cells[0]));
        traj.x.push_back(std::stod(cells[1]));
        traj.p.push_back(std::stod(cells[2]));
        if (!cells[3].empty()) {
            traj.u.push_back(std::stod(cells[3]));
            traj.has_u = true;
        } else {
            traj.u.push_back(0.0);
        }
    }
    if (traj.t.size() < 2) throw ConfigurationError(path.string() + ": too few samples");
    return traj;
}

inline double interp_column(const std::vector<double>& t, const std::vector<double>& col,
                            double at) {
    const auto it = std::upper_bound(t.begin(), t.end(), at);
    if (it == t.begin()) return col.front();
    if (it == t.end()) return col.back();
    const auto hi = static_cast<std::size_t>(it - t.begin());
    const double w = (at - t[hi - 1]) / (t[hi] - t[hi - 1]);
    return col[hi - 1] * (1.0 - w) + col[hi] * w;
}

}  // namespace detail

inline int cmd_compare(const std::string& dir_a, const std::string& dir_b, double tolerance,
                       const std::string& out_flag) {
    namespace fs = std::filesystem;
    try {
        auto read_family = [](const fs::path& dir) {
            std::ifstream in(dir / "report.json");
            if (!in)
                throw ConfigurationError("cannot read " + (dir / "report.json").string());
            nlohmann::json j;
            in >> j;
            return j.value("family", std::string{});
        };
        const std::string fam_a = read_family(dir_a);
        const std::string fam_b = read_family(dir_b);
        if (fam_a.empty() || fam_a != fam_b)
            throw ConfigurationError("compare: incompatible scenarios ('" + fam_a + "' vs '" +
                                     fam_b + "')");

        const auto ta = detail::read_trajectory_csv(fs::path(dir_a) / "trajectory.csv");
        const auto tb = detail::read_trajectory_csv(fs::path(dir_b) / "trajectory.csv");
        const double lo = std::max(ta.t.front(), tb.t.front());
        const double hi = std::min(ta.t.back(), tb.t.back());
        if (!(hi > lo)) throw ConfigurationError("compare: trajectories do not overlap in time");

        const auto& coarse = (ta.t.size() <= tb.t.size()) ? ta : tb;
        double sup_dx = 0.0, sup_dp = 0.0, sup_du = 0.0;
        double l2_dx = 0.0, l2_dp = 0.0, l2_du = 0.0;
        std::size_t n = 0;
        for (double t : coarse.t) {
            if (t < lo || t > hi) continue;
            ++n;
            const double dx =
                detail::interp_column(ta.t, ta.x, t) - detail::interp_column(tb.t, tb.x, t);
            const double dp =
                detail::interp_column(ta.t, ta.p, t) - detail::interp_column(tb.t, tb.p, t);
            const double du =
                detail::interp_column(ta.t, ta.u, t) - detail::interp_column(tb.t, tb.u, t);
            sup_dx = std::max(sup_dx, std::abs(dx));
            sup_dp = std::max(sup_dp, std::abs(dp));
            sup_du = std::max(sup_du, std::abs(du));
            l2_dx += dx * dx;
            l2_dp += dp * dp;
            l2_du += du * du;
        }
        l2_dx = std::sqrt(l2_dx / n);
        l2_dp = std::sqrt(l2_dp / n);
        l2_du = std::sqrt(l2_du / n);

        const bool both_u = ta.has_u && tb.has_u;
        const bool pass = sup_dx <= tolerance && sup_dp <= tolerance &&
                          (!both_u || sup_du <= tolerance);
        std::cout << (pass ? "PASS" : "FAIL") << " compare: sup|dx| = " << sup_dx
                  << ", sup|dp| = " << sup_dp;
        if (both_u) std::cout << ", sup|du| = " << sup_du;
        std::cout << " (tolerance " << tolerance << ")\n";
        std::cout << "l2: dx = " << l2_dx << ", dp = " << l2_dp;
        if (both_u) std::cout << ", du = " << l2_du;
        std::cout << '\n';

        if (!out_flag.empty()) {
            fs::create_directories(out_flag);
            nlohmann::ordered_json j;
            j["family"] = fam_a;
            j["tolerance"] = tolerance;
            j["sup"] = {{"dx", sup_dx}, {"dp", sup_dp}, {"du", both_u ? sup_du : 0.0}};
            j["l2"] = {{"dx", l2_dx}, {"dp", l2_dp}, {"du", both_u ? l2_du : 0.0}};
            j["pass"] = pass;
            std::ofstream outj(fs::path(out_flag) / "compare.json");
            outj << j.dump(2) << '\n';
        }
        return pass ? kExitPass : kExitFail;
    } catch (const ConfigurationError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const Error& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return kExitSolver;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
}

}  // namespace octk::cli
