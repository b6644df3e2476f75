#include <string>

#include <CLI11.hpp>

#include "octk/cli/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"octk: open-loop / closed-loop correspondence toolkit"};
    app.require_subcommand(1);

    auto* list = app.add_subcommand("list", "list catalog scenarios");

    std::string run_config, run_out;
    auto* run = app.add_subcommand("run", "run a scenario from a config file");
    run->add_option("config", run_config, "scenario config file")->required();
    run->add_option("--out", run_out, "output directory (overrides config and OCTK_OUT)");

    std::string sweep_config, sweep_axis, sweep_out;
    auto* sweep = app.add_subcommand("sweep", "run a refinement or hbar sweep");
    sweep->add_option("config", sweep_config, "scenario config file")->required();
    sweep->add_option("--axis", sweep_axis, "sweep axis: hbar or grid")->required();
    sweep->add_option("--out", sweep_out, "output directory");

    std::string cmp_a, cmp_b, cmp_out;
    double cmp_tol = 5e-3;
    auto* compare = app.add_subcommand("compare", "compare the trajectories of two runs");
    compare->add_option("dirA", cmp_a, "first run directory")->required();
    compare->add_option("dirB", cmp_b, "second run directory")->required();
    compare->add_option("--tol", cmp_tol, "sup-norm tolerance for PASS");
    compare->add_option("--out", cmp_out, "directory for the diff report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : octk::cli::kExitConfig;
    }

    if (list->parsed()) return octk::cli::cmd_list();
    if (run->parsed()) return octk::cli::cmd_run(run_config, run_out);
    if (sweep->parsed()) return octk::cli::cmd_sweep(sweep_config, sweep_axis, sweep_out);
    if (compare->parsed()) return octk::cli::cmd_compare(cmp_a, cmp_b, cmp_tol, cmp_out);
    return octk::cli::kExitConfig;
}
