#pragma once

#include <cmath>
#include <complex>
#include <filesystem>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "octk/cli/config.hpp"
#include "octk/cli/polynomial.hpp"
#include "octk/cli/report.hpp"
#include "octk/control.hpp"
#include "octk/core.hpp"
#include "octk/mechanics.hpp"
#include "octk/quantum.hpp"

namespace octk::cli {

namespace detail {

inline GridSpec grid_from(const ScenarioConfig& cfg, const std::string& prefix, GridSpec dft) {
    GridSpec g = dft;
    g.x_min = cfg.get_double(prefix + ".x_min", dft.x_min);
    g.x_max = cfg.get_double(prefix + ".x_max", dft.x_max);
    g.nx = cfg.get_count(prefix + ".nx", dft.nx);
    g.t0 = cfg.get_double(prefix + ".t0", dft.t0);
    g.t1 = cfg.get_double(prefix + ".t1", dft.t1);
    g.nt = cfg.get_count(prefix + ".nt", dft.nt);
    g.validate();
    return g;
}

inline double sup_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size() && k < b.size(); ++k)
        worst = std::max(worst, std::abs(a[k] - b[k]));
    return worst;
}

inline double max_per_time_mean(const ResidualReport& rep) {
    double worst = 0.0;
    for (const auto& m : rep.per_time_mean) worst = std::max(worst, std::abs(m));
    return worst;
}

inline double max_per_time_std(const ResidualReport& rep) {
    double worst = 0.0;
    for (double s : rep.per_time_std) worst = std::max(worst, s);
    return worst;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// lq: linear-quadratic control, both solution routes
// ---------------------------------------------------------------------------

inline RunReport run_lq(const ScenarioConfig& cfg, const std::filesystem::path& out) {
    using namespace octk::control;
    using namespace octk::bellman;

    RunReport report;
    report.scenario = "lq";
    report.family = "lq";
    report.config_echo = cfg.values;

    const auto lq = make_lq_problem();
    const double th = std::tanh(1.0);

    auto shooting = default_shooting_config(lq);
    shooting.dt = cfg.get_double("shooting.dt", 1e-3);
    shooting.tolerance = cfg.get_double("shooting.tol", 1e-10);
    const auto open = solve_open_loop(lq, shooting);

    report.verdicts.push_back(check_abs("pontryagin_lambda0",
                                        "initial costate vs closed form -tanh(1)",
                                        open.lambda0, -th, cfg.get_double("tol.lambda0", 1e-4)));
    report.verdicts.push_back(check_abs("pontryagin_x1", "terminal state vs closed form 1/cosh(1)",
                                        open.trajectory.states.back(), 1.0 / std::cosh(1.0),
                                        cfg.get_double("tol.x1", 1e-4)));
    report.verdicts.push_back(check_below("transversality", "terminal costate condition",
                                          open.terminal_costate, shooting.tolerance));

    double worst_hu = 0.0;
    for (std::size_t k = 0; k < open.trajectory.size(); ++k)
        worst_hu = std::max(worst_hu, std::abs(control_hamiltonian_du(
                                          lq, open.trajectory.states[k],
                                          open.trajectory.controls[k],
                                          open.trajectory.costates[k],
                                          open.trajectory.times[k])));
    report.verdicts.push_back(
        check_below("stationarity", "control optimality along the open-loop path", worst_hu,
                    1e-6));

    report.verdicts.push_back(check_abs("action_optimal",
                                        "payoff of the optimal path vs -tanh(1)/2",
                                        action_value(lq, open.trajectory), -0.5 * th,
                                        cfg.get_double("tol.action", 1e-4)));

    const GridSpec grid =
        detail::grid_from(cfg, "grid", GridSpec{-2.0, 2.0, 401, 0.0, 1.0, 2001});
    const auto sol = solve_hjb(lq, grid);

    std::size_t i1 = 0;
    double best = 1e300;
    for (std::size_t i = 0; i < grid.nx; ++i)
        if (std::abs(grid.x(i) - 1.0) < best) {
            best = std::abs(grid.x(i) - 1.0);
            i1 = i;
        }
    report.verdicts.push_back(check_abs("hjb_value_J10", "value function vs -tanh(1)/2",
                                        sol.J.at(i1, 0), -0.5 * th,
                                        cfg.get_double("tol.J10", 2e-3)));
    report.verdicts.push_back(check_abs("costate_at_1_0", "value gradient vs -tanh(1)",
                                        sol.lam.at(i1, 0), -th,
                                        cfg.get_double("tol.lambda_field", 2e-3)));
    const auto hstar = reduced_hamiltonian_field(lq, sol);
    report.verdicts.push_back(check_abs("hstar_at_1_0",
                                        "reduced Hamiltonian vs -1/2 + tanh(1)^2/2",
                                        hstar.at(i1, 0), -0.5 + 0.5 * th * th,
                                        cfg.get_double("tol.hstar", 5e-3)));

    const auto cons = hjb_consistency(lq, sol);
    report.verdicts.push_back(check_below("consistency_sup",
                                          "costate feedback consistency condition",
                                          cons.sup_norm, cfg.get_double("tol.consistency", 5e-2)));
    const auto inho = inhomogeneity_report(lq, sol);
    report.verdicts.push_back(check_below("inhomogeneity_sup", "value-equation defect",
                                          inho.sup_norm,
                                          cfg.get_double("tol.inhomogeneity", 5e-2)));
    report.verdicts.push_back(check_below("inhomogeneity_std",
                                          "x-independence of the value-equation defect",
                                          detail::max_per_time_std(inho),
                                          cfg.get_double("tol.inhomogeneity_std", 5e-2)));

    const double roll_dt = cfg.get_double("rollout.dt", 1e-3);
    const auto rollout = closed_loop_trajectory(lq, sol, 1.0, roll_dt);
    report.verdicts.push_back(check_abs("rollout_x1", "closed-loop terminal state vs 1/cosh(1)",
                                        rollout.states.back(), 1.0 / std::cosh(1.0),
                                        cfg.get_double("tol.rollout", 5e-3)));
    const auto diff = compare_open_closed(open.trajectory, rollout);
    report.verdicts.push_back(check_below("open_closed_sup_dx",
                                          "equivalence of open-loop and feedback solutions",
                                          diff.sup_dx, cfg.get_double("tol.equivalence", 5e-3)));
    report.metrics.emplace_back("open_closed_sup_dlam", diff.sup_dlam);
    report.metrics.emplace_back("hjb_cfl_ratio", sol.cfl_ratio);
    report.metrics.emplace_back("secant_iterations",
                                static_cast<double>(open.secant_iterations));

    const auto sx = cfg.get_count("stride.x", 8);
    const auto st = cfg.get_count("stride.t", 100);
    const std::string primary = cfg.get_string("primary", "pontryagin");
    if (primary != "pontryagin" && primary != "rollout")
        throw ConfigurationError("config key 'primary': expected pontryagin or rollout");
    write_trajectory_csv(out / "trajectory.csv",
                         primary == "pontryagin" ? open.trajectory : rollout);
    write_trajectory_csv(out / "trajectory_pontryagin.csv", open.trajectory);
    write_trajectory_csv(out / "trajectory_rollout.csv", rollout);
    write_field_csv(out / "field_J.csv", sol.J, sx, st);
    write_field_csv(out / "field_lambda.csv", sol.lam, sx, st);
    write_field_csv(out / "field_ustar.csv", sol.u_star, sx, st);
    return report;
}

// ---------------------------------------------------------------------------
// free-particle: constant-line reconstruction, constraints, action fields
// ---------------------------------------------------------------------------

inline RunReport run_free_particle(const ScenarioConfig& cfg,
                                   const std::filesystem::path& out) {
    using namespace octk::mechanics;

    RunReport report;
    report.scenario = "free-particle";
    report.family = "free-particle";
    report.config_echo = cfg.values;

    const double P0 = cfg.get_double("P0", 1.0);
    const double m = cfg.get_double("m", 1.0);
    const double Q0 = cfg.get_double("Q0", 2.0);
    const double t_end = cfg.get_double("times.t1", 0.9);
    const double dt = cfg.get_double("times.dt", 0.01);
    if (t_end > 0.9 * m * P0)
        throw ConfigurationError("free-particle: horizon must stay below 0.9 m P0 "
                                 "(generating function singularity)");

    const auto gen = free_particle_generator(P0, m);
    std::vector<double> times;
    const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));
    for (std::size_t k = 0; k <= steps; ++k)
        times.push_back(static_cast<double>(k) * t_end / static_cast<double>(steps));
    const auto rebuilt = reconstruct_from_constant_line(gen, P0, Q0, times);

    const double p0 = -std::sqrt(2.0 * Q0);
    double x_err = 0.0, p_err = 0.0;
    for (std::size_t k = 0; k < rebuilt.size(); ++k) {
        const double x_exact = std::sqrt(2.0 * Q0) * (P0 - rebuilt.times[k] / m);
        x_err = std::max(x_err, std::abs(rebuilt.states[k] - x_exact));
        p_err = std::max(p_err, std::abs(rebuilt.costates[k] - p0));
    }
    report.verdicts.push_back(check_below("reconstruction_x",
                                          "state from the constant-line relations",
                                          x_err, cfg.get_double("tol.reconstruction", 1e-8)));
    report.verdicts.push_back(check_below("reconstruction_p", "momentum off the constant line",
                                          p_err, cfg.get_double("tol.reconstruction", 1e-8)));

    const auto open_momentum = closed_to_open_momentum(p_line_strategy(gen, P0), rebuilt);
    double cancel_err = 0.0;
    for (double v : open_momentum.values) cancel_err = std::max(cancel_err, std::abs(v - p0));
    report.verdicts.push_back(
        check_below("closed_equals_open_momentum",
                    "feedback momentum sampled along the path is the constant p0", cancel_err,
                    cfg.get_double("tol.cancellation", 1e-8)));

    auto free_sys = make_separable_system(m, [](double) { return 0.0; },
                                          [](double) { return 0.0; }, "free");
    const auto flow =
        hamilton_flow(free_sys, rebuilt.states.front(), rebuilt.costates.front(), 0.0,
                      t_end / static_cast<double>(steps), steps);
    double two_obs = 0.0;
    for (std::size_t k = 0; k < rebuilt.size(); ++k) {
        two_obs = std::max(two_obs, std::abs(rebuilt.states[k] - flow.states[k]));
        two_obs = std::max(two_obs, std::abs(rebuilt.costates[k] - flow.costates[k]));
    }
    report.verdicts.push_back(check_below("two_observer_equivalence",
                                          "canonical reconstruction vs Hamiltonian flow",
                                          two_obs, cfg.get_double("tol.two_observer", 1e-8)));

    // closed-loop momentum field from the phase-space constraint
    const GridSpec cgrid =
        detail::grid_from(cfg, "constraint_grid", GridSpec{-1.0, 1.0, 401, 0.0, 0.5, 401});
    auto Phi = [P0, m](double x, double p, double t) { return p + x / (P0 - t / m); };
    const auto p_field = solve_phase_constraint(Phi, cgrid, [](double) { return 0.0; });
    double fidelity = 0.0;
    for (std::size_t k = 0; k < cgrid.nt; ++k)
        for (std::size_t i = 0; i < cgrid.nx; ++i)
            if (p_field.valid(i, k))
                fidelity = std::max(fidelity,
                                    std::abs(Phi(cgrid.x(i), p_field.at(i, k), cgrid.t(k))));
    report.verdicts.push_back(check_below("constraint_fidelity",
                                          "phase-space constraint satisfied nodewise", fidelity,
                                          1e-10));
    report.verdicts.push_back(
        check_at_least("constraint_coverage", "constraint solved on the whole grid",
                       p_field.coverage(), 1.0));

    // consistency condition of the analytic pair, with refinement order
    auto consistency_sup = [&](std::size_t n) {
        GridSpec g{cgrid.x_min, cgrid.x_max, n, cgrid.t0, cgrid.t1, n};
        auto hstar = ScalarField::over_xt(g);
        auto lam = ScalarField::over_xt(g);
        hstar.fill_with([&](double x, double t) {
            const double d = P0 - t / m;
            return x * x / (2.0 * m * d * d);
        });
        lam.fill_with([&](double x, double t) { return -x / (P0 - t / m); });
        return consistency_residual(hstar, lam).sup_norm;
    };
    const double cons_fine = consistency_sup(cgrid.nx);
    const double cons_coarse = consistency_sup((cgrid.nx - 1) / 2 + 1);
    report.verdicts.push_back(check_below("consistency_sup",
                                          "momentum feedback consistency condition", cons_fine,
                                          cfg.get_double("tol.consistency", 5e-4)));
    report.verdicts.push_back(check_at_least("consistency_refinement_order",
                                             "second-order convergence of the residual",
                                             std::log2(cons_coarse / cons_fine), 1.9));

    // action function solves the free Hamilton-Jacobi equation
    const GridSpec agrid =
        detail::grid_from(cfg, "action_grid", GridSpec{-1.0, 1.0, 101, 0.0, 0.5, 4001});
    auto S = ScalarField::over_xt(agrid);
    S.fill_with([&](double x, double t) { return -x * x / (2.0 * (P0 - t / m)); });
    const auto hj = hj_residual(S, free_sys);
    report.verdicts.push_back(check_below("hj_inhomogeneity_mean",
                                          "action-function defect g(t) estimate",
                                          detail::max_per_time_mean(hj), 1e-6));
    report.verdicts.push_back(check_below("hj_inhomogeneity_std",
                                          "x-independence of the action-function defect",
                                          detail::max_per_time_std(hj), 1e-6));

    write_trajectory_csv(out / "trajectory.csv", rebuilt);
    write_trajectory_csv(out / "trajectory_flow.csv", flow);
    write_field_csv(out / "field_p.csv", p_field, cfg.get_count("stride.x", 8),
                    cfg.get_count("stride.t", 40));
    return report;
}

// ---------------------------------------------------------------------------
// harmonic: spectrum, stationary action, period evolution, generator
// ---------------------------------------------------------------------------

inline RunReport run_harmonic(const ScenarioConfig& cfg, const std::filesystem::path& out) {
    using namespace octk::quantum;
    using namespace octk::mechanics;

    RunReport report;
    report.scenario = "harmonic";
    report.family = "harmonic";
    report.config_echo = cfg.values;

    const GridSpec gx =
        detail::grid_from(cfg, "grid", GridSpec{-10.0, 10.0, 2001, 0.0, 1.0, 2});
    auto sys = make_harmonic(1.0, 1.0, cfg.get_double("hbar", 1.0));
    const auto count = cfg.get_count("count", 5);
    const auto states = stationary_states(sys, gx, count);

    double spec_err = 0.0, res_err = 0.0;
    for (std::size_t n = 0; n < states.size(); ++n) {
        const double exact = static_cast<double>(n) + 0.5;
        spec_err = std::max(spec_err, std::abs(states[n].E - exact) / exact);
        res_err = std::max(res_err,
                           states[n].residual / std::max(1.0, std::abs(states[n].E)));
    }
    report.verdicts.push_back(check_below("spectrum_rel_err",
                                          "oscillator levels vs n + 1/2", spec_err,
                                          cfg.get_double("tol.spectrum", 1e-3)));
    report.verdicts.push_back(check_below("eigen_residual", "discrete eigenproblem residual",
                                          res_err, 1e-8));

    // stationary action: the time-free part isolates the energy
    GridSpec tr = gx;
    tr.nt = 5;
    const auto sa = stationary_action(states[0], sys.hbar, tr);
    Field<cplx> Wfield = Field<cplx>::over_xt(sa.S.grid);
    Wfield.ensure_mask();
    for (std::size_t k = 0; k < Wfield.slices(); ++k)
        for (std::size_t i = 0; i < Wfield.nx(); ++i) {
            if (sa.W.valid(i))
                Wfield.at(i, k) = sa.W.at(i);
            else
                Wfield.invalidate(i, k);
        }
    const auto qhj = quantum_hj_residual(Wfield, sys);
    double worst_energy = 0.0;
    for (std::size_t k = 1; k + 1 < Wfield.slices(); ++k)
        worst_energy = std::max(worst_energy,
                                std::abs(qhj.per_time_mean[k] - cplx{states[0].E, 0.0}));
    report.verdicts.push_back(check_below("stationary_energy_identity",
                                          "time-free action residual equals the energy",
                                          worst_energy, cfg.get_double("tol.energy", 2e-3)));

    // one full period of evolution
    auto psi0 = Field<cplx>::over_x(gx);
    for (std::size_t i = 0; i < gx.nx; ++i) psi0.at(i) = cplx{states[0].phi[i], 0.0};
    GridSpec gt = gx;
    gt.t1 = 2.0 * std::numbers::pi;
    gt.nt = 101;
    const auto ev = crank_nicolson_evolve(psi0, sys, gt, 63);  // 6300 steps, dt ~ 1e-3
    cplx olap{0.0, 0.0};
    for (std::size_t i = 0; i < gx.nx; ++i)
        olap += std::conj(ev.psi.psi.at(i, 0)) * ev.psi.psi.at(i, gt.nt - 1);
    report.verdicts.push_back(check_abs("eigenstate_period_overlap",
                                        "stationary state returns after one period",
                                        std::abs(olap) * gx.dx(), 1.0, 1e-6));
    const double n0 = ev.psi.norm(0);
    double drift = 0.0;
    for (std::size_t k = 0; k < gt.nt; ++k)
        drift = std::max(drift, std::abs(ev.psi.norm(k) - n0));
    report.verdicts.push_back(
        check_below("norm_drift", "unitarity of the implicit propagator", drift, 1e-10));

    // linear time dependence of the extracted action
    GridSpec gs = gx;
    gs.t1 = 1.0;
    gs.nt = 11;
    const auto evs = crank_nicolson_evolve(psi0, sys, gs, 100);  // dt = 1e-3
    const auto S = phase_action(evs.psi, sys.hbar);
    const std::size_t ic = gx.nx / 2;
    double slope_err = 0.0;
    for (std::size_t k = 1; k < gs.nt; ++k) {
        const double slope = (S.at(ic, k).real() - S.at(ic, 0).real()) / gs.t(k);
        slope_err = std::max(slope_err, std::abs(slope + states[0].E) / states[0].E);
    }
    report.verdicts.push_back(check_below("action_time_slope",
                                          "extracted action is linear in time with slope -E",
                                          slope_err, 1e-6));

    // classical side: generator reconstruction vs the symplectic flow
    const auto gen = harmonic_generator(1.0, 1.0);
    std::vector<double> times;
    for (int k = 0; k <= 90; ++k) times.push_back(0.01 * k);
    const auto rebuilt = reconstruct_from_constant_line(gen, 1.0, 2.0, times);
    auto sho = make_separable_system(1.0, [](double x) { return 0.5 * x * x; },
                                     [](double x) { return x; }, "sho");
    const auto flow = hamilton_flow(sho, rebuilt.states.front(), rebuilt.costates.front(),
                                    0.0, 1e-3, 900);
    double two_obs = 0.0;
    for (std::size_t k = 0; k < rebuilt.size(); ++k)
        two_obs = std::max(two_obs, std::abs(rebuilt.states[k] - flow.states[10 * k]));
    report.verdicts.push_back(check_below("two_observer_equivalence",
                                          "canonical reconstruction vs Hamiltonian flow",
                                          two_obs, cfg.get_double("tol.two_observer", 1e-5)));

    Table spectrum{"spectrum", {"n", "E", "rel_err", "residual"}, {}};
    for (std::size_t n = 0; n < states.size(); ++n) {
        const double exact = static_cast<double>(n) + 0.5;
        spectrum.rows.push_back({static_cast<double>(n), states[n].E,
                                 std::abs(states[n].E - exact) / exact, states[n].residual});
    }
    report.tables.push_back(spectrum);
    write_table_csv(out / "spectrum.csv", spectrum);
    write_field_csv(out / "field_W.csv", sa.W, cfg.get_count("stride.x", 8), 1);
    write_trajectory_csv(out / "trajectory.csv", rebuilt);
    return report;
}

// ---------------------------------------------------------------------------
// plane-wave: pure-momentum degeneracy
// ---------------------------------------------------------------------------

inline RunReport run_plane_wave(const ScenarioConfig& cfg, const std::filesystem::path& out) {
    using namespace octk::quantum;

    RunReport report;
    report.scenario = "plane-wave";
    report.family = "plane-wave";
    report.config_echo = cfg.values;

    const double p0 = cfg.get_double("p0", 0.5);
    const GridSpec g =
        detail::grid_from(cfg, "grid", GridSpec{0.0, 1.0, 20001, 0.0, 1.0, 2});
    auto sys = make_free_particle(1.0, cfg.get_double("hbar", 1.0));

    const auto pw = momentum_eigenstate(g, p0, sys);
    double mag_err = 0.0;
    for (const auto& v : pw.values) mag_err = std::max(mag_err, std::abs(std::abs(v) - 1.0));
    report.verdicts.push_back(
        check_below("unit_magnitude", "plane wave has unit modulus", mag_err, 1e-14));

    const auto p = momentum_field(pw, sys.hbar);
    double p_err = 0.0;
    for (std::size_t i = 1; i + 1 < g.nx; ++i)
        p_err = std::max(p_err, std::abs(p.at(i) - cplx{p0, 0.0}));
    report.verdicts.push_back(check_below("pure_momentum_constancy",
                                          "momentum field is the constant eigenvalue p0",
                                          p_err, 1e-10));

    const auto S = phase_action(pw, sys.hbar);
    double lin_err = 0.0, im_err = 0.0;
    for (std::size_t i = 0; i < g.nx; ++i) {
        lin_err = std::max(lin_err, std::abs(S.at(i).real() - p0 * g.x(i) - S.at(0).real()));
        im_err = std::max(im_err, std::abs(S.at(i).imag()));
    }
    report.verdicts.push_back(check_below("action_linearity",
                                          "action is linear in x with slope p0", lin_err,
                                          1e-10));
    report.verdicts.push_back(
        check_below("action_real", "no magnitude part in the action", im_err, 1e-12));

    // the dispersion-phased plane wave solves the action equation exactly
    const GridSpec gq =
        detail::grid_from(cfg, "qhj_grid", GridSpec{0.0, 2.0, 401, 0.0, 1.0, 101});
    Field<cplx> psi = Field<cplx>::over_xt(gq);
    psi.fill_with([&](double x, double t) {
        return std::polar(1.0, (p0 * x - 0.5 * p0 * p0 * t / sys.mass) / sys.hbar);
    });
    const auto rep = quantum_hj_residual(phase_action(psi, sys.hbar), sys);
    report.verdicts.push_back(check_below("qhj_exact_solution",
                                          "action equation residual of the exact solution",
                                          rep.sup_norm, 1e-8));

    write_field_csv(out / "field_p.csv", p, cfg.get_count("stride.x", 200), 1);
    return report;
}

// ---------------------------------------------------------------------------
// gaussian-limit: evolved packet, action equation, semiclassical sweep
// ---------------------------------------------------------------------------

inline quantum::ClassicalLimitScenario gaussian_limit_scenario(const ScenarioConfig& cfg) {
    quantum::ClassicalLimitScenario sc;
    sc.mass = cfg.get_double("m", 1.0);
    sc.U = [](double) { return 0.0; };
    sc.grid = detail::grid_from(cfg, "sweep_grid", GridSpec{-8.0, 12.0, 2001, 0.0, 1.0, 101});
    sc.sigma = cfg.get_double("sweep_sigma", 0.5);
    sc.x_c = cfg.get_double("x_c", 0.0);
    const double p0 = cfg.get_double("p0", 1.0);
    const double mass = sc.mass;
    const double xc = sc.x_c;
    sc.initial_phase = [p0](double x) { return p0 * x; };
    sc.classical_momentum = [p0](double, double) { return p0; };
    sc.center_path = [p0, mass, xc](double t) { return xc + p0 * t / mass; };
    sc.window_halfwidth = cfg.get_double("window", 1.0);
    sc.store_every = cfg.get_count("sweep_stride", 10);
    return sc;
}

inline RunReport run_gaussian_limit(const ScenarioConfig& cfg,
                                    const std::filesystem::path& out) {
    using namespace octk::quantum;

    RunReport report;
    report.scenario = "gaussian-limit";
    report.family = "gaussian-limit";
    report.config_echo = cfg.values;

    // action-equation residual of the evolved packet, with one refinement
    const double hbar = cfg.get_double("hbar", 0.5);
    const double sigma = cfg.get_double("sigma", 1.0);
    const double p0 = cfg.get_double("p0", 1.0);
    QuantumSystem sys{1.0, [](double) { return 0.0; }, hbar, "free"};

    auto qhj_sup = [&](std::size_t nx, std::size_t nt) {
        GridSpec g = detail::grid_from(cfg, "qhj_grid", GridSpec{-12.0, 12.0, nx, 0.0, 0.5, nt});
        g.nx = nx;
        g.nt = nt;
        auto psi0 = gaussian_packet(g, 0.0, sigma, p0, sys);
        const auto ev = crank_nicolson_evolve(psi0, sys, g, 1);
        const auto S = phase_action(ev.psi, hbar);
        return quantum_hj_residual(S, sys).sup_norm;
    };
    const auto base_nx = cfg.get_count("qhj_grid.nx", 1024);
    const auto base_nt = cfg.get_count("qhj_grid.nt", 501);
    const double base = qhj_sup(base_nx, base_nt);
    const double fine = qhj_sup(2 * base_nx, 2 * base_nt - 1);
    report.verdicts.push_back(check_below("qhj_sup", "action-equation residual of the packet",
                                          base, cfg.get_double("tol.qhj", 5e-3)));
    report.verdicts.push_back(check_at_least("qhj_refinement_gain",
                                             "residual shrinks under refinement", base / fine,
                                             1.2));

    // packet width after unit time vs the dispersion formula
    {
        GridSpec g = detail::grid_from(cfg, "width_grid",
                                       GridSpec{-10.0, 12.0, 1101, 0.0, 1.0, 251});
        const double s0 = cfg.get_double("width_sigma", 0.5);
        auto psi0 = gaussian_packet(g, 0.0, s0, p0, sys);
        const auto ev = crank_nicolson_evolve(psi0, sys, g, 4);  // 1000 steps
        double sx = 0.0, sxx = 0.0;
        for (std::size_t i = 0; i < g.nx; ++i) {
            const double w = std::norm(ev.psi.psi.at(i, g.nt - 1)) * g.dx();
            sx += w * g.x(i);
            sxx += w * g.x(i) * g.x(i);
        }
        const double width = std::sqrt(sxx - sx * sx);
        const double tau = hbar * (g.t1 - g.t0) / (2.0 * sys.mass * s0 * s0);
        report.verdicts.push_back(check_abs("packet_width",
                                            "dispersion of the free packet width",
                                            width, s0 * std::sqrt(1.0 + tau * tau), 1e-3));
        const double n0 = ev.psi.norm(0);
        double drift = 0.0;
        for (std::size_t k = 0; k < g.nt; ++k)
            drift = std::max(drift, std::abs(ev.psi.norm(k) - n0));
        report.verdicts.push_back(check_below("norm_drift",
                                              "unitarity of the implicit propagator over 1000 steps",
                                              drift, 1e-10));
    }

    // local momentum vs action gradient on the smooth window
    {
        GridSpec g = detail::grid_from(cfg, "agreement_grid",
                                       GridSpec{-6.0, 8.0, 20001, 0.0, 0.2, 11});
        auto psi0 = gaussian_packet(g, 0.0, 1.0, p0, sys);
        const auto ev = crank_nicolson_evolve(psi0, sys, g, 20);
        const auto S = phase_action(ev.psi, hbar);
        const auto Sx = fd_partial(S, Axis::Space);
        const auto pf = momentum_field(ev.psi, hbar);
        double worst = 0.0;
        for (std::size_t k = 0; k < S.slices(); ++k) {
            const double center = p0 * g.t(k) / sys.mass;
            for (std::size_t i = 0; i < S.nx(); ++i) {
                if (std::abs(g.x(i) - center) > 3.0) continue;
                if (Sx.valid(i, k) && pf.valid(i, k))
                    worst = std::max(worst, std::abs(Sx.at(i, k) - pf.at(i, k)));
            }
        }
        report.verdicts.push_back(check_below("momentum_vs_action_gradient",
                                              "diagonal momentum equals the action gradient",
                                              worst, 1e-6));
    }

    // four-point semiclassical sweep (also driven by the sweep subcommand)
    const auto hbars = cfg.get_list("hbar_list", {1.0, 0.5, 0.25, 0.125});
    const auto rows = classical_limit_sweep(gaussian_limit_scenario(cfg), hbars);
    bool monotone = true, corr_monotone = true;
    Table sweep{"hbar_sweep", {"hbar", "discrepancy", "quantum_correction"}, {}};
    for (std::size_t j = 0; j < rows.size(); ++j) {
        sweep.rows.push_back({rows[j].hbar, rows[j].discrepancy, rows[j].quantum_correction});
        if (j > 0) {
            monotone = monotone && rows[j].discrepancy < rows[j - 1].discrepancy;
            corr_monotone =
                corr_monotone && rows[j].quantum_correction < rows[j - 1].quantum_correction;
        }
    }
    report.verdicts.push_back(check_at_least("classical_limit_monotone",
                                             "discrepancy vs the classical momentum field "
                                             "decreases with hbar",
                                             monotone ? 1.0 : 0.0, 1.0));
    report.verdicts.push_back(check_at_least("quantum_correction_monotone",
                                             "explicit hbar correction term decreases",
                                             corr_monotone ? 1.0 : 0.0, 1.0));
    report.tables.push_back(sweep);
    write_table_csv(out / "hbar_sweep.csv", sweep);
    return report;
}

// ---------------------------------------------------------------------------
// tower: multistage strategy identities
// ---------------------------------------------------------------------------

inline RunReport run_tower(const ScenarioConfig& cfg, const std::filesystem::path& out) {
    using namespace octk::quantum;

    RunReport report;
    report.scenario = "tower";
    report.family = "tower";
    report.config_echo = cfg.values;

    const double hbar = cfg.get_double("hbar", 1.0);
    const GridSpec g =
        detail::grid_from(cfg, "grid", GridSpec{0.0, 1.0, 801, 0.0, 0.1, 5});

    Field<cplx> T0 = Field<cplx>::over_xt(g);
    T0.fill_with([](double x, double t) {
        return cplx{0.3 + 0.05 * std::sin(2.0 * std::numbers::pi * x) * std::cos(t),
                    0.1 + 0.02 * x};
    });
    Field<cplx> psi = T0;
    const cplx iu{0.0, 1.0};
    for (auto& v : psi.values) v = std::exp(iu / hbar * std::exp(iu / hbar * v));

    const auto tower = phase_tower(psi, hbar, 3);
    const auto idrep = multistage_identity_check(tower);

    report.verdicts.push_back(check_below("first_identity_exact",
                                          "single-stage strategy relation, eigenvalue route",
                                          idrep.first_exact.sup_norm, 1e-12));
    report.verdicts.push_back(check_below("second_identity_chain",
                                          "two-stage relation with the derived extra factor",
                                          idrep.second_chain.sup_norm, 1e-12));
    report.verdicts.push_back(check_abs("second_identity_printed_deviation",
                                        "printed two-stage form deviates by |1 + i hbar|",
                                        idrep.second_paper.sup_norm,
                                        std::sqrt(1.0 + hbar * hbar), 1e-9));
    report.verdicts.push_back(check_below("first_identity_fd",
                                          "independent differencing route stays at "
                                          "discretization level",
                                          idrep.first_fd.sup_norm, 1e-5));
    report.verdicts.push_back(check_at_least("tower_coverage",
                                             "usable depth-3 window is at least half the grid",
                                             idrep.coverage, 0.5));

    double trec = 0.0;
    for (std::size_t k = 0; k < g.nt; ++k)
        for (std::size_t i = 0; i < g.nx; ++i)
            if (tower.T().valid(i, k))
                trec = std::max(trec, std::abs(tower.T().at(i, k) - T0.at(i, k)));
    report.verdicts.push_back(check_below("level_recovery",
                                          "second level reproduces the seeded field", trec,
                                          1e-8));

    const auto rec = tower_reconstruct(tower);
    double rrec = 0.0;
    for (std::size_t idx = 0; idx < psi.values.size(); ++idx) {
        const std::size_t i = idx % g.nx, k = idx / g.nx;
        if (tower.third_level().valid(i, k))
            rrec = std::max(rrec, std::abs(rec.values[idx] - psi.values[idx]) /
                                      std::abs(psi.values[idx]));
    }
    report.verdicts.push_back(check_below("roundtrip_reconstruction",
                                          "depth-3 nested exponentials rebuild the state",
                                          rrec, 1e-8));

    // evolved state: the identities hold on dynamical data too
    {
        GridSpec ge = detail::grid_from(cfg, "evolved_grid",
                                        GridSpec{-9.0, 9.0, 1024, 0.0, 0.5, 26});
        QuantumSystem sys{1.0, [](double) { return 0.0; }, hbar, "free"};
        auto psi0 = gaussian_packet(ge, 0.0, 1.0, 1.0, sys);
        const auto ev = crank_nicolson_evolve(psi0, sys, ge, 20);
        const auto et = phase_tower(ev.psi, hbar, 3);
        const auto erep = multistage_identity_check(et);
        report.verdicts.push_back(check_below("first_identity_exact_evolved",
                                              "single-stage relation on an evolved state",
                                              erep.first_exact.sup_norm, 1e-12));
    }

    write_field_csv(out / "level_S.csv", tower.S(), cfg.get_count("stride.x", 16), 1);
    write_field_csv(out / "level_T.csv", tower.T(), cfg.get_count("stride.x", 16), 1);
    write_field_csv(out / "level_third.csv", tower.third_level(),
                    cfg.get_count("stride.x", 16), 1);
    return report;
}

// ---------------------------------------------------------------------------
// custom-control / custom-quantum: inline polynomial problems
// ---------------------------------------------------------------------------

inline RunReport run_custom_control(const ScenarioConfig& cfg,
                                    const std::filesystem::path& out) {
    using namespace octk::control;
    using namespace octk::bellman;

    RunReport report;
    report.scenario = "custom-control";
    report.family = "custom-control";
    report.config_echo = cfg.values;

    const auto problem = inline_control_problem(cfg);
    const double partial_probe = problem.probe_partials();
    report.verdicts.push_back(check_below("partials_consistency",
                                          "auto-generated partials vs finite differences",
                                          partial_probe, 1e-5));

    auto shooting = default_shooting_config(problem);
    shooting.dt = cfg.get_double("shooting.dt", 1e-3);
    shooting.tolerance = cfg.get_double("shooting.tol", 1e-8);
    const auto open = solve_open_loop(problem, shooting);
    report.verdicts.push_back(check_below("transversality", "terminal costate condition",
                                          open.terminal_costate, shooting.tolerance));

    GridSpec dft{problem.x0 - 3.0, problem.x0 + 3.0, 401, problem.t0, problem.t1, 2001};
    const GridSpec grid = detail::grid_from(cfg, "grid", dft);
    const auto sol = solve_hjb(problem, grid);
    const auto rollout =
        closed_loop_trajectory(problem, sol, problem.x0, cfg.get_double("rollout.dt", 1e-3));
    const auto diff = compare_open_closed(open.trajectory, rollout);
    report.verdicts.push_back(check_below("open_closed_sup_dx",
                                          "equivalence of open-loop and feedback solutions",
                                          diff.sup_dx, cfg.get_double("tol.equivalence", 5e-3)));

    const auto cons = hjb_consistency(problem, sol);
    report.verdicts.push_back(check_below("consistency_sup",
                                          "costate feedback consistency condition",
                                          cons.sup_norm, cfg.get_double("tol.consistency", 5e-2)));
    const auto inho = inhomogeneity_report(problem, sol);
    report.verdicts.push_back(check_below("inhomogeneity_std",
                                          "x-independence of the value-equation defect",
                                          detail::max_per_time_std(inho),
                                          cfg.get_double("tol.inhomogeneity_std", 5e-2)));

    write_trajectory_csv(out / "trajectory.csv", open.trajectory);
    write_trajectory_csv(out / "trajectory_rollout.csv", rollout);
    write_field_csv(out / "field_J.csv", sol.J, cfg.get_count("stride.x", 8),
                    cfg.get_count("stride.t", 100));
    return report;
}

inline RunReport run_custom_quantum(const ScenarioConfig& cfg,
                                    const std::filesystem::path& out) {
    using namespace octk::quantum;

    RunReport report;
    report.scenario = "custom-quantum";
    report.family = "custom-quantum";
    report.config_echo = cfg.values;

    Fn1 dU;
    Fn1 U = inline_potential(cfg, &dU);
    QuantumSystem sys{cfg.get_double("m", 1.0), U, cfg.get_double("hbar", 1.0), "custom"};

    const GridSpec g =
        detail::grid_from(cfg, "grid", GridSpec{-10.0, 10.0, 1024, 0.0, 0.5, 501});
    auto psi0 = gaussian_packet(g, cfg.get_double("x_c", 0.0), cfg.get_double("sigma", 1.0),
                                cfg.get_double("p0", 0.0), sys);
    const auto ev = crank_nicolson_evolve(psi0, sys, g, cfg.get_count("stride_steps", 1));

    const double n0 = ev.psi.norm(0);
    double drift = 0.0;
    for (std::size_t k = 0; k < g.nt; ++k)
        drift = std::max(drift, std::abs(ev.psi.norm(k) - n0));
    report.verdicts.push_back(check_below("norm_drift",
                                          "unitarity of the implicit propagator", drift, 1e-10));
    report.verdicts.push_back(check_at_least("boundary_clearance",
                                             "support stayed away from the grid ends",
                                             ev.boundary_warning ? 0.0 : 1.0, 1.0));

    const auto S = phase_action(ev.psi, sys.hbar);
    const cplx iu{0.0, 1.0};
    double rec = 0.0;
    for (std::size_t k = 0; k < S.slices(); ++k)
        for (std::size_t i = 0; i < S.nx(); ++i)
            if (S.valid(i, k))
                rec = std::max(rec, std::abs(std::exp(iu * S.at(i, k) / sys.hbar) -
                                             ev.psi.psi.at(i, k)) /
                                        std::abs(ev.psi.psi.at(i, k)));
    report.verdicts.push_back(check_below("action_reconstruction",
                                          "exponential of the action rebuilds the state", rec,
                                          1e-10));

    const auto rep = quantum_hj_residual(S, sys);
    report.verdicts.push_back(check_below("qhj_sup", "action-equation residual",
                                          rep.sup_norm, cfg.get_double("tol.qhj", 5e-2)));

    write_field_csv(out / "field_S.csv", S, cfg.get_count("stride.x", 16),
                    cfg.get_count("stride.t", 50));
    return report;
}

// ---------------------------------------------------------------------------
// catalog
// ---------------------------------------------------------------------------

struct CatalogEntry {
    std::string id;
    std::string tag;
    std::string description;
    std::function<RunReport(const ScenarioConfig&, const std::filesystem::path&)> run;
    bool hbar_axis = false;
    bool grid_axis = false;
};

inline const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = {
        {"lq", "pontryagin/bellman",
         "linear-quadratic control: costate shooting vs backward value grid", run_lq, false,
         true},
        {"free-particle", "hamilton-jacobi/canonical",
         "constant-line reconstruction, constraint strategies, action residuals",
         run_free_particle, false, false},
        {"harmonic", "stationary-states",
         "oscillator spectrum, stationary action, one-period evolution", run_harmonic, false,
         false},
        {"plane-wave", "pure-momentum",
         "momentum eigenstate: constant momentum field, linear action", run_plane_wave, false,
         false},
        {"gaussian-limit", "semiclassical-limit",
         "evolved packet action residuals and the hbar sweep", run_gaussian_limit, true,
         false},
        {"tower", "iterated-phase",
         "nested phase levels and multistage strategy identities", run_tower, false, false},
        {"custom-control", "inline-problem",
         "user polynomial control problem: shooting, value grid, equivalence",
         run_custom_control, false, false},
        {"custom-quantum", "inline-problem",
         "user polynomial potential: packet evolution and action residual",
         run_custom_quantum, false, false},
    };
    return entries;
}

inline const CatalogEntry* find_scenario(const std::string& id) {
    for (const auto& e : catalog())
        if (e.id == id) return &e;
    return nullptr;
}

}  // namespace octk::cli
