#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "octk/control/bellman.hpp"
#include "octk/control/problems.hpp"

using namespace octk;
using namespace octk::control;
using namespace octk::bellman;
using Catch::Matchers::WithinAbs;

namespace {

GridSpec lq_grid(std::size_t nx, std::size_t nt) { return GridSpec{-2.0, 2.0, nx, 0.0, 1.0, nt}; }

std::size_t index_of_x1(const GridSpec& g) { return (g.nx - 1) * 3 / 4; }  // x = 1

}  // namespace

TEST_CASE("solve_hjb: LQ value function against the closed form") {
    const auto lq = make_lq_problem();
    const auto g = lq_grid(201, 1001);
    const auto sol = solve_hjb(lq, g);

    REQUIRE(sol.cfl_ratio <= 0.5);
    const std::size_t i1 = index_of_x1(g);
    REQUIRE(g.x(i1) == 1.0);
    REQUIRE_THAT(sol.J.at(i1, 0), WithinAbs(-std::tanh(1.0) / 2.0, 4e-3));

    // terminal condition is stored bitwise
    for (std::size_t i = 0; i < g.nx; ++i) REQUIRE(sol.J.at(i, g.nt - 1) == 0.0);
}

TEST_CASE("solve_hjb: value error drops with order >= 0.9 under refinement") {
    const auto lq = make_lq_problem();
    auto err = [&](std::size_t nx, std::size_t nt) {
        const auto g = lq_grid(nx, nt);
        const auto sol = solve_hjb(lq, g);
        return std::abs(sol.J.at(index_of_x1(g), 0) + std::tanh(1.0) / 2.0);
    };
    const double coarse = err(101, 501);
    const double fine = err(201, 1001);
    REQUIRE(std::log2(coarse / fine) >= 0.9);
}

TEST_CASE("solve_hjb: zero payoff propagates the terminal condition unchanged") {
    auto p = make_lq_problem();
    p.F = [](double, double, double) { return 0.0; };
    p.F_x = [](double, double, double) { return 0.0; };
    p.F_u = [](double, double, double) { return 0.0; };
    const auto g = lq_grid(51, 501);
    const auto sol = solve_hjb(p, g);
    for (double v : sol.J.values) REQUIRE(v == 0.0);
    // transversality: zero terminal value implies a zero terminal costate
    for (std::size_t i = 0; i < g.nx; ++i) REQUIRE(sol.lam.at(i, g.nt - 1) == 0.0);
}

TEST_CASE("solve_hjb: frozen state reduces to a time quadrature per x") {
    const auto p = make_frozen_state_problem();  // max_u F = x t at u* = 0.3
    GridSpec g{-2.0, 2.0, 51, 0.0, 1.0, 1001};
    const auto sol = solve_hjb(p, g);
    for (std::size_t i = 0; i < g.nx; i += 10) {
        const double x = g.x(i);
        for (std::size_t k = 0; k < g.nt; k += 250) {
            const double t = g.t(k);
            const double oracle = 0.5 * x * (1.0 - t * t);  // int_t^1 x s ds
            REQUIRE_THAT(sol.J.at(i, k), WithinAbs(oracle, 2e-3));
        }
    }
}

TEST_CASE("solve_hjb: CFL violation names the required time resolution") {
    const auto lq = make_lq_problem();
    GridSpec g{-2.0, 2.0, 401, 0.0, 1.0, 101};  // dt*fmax/dx = 5
    try {
        solve_hjb(lq, g);
        FAIL("expected ConfigurationError");
    } catch (const ConfigurationError& e) {
        REQUIRE(std::string(e.what()).find("need nt >=") != std::string::npos);
    }
}

TEST_CASE("costate_field: LQ feedback slope and flat-value case") {
    const auto lq = make_lq_problem();
    const auto g = lq_grid(201, 1001);
    const auto sol = solve_hjb(lq, g);
    const auto lam = costate_field(sol);
    REQUIRE_THAT(lam.at(index_of_x1(g), 0), WithinAbs(-std::tanh(1.0), 4e-3));
}

TEST_CASE("reduced_hamiltonian_field: closed-form spot checks and structure") {
    const auto lq = make_lq_problem();
    const auto g = lq_grid(201, 1001);
    const auto sol = solve_hjb(lq, g);
    const auto hs = reduced_hamiltonian_field(lq, sol);
    const double th = std::tanh(1.0);
    REQUIRE_THAT(hs.at(index_of_x1(g), 0), WithinAbs(-0.5 + 0.5 * th * th, 5e-3));

    // f == 0: H* collapses to the payoff at the control maximizing F alone
    const auto p = make_frozen_state_problem();
    GridSpec gf{-1.0, 1.0, 21, 0.0, 1.0, 101};
    const auto fsol = solve_hjb(p, gf);
    const auto fh = reduced_hamiltonian_field(p, fsol);
    for (std::size_t i = 0; i < gf.nx; i += 5)
        for (std::size_t k = 0; k < gf.nt; k += 25)
            REQUIRE_THAT(fh.at(i, k), WithinAbs(gf.x(i) * gf.t(k), 1e-6));
}

TEST_CASE("hjb_consistency: LQ residual small, shrinking, and corruption-sensitive") {
    const auto lq = make_lq_problem();
    const auto coarse_sol = solve_hjb(lq, lq_grid(101, 501));
    const auto fine_sol = solve_hjb(lq, lq_grid(201, 1001));
    const double coarse = hjb_consistency(lq, coarse_sol).sup_norm;
    const double fine = hjb_consistency(lq, fine_sol).sup_norm;
    REQUIRE(fine <= 1e-2);
    REQUIRE(fine < coarse);
    REQUIRE(std::log2(coarse / fine) >= 0.9);

    // corrupting the costate by 0.1x must be visible: the hand-computed
    // residual is x(0.01 - 0.2 tanh(1-t))
    HjbSolution bad = fine_sol;
    for (std::size_t k = 0; k < bad.grid.nt; ++k)
        for (std::size_t i = 0; i < bad.grid.nx; ++i) {
            bad.lam.at(i, k) += 0.1 * bad.grid.x(i);
            bad.u_star.at(i, k) =
                eliminate_control(lq, bad.grid.x(i), bad.lam.at(i, k), bad.grid.t(k)).u;
        }
    REQUIRE(hjb_consistency(lq, bad).sup_norm >= 0.09);
}

TEST_CASE("hjb_consistency: zero problem is exactly consistent") {
    auto p = make_lq_problem();
    p.F = [](double, double, double) { return 0.0; };
    p.F_x = [](double, double, double) { return 0.0; };
    p.F_u = [](double, double, double) { return 0.0; };
    const auto sol = solve_hjb(p, lq_grid(51, 501));
    REQUIRE_THAT(hjb_consistency(p, sol).sup_norm, WithinAbs(0.0, 1e-13));
}

TEST_CASE("inhomogeneity_report: LQ defect is small and x-independent") {
    const auto lq = make_lq_problem();
    const auto sol = solve_hjb(lq, lq_grid(201, 1001));
    const auto rep = inhomogeneity_report(lq, sol);
    REQUIRE(rep.sup_norm <= 2.5e-2);
    for (double s : rep.per_time_std) REQUIRE(s <= 1e-2);
}

TEST_CASE("inhomogeneity_report: additive time shift moves only the g(t) estimate") {
    const auto lq = make_lq_problem();
    const auto sol = solve_hjb(lq, lq_grid(101, 501));
    const auto base = inhomogeneity_report(lq, sol);

    HjbSolution shifted = sol;
    for (std::size_t k = 0; k < shifted.grid.nt; ++k) {
        const double c = shifted.grid.t(k) * shifted.grid.t(k);
        for (std::size_t i = 0; i < shifted.grid.nx; ++i) shifted.J.at(i, k) += c;
    }
    const auto rep = inhomogeneity_report(lq, shifted);
    for (std::size_t k = 1; k + 1 < shifted.grid.nt; k += 50) {
        const double expected = 2.0 * shifted.grid.t(k);
        REQUIRE_THAT(rep.per_time_mean[k].real() - base.per_time_mean[k].real(),
                     WithinAbs(expected, 1e-9));
        REQUIRE_THAT(rep.per_time_std[k], WithinAbs(base.per_time_std[k], 1e-9));
    }
}

TEST_CASE("closed_loop_trajectory: LQ rollout, symmetry, and frozen state") {
    const auto lq = make_lq_problem();
    const auto sol = solve_hjb(lq, lq_grid(201, 1001));
    const auto traj = closed_loop_trajectory(lq, sol, 1.0, 1e-3);
    REQUIRE_THAT(traj.states.back(), WithinAbs(1.0 / std::cosh(1.0), 2e-3));

    // odd symmetry of the feedback pins the origin
    const auto center = closed_loop_trajectory(lq, sol, 0.0, 1e-3);
    for (std::size_t k = 0; k < center.size(); k += 100) {
        REQUIRE_THAT(center.states[k], WithinAbs(0.0, 1e-4));
        REQUIRE_THAT(center.controls[k], WithinAbs(0.0, 1e-4));
    }

    const auto p = make_frozen_state_problem();
    GridSpec gf{-1.0, 1.0, 21, 0.0, 1.0, 101};
    const auto fsol = solve_hjb(p, gf);
    const auto frozen = closed_loop_trajectory(p, fsol, 0.25, 1e-2);
    for (double x : frozen.states) REQUIRE(x == 0.25);
}

TEST_CASE("closed_loop_trajectory: leaving the grid raises a domain error") {
    ControlProblem p;
    p.F = [](double, double, double) { return 0.0; };
    p.f = [](double, double, double) { return 3.0; };
    p.F_x = [](double, double, double) { return 0.0; };
    p.F_u = [](double, double, double) { return 0.0; };
    p.f_x = [](double, double, double) { return 0.0; };
    p.f_u = [](double, double, double) { return 0.0; };
    p.t0 = 0.0;
    p.t1 = 1.0;
    p.x0 = 0.9;
    p.u_lo = -1.0;
    p.u_hi = 1.0;
    GridSpec g{0.0, 1.0, 101, 0.0, 1.0, 1001};
    const auto sol = solve_hjb(p, g);
    REQUIRE_THROWS_AS(closed_loop_trajectory(p, sol, 0.9, 1e-3), DomainError);
}

TEST_CASE("compare_open_closed: equivalence of the two solution routes") {
    const auto lq = make_lq_problem();
    auto cfg = default_shooting_config(lq);
    cfg.dt = 1e-3;
    const auto open = solve_open_loop(lq, cfg);

    const auto coarse_roll = closed_loop_trajectory(lq, solve_hjb(lq, lq_grid(101, 501)), 1.0, 1e-3);
    const auto fine_roll = closed_loop_trajectory(lq, solve_hjb(lq, lq_grid(201, 1001)), 1.0, 1e-3);
    const auto d_coarse = compare_open_closed(open.trajectory, coarse_roll);
    const auto d_fine = compare_open_closed(open.trajectory, fine_roll);
    REQUIRE(d_fine.sup_dx <= 2e-3);
    REQUIRE(d_fine.sup_dx < d_coarse.sup_dx);

    // identical trajectories compare to zero
    const auto self = compare_open_closed(open.trajectory, open.trajectory);
    REQUIRE(self.sup_dx == 0.0);
    REQUIRE(self.sup_dlam == 0.0);
    REQUIRE(self.sup_du.has_value());
    REQUIRE(*self.sup_du == 0.0);

    // the suboptimal rule u = 2 lambda freezes the LQ state, so it departs
    auto rule = [](double, double lam, double) { return 2.0 * lam; };
    const auto flow = arbitrary_closed_loop_flow(lq, rule, lq.x0, open.lambda0, 1e-3);
    REQUIRE(compare_open_closed(open.trajectory, flow).sup_dx >= 0.05);
}

TEST_CASE("compare_open_closed: disjoint time ranges are rejected") {
    Trajectory a, b;
    for (int k = 0; k <= 5; ++k) {
        a.times.push_back(0.1 * k);
        a.states.push_back(0.0);
        a.costates.push_back(0.0);
        b.times.push_back(1.0 + 0.1 * k);
        b.states.push_back(0.0);
        b.costates.push_back(0.0);
    }
    REQUIRE_THROWS_AS(compare_open_closed(a, b), DomainError);
}
