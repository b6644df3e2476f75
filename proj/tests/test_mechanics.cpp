#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "octk/mechanics.hpp"

using namespace octk;
using namespace octk::mechanics;
using Catch::Matchers::WithinAbs;

namespace {

HamiltonianSystem free_system(double m = 1.0) {
    return make_separable_system(m, [](double) { return 0.0; }, [](double) { return 0.0; },
                                 "free");
}

HamiltonianSystem sho_system() {
    return make_separable_system(1.0, [](double x) { return 0.5 * x * x; },
                                 [](double x) { return x; }, "sho");
}

}  // namespace

TEST_CASE("hamilton_flow: free particle follows the worked example") {
    const auto traj = hamilton_flow(free_system(), 2.0, -2.0, 0.0, 0.01, 90);
    for (std::size_t k = 0; k < traj.size(); k += 9) {
        REQUIRE_THAT(traj.states[k], WithinAbs(2.0 - 2.0 * traj.times[k], 1e-13));
        REQUIRE_THAT(traj.costates[k], WithinAbs(-2.0, 1e-13));
    }
}

TEST_CASE("hamilton_flow: zero momentum means a stationary point") {
    const auto traj = hamilton_flow(free_system(), 1.3, 0.0, 0.0, 0.05, 40);
    for (double x : traj.states) REQUIRE(x == 1.3);
    for (double p : traj.costates) REQUIRE(p == 0.0);
}

TEST_CASE("hamilton_flow: harmonic oscillator returns after one period") {
    const std::size_t steps = 6283;
    const double dt = 2.0 * std::numbers::pi / static_cast<double>(steps);  // ~1e-3
    const auto traj = hamilton_flow(sho_system(), 1.0, 0.0, 0.0, dt, steps);
    REQUIRE_THAT(traj.states.back(), WithinAbs(1.0, 1e-4));
    REQUIRE_THAT(traj.costates.back(), WithinAbs(0.0, 1e-4));
}

TEST_CASE("hamilton_flow: energy stays within the symplectic bound") {
    const auto sho = sho_system();
    const auto traj = hamilton_flow(sho, 1.0, 0.0, 0.0, 0.01, 10000);
    double worst = 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const double H = 0.5 * (traj.states[k] * traj.states[k] +
                                traj.costates[k] * traj.costates[k]);
        worst = std::max(worst, std::abs(H - 0.5));
    }
    REQUIRE(worst <= 1e-4);
}

TEST_CASE("hamilton_flow: non-separable systems integrate with RK4") {
    HamiltonianSystem sys;
    sys.H = [](double x, double p, double) { return x * p; };
    sys.dH_dx = [](double, double p, double) { return p; };
    sys.dH_dp = [](double x, double, double) { return x; };
    const auto traj = hamilton_flow(sys, 1.0, 1.0, 0.0, 1e-3, 1000);
    REQUIRE_THAT(traj.states.back(), WithinAbs(std::exp(1.0), 1e-8));
    REQUIRE_THAT(traj.costates.back(), WithinAbs(std::exp(-1.0), 1e-8));
}

TEST_CASE("solve_phase_constraint: explicit, quadratic, and worked-example lines") {
    GridSpec g1{-1.0, 1.0, 41, 0.0, 1.0, 21};
    const auto p1 = solve_phase_constraint(
        [](double x, double p, double t) { return p - x * t; }, g1,
        [](double) { return 0.0; });
    REQUIRE(p1.coverage() == 1.0);
    for (std::size_t k = 0; k < g1.nt; k += 5)
        for (std::size_t i = 0; i < g1.nx; i += 8)
            REQUIRE_THAT(p1.at(i, k), WithinAbs(g1.x(i) * g1.t(k), 1e-12));

    GridSpec g2{0.1, 4.0, 79, 0.0, 1.0, 5};
    const auto p2 = solve_phase_constraint(
        [](double x, double p, double) { return p * p - x; }, g2,
        [](double) { return 1.0; });  // positive seed picks the + branch
    for (std::size_t i = 0; i < g2.nx; i += 6)
        REQUIRE_THAT(p2.at(i, 0), WithinAbs(std::sqrt(g2.x(i)), 1e-10));

    GridSpec g3{-1.0, 1.0, 41, 0.0, 0.5, 26};
    const auto p3 = solve_phase_constraint(
        [](double x, double p, double t) { return p + x / (1.0 - t); }, g3,
        [](double) { return 0.0; });
    for (std::size_t k = 0; k < g3.nt; k += 5)
        for (std::size_t i = 0; i < g3.nx; i += 8)
            REQUIRE_THAT(p3.at(i, k), WithinAbs(-g3.x(i) / (1.0 - g3.t(k)), 1e-10));
}

TEST_CASE("solve_phase_constraint: constraint fidelity at every unmasked node") {
    GridSpec g{0.1, 4.0, 61, 0.0, 1.0, 11};
    auto Phi = [](double x, double p, double t) { return p * p * p + p - x * (1.0 + t); };
    const auto p = solve_phase_constraint(Phi, g, [](double) { return 0.5; });
    for (std::size_t k = 0; k < g.nt; ++k)
        for (std::size_t i = 0; i < g.nx; ++i)
            if (p.valid(i, k)) REQUIRE(std::abs(Phi(g.x(i), p.at(i, k), g.t(k))) <= 1e-10);
}

TEST_CASE("solve_phase_constraint: rootless regions mask, hopeless seeds throw") {
    GridSpec g{0.0, 2.0, 41, 0.0, 1.0, 3};
    // p^2 = 1 - x has no real solution past x = 1
    const auto p = solve_phase_constraint(
        [](double x, double q, double) { return q * q - (1.0 - x); }, g,
        [](double) { return 0.9; });
    REQUIRE(p.coverage() < 1.0);
    REQUIRE(p.coverage() > 0.3);
    for (std::size_t i = 0; i < g.nx; ++i) {
        if (g.x(i) < 0.95 && p.valid(i, 0))
            REQUIRE_THAT(p.at(i, 0), WithinAbs(std::sqrt(1.0 - g.x(i)), 1e-8));
        if (g.x(i) > 1.05) REQUIRE_FALSE(p.valid(i, 0));
    }

    REQUIRE_THROWS_AS(solve_phase_constraint(
                          [](double, double q, double) { return 1.0 + q * q; }, g,
                          [](double) { return 0.0; }),
                      SeedError);
}

TEST_CASE("momentum_from_action: worked example, pure momentum, flat action") {
    GridSpec g{-1.0, 1.0, 401, 0.0, 0.5, 11};  // dx = 0.005
    auto S = ScalarField::over_xt(g);
    S.fill_with([](double x, double t) { return -x * x / (2.0 * (1.0 - t)); });
    const auto p = momentum_from_action(S);
    for (std::size_t k = 0; k < g.nt; k += 2)
        for (std::size_t i = 0; i < g.nx; i += 50)
            REQUIRE_THAT(p.at(i, k), WithinAbs(-g.x(i) / (1.0 - g.t(k)), 1e-8));

    auto lin = ScalarField::over_xt(g);
    lin.fill_with([](double x, double) { return 0.7 * x + 2.0; });
    const auto pl = momentum_from_action(lin);
    for (double v : pl.values) REQUIRE_THAT(v, WithinAbs(0.7, 1e-12));

    auto flat = ScalarField::over_xt(g);
    flat.fill_with([](double, double t) { return std::sin(t); });
    const auto pf = momentum_from_action(flat);
    for (double v : pf.values) REQUIRE_THAT(v, WithinAbs(0.0, 1e-12));
}

TEST_CASE("hj_residual: free-particle action solves the free equation") {
    GridSpec g{-1.0, 1.0, 101, 0.0, 0.5, 4001};
    auto S = ScalarField::over_xt(g);
    S.fill_with([](double x, double t) { return -x * x / (2.0 * (1.0 - t)); });
    const auto rep = hj_residual(S, free_system());
    for (std::size_t k = 0; k < g.nt; k += 400) {
        REQUIRE(std::abs(rep.per_time_mean[k]) <= 1e-6);
        REQUIRE(rep.per_time_std[k] <= 1e-6);
    }
}

TEST_CASE("hj_residual: separated stationary action for a linear potential") {
    // W(x) = int_0^x sqrt(2 (E - s)) ds with E = 2, via Simpson quadrature
    const double E = 2.0;
    auto momentum = [E](double s) { return std::sqrt(2.0 * (E - s)); };
    auto W_of = [&](double x) {
        const int n = 400;  // even
        const double h = x / n;
        double acc = momentum(0.0) + momentum(x);
        for (int j = 1; j < n; ++j) acc += (j % 2 ? 4.0 : 2.0) * momentum(j * h);
        return acc * h / 3.0;
    };
    GridSpec g{-1.0, 1.0, 201, 0.0, 1.0, 101};
    auto S = ScalarField::over_xt(g);
    S.fill_with([&](double x, double t) { return W_of(x) - E * t; });
    auto linear = make_separable_system(1.0, [](double x) { return x; },
                                        [](double) { return 1.0; }, "linear-potential");
    const auto rep = hj_residual(S, linear);
    for (std::size_t k = 0; k < g.nt; k += 10) {
        REQUIRE(std::abs(rep.per_time_mean[k]) <= 5e-5);
        REQUIRE(rep.per_time_std[k] <= 5e-5);
    }

    auto zero = ScalarField::over_xt(g, 0.0);
    const auto zrep = hj_residual(zero, free_system());
    REQUIRE(zrep.sup_norm == 0.0);
}

TEST_CASE("free_particle_generator: worked-example values and singularity") {
    const auto gen = free_particle_generator(1.0, 1.0);
    REQUIRE_THAT(gen.eval(2.0, 1.0, 0.0), WithinAbs(-2.0, 1e-15));
    REQUIRE_THAT(gen.eval_dx(2.0, 1.0, 0.0), WithinAbs(-2.0, 1e-15));
    REQUIRE_THROWS_AS(gen.eval(2.0, 1.0, 1.0), SingularityError);
}

TEST_CASE("generators: analytic partials match finite differences") {
    for (const auto& gen :
         {free_particle_generator(1.0, 1.0), harmonic_generator(1.0, 1.0)}) {
        for (double x : {-1.5, 0.3, 2.0}) {
            for (double t : {0.0, 0.2, 0.45}) {
                const double P = 1.0;
                const double h = 1e-6;
                const double fx =
                    (gen.eval(x + h, P, t) - gen.eval(x - h, P, t)) / (2.0 * h);
                const double fP =
                    (gen.eval(x, P + h, t) - gen.eval(x, P - h, t)) / (2.0 * h);
                REQUIRE_THAT(gen.eval_dx(x, P, t),
                             WithinAbs(fx, 1e-6 * (1.0 + std::abs(fx))));
                REQUIRE_THAT(gen.eval_dP(x, P, t),
                             WithinAbs(fP, 1e-6 * (1.0 + std::abs(fP))));
            }
        }
    }
}

TEST_CASE("harmonic generator: solves its Hamilton-Jacobi equation on the grid") {
    const auto gen = harmonic_generator(1.0, 1.0);
    GridSpec g{-1.0, 1.0, 101, 0.0, 0.5, 2001};
    auto S = ScalarField::over_xt(g);
    S.fill_with([&](double x, double t) { return gen.S(x, 1.0, t); });
    const auto rep = hj_residual(S, sho_system());
    REQUIRE(rep.sup_norm <= 1e-5);
}

TEST_CASE("reconstruct_from_constant_line: free-particle worked example") {
    const auto gen = free_particle_generator(1.0, 1.0);
    std::vector<double> times;
    for (int k = 0; k <= 90; ++k) times.push_back(0.01 * k);
    const auto traj = reconstruct_from_constant_line(gen, 1.0, 2.0, times);

    for (std::size_t k = 0; k < traj.size(); k += 10) {
        REQUIRE_THAT(traj.states[k], WithinAbs(2.0 * (1.0 - traj.times[k]), 1e-10));
        REQUIRE_THAT(traj.costates[k], WithinAbs(-2.0, 1e-10));
    }
    // x0 = -P0 p0 with p0 = -sqrt(2 Q0)
    REQUIRE_THAT(traj.states.front(), WithinAbs(2.0, 1e-10));

    // two-observer equivalence: same motion as the Hamiltonian flow
    const auto flow = hamilton_flow(free_system(), 2.0, -2.0, 0.0, 0.01, 90);
    double dsup = 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        dsup = std::max(dsup, std::abs(traj.states[k] - flow.states[k]));
        dsup = std::max(dsup, std::abs(traj.costates[k] - flow.costates[k]));
    }
    REQUIRE(dsup <= 1e-8);
}

TEST_CASE("reconstruct_from_constant_line: harmonic catalog entry matches its flow") {
    const auto gen = harmonic_generator(1.0, 1.0);
    std::vector<double> times;
    for (int k = 0; k <= 90; ++k) times.push_back(0.01 * k);
    const auto traj = reconstruct_from_constant_line(gen, 1.0, 2.0, times);
    // closed form x = sqrt(2 Q0) cos(P0 - t), p = sqrt(2 Q0) sin(P0 - t)
    for (std::size_t k = 0; k < traj.size(); k += 9) {
        REQUIRE_THAT(traj.states[k], WithinAbs(2.0 * std::cos(1.0 - traj.times[k]), 1e-10));
        REQUIRE_THAT(traj.costates[k], WithinAbs(2.0 * std::sin(1.0 - traj.times[k]), 1e-10));
    }
    const auto flow = hamilton_flow(sho_system(), 2.0 * std::cos(1.0), 2.0 * std::sin(1.0),
                                    0.0, 0.0025, 360);
    double dsup = 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k)
        dsup = std::max(dsup, std::abs(traj.states[k] - flow.states[4 * k]));
    REQUIRE(dsup <= 2e-6);
}

TEST_CASE("reconstruct_from_constant_line: failure carries the time stamp") {
    const auto gen = free_particle_generator(1.0, 1.0);
    try {
        reconstruct_from_constant_line(gen, 1.0, -2.0, {0.1});  // dS/dP >= 0 never hits -2
        FAIL("expected ReconstructionError");
    } catch (const ReconstructionError& e) {
        REQUIRE_THAT(e.time, WithinAbs(0.1, 1e-12));
    }
}

TEST_CASE("closed_to_open_momentum: the worked-example cancellation") {
    // sampled field route
    GridSpec g{-3.0, 3.0, 241, 0.0, 0.5, 501};
    auto p_field = ScalarField::over_xt(g);
    p_field.fill_with([](double x, double t) { return -x / (1.0 - t); });
    Trajectory traj;
    for (int k = 0; k <= 50; ++k) {
        const double t = 0.01 * k;
        traj.times.push_back(t);
        traj.states.push_back(2.0 * (1.0 - t));
        traj.costates.push_back(-2.0);
    }
    const auto open = closed_to_open_momentum(p_field, traj);
    for (double v : open.values) REQUIRE_THAT(v, WithinAbs(-2.0, 1e-5));

    // analytic rule route is exact
    const auto gen = free_particle_generator(1.0, 1.0);
    const auto open_exact = closed_to_open_momentum(p_line_strategy(gen, 1.0), traj);
    for (double v : open_exact.values) REQUIRE_THAT(v, WithinAbs(-2.0, 1e-12));

    auto flat = ScalarField::over_xt(g, 3.0);
    const auto c = closed_to_open_momentum(flat, traj);
    for (double v : c.values) REQUIRE(v == 3.0);
}

TEST_CASE("closed_to_open_momentum: trajectory outside the field is a domain error") {
    GridSpec g{-1.0, 1.0, 21, 0.0, 1.0, 11};
    auto field = ScalarField::over_xt(g, 0.0);
    Trajectory traj;
    traj.times = {0.0, 0.5};
    traj.states = {0.0, 2.0};
    traj.costates = {0.0, 0.0};
    REQUIRE_THROWS_AS(closed_to_open_momentum(field, traj), DomainError);
}

TEST_CASE("momentum field from action satisfies the consistency condition") {
    GridSpec g{-1.0, 1.0, 201, 0.0, 0.5, 201};
    auto S = ScalarField::over_xt(g);
    S.fill_with([](double x, double t) { return -x * x / (2.0 * (1.0 - t)); });
    const auto p = momentum_from_action(S);
    auto hstar = ScalarField::over_xt(g);
    for (std::size_t k = 0; k < g.nt; ++k)
        for (std::size_t i = 0; i < g.nx; ++i)
            hstar.at(i, k) = 0.5 * p.at(i, k) * p.at(i, k);
    const auto rep = consistency_residual(hstar, p);
    REQUIRE(rep.sup_norm <= 1e-3);
}
