#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "octk/core.hpp"
#include "octk/control/problems.hpp"

using namespace octk;
using Catch::Matchers::WithinAbs;

namespace {

// Fixed-seed probe stream for property-style checks (seed documented here:
// 0x0c7c5eed, splitmix64).
struct Probe {
    std::uint64_t state = 0x0c7c5eedULL;
    double next() { return detail::unit_double(state); }
    double in(double lo, double hi) { return lo + (hi - lo) * next(); }
};

ScalarField sample_x(const GridSpec& g, const std::function<double(double)>& f) {
    auto field = ScalarField::over_x(g);
    field.fill_with([&](double x, double) { return f(x); });
    return field;
}

}  // namespace

TEST_CASE("fd_partial: derivative of a constant vanishes") {
    GridSpec g{0.0, 1.0, 33, 0.0, 1.0, 17};
    auto field = ScalarField::over_xt(g, 5.0);
    for (auto axis : {Axis::Space, Axis::Time}) {
        auto d = fd_partial(field, axis);
        for (double v : d.values) REQUIRE_THAT(v, WithinAbs(0.0, 1e-14));
    }
}

TEST_CASE("fd_partial: exact on quadratics, interior and boundary") {
    GridSpec g{0.0, 2.0, 201, 0.0, 1.0, 2};  // dx = 0.01
    auto field = sample_x(g, [](double x) { return x * x; });
    auto d = fd_partial(field, Axis::Space);
    REQUIRE_THAT(d.at(100), WithinAbs(2.0, 1e-10));  // x = 1
    // degree <= 2 exactness everywhere, including one-sided ends
    for (std::size_t i = 0; i < g.nx; ++i)
        REQUIRE_THAT(d.at(i), WithinAbs(2.0 * g.x(i), 1e-10));
}

TEST_CASE("fd_partial: sin derivative matches cos within 2e-5") {
    GridSpec g{0.0, 3.0, 301, 0.0, 1.0, 2};  // dx = 0.01
    auto field = sample_x(g, [](double x) { return std::sin(x); });
    auto d = fd_partial(field, Axis::Space);
    double worst_interior = 0.0, worst_edge = 0.0;
    for (std::size_t i = 0; i < g.nx; ++i) {
        const double err = std::abs(d.at(i) - std::cos(g.x(i)));
        if (i == 0 || i == g.nx - 1)
            worst_edge = std::max(worst_edge, err);
        else
            worst_interior = std::max(worst_interior, err);
    }
    REQUIRE(worst_interior <= 2e-5);
    // one-sided ends carry twice the central truncation constant
    REQUIRE(worst_edge <= 4e-5);
}

TEST_CASE("fd_partial: time axis with fewer than 3 slices is degenerate") {
    GridSpec g{0.0, 1.0, 11, 0.0, 1.0, 2};
    auto field = ScalarField::over_xt(g, 1.0);
    REQUIRE_THROWS_AS(fd_partial(field, Axis::Time), DegenerateGridError);
    auto xonly = ScalarField::over_x(g, 1.0);
    REQUIRE_THROWS_AS(fd_partial(xonly, Axis::Time), DegenerateGridError);
}

TEST_CASE("fd_partial: masked nodes erode the stencil") {
    GridSpec g{0.0, 1.0, 11, 0.0, 1.0, 2};
    auto field = sample_x(g, [](double x) { return x * x; });
    field.invalidate(5);
    auto d = fd_partial(field, Axis::Space);
    REQUIRE_FALSE(d.valid(4));
    REQUIRE_FALSE(d.valid(5));
    REQUIRE_FALSE(d.valid(6));
    REQUIRE(d.valid(3));
    REQUIRE_THAT(d.at(3), WithinAbs(2.0 * g.x(3), 1e-12));
}

TEST_CASE("interpolate: node identity and linear reproduction") {
    GridSpec g{-1.0, 1.0, 21, 0.0, 2.0, 11};
    auto field = ScalarField::over_xt(g);
    field.fill_with([](double x, double t) { return 2.0 * x + 3.0 * t; });

    REQUIRE(interpolate(field, g.x(7), g.t(4)) == field.at(7, 4));
    // cell midpoints of a linear field are exact
    const double xm = 0.5 * (g.x(3) + g.x(4));
    const double tm = 0.5 * (g.t(5) + g.t(6));
    REQUIRE_THAT(interpolate(field, xm, tm), WithinAbs(2.0 * xm + 3.0 * tm, 1e-14));
}

TEST_CASE("interpolate: quadratic mid-cell error bounded by dx^2/4") {
    GridSpec g{0.0, 2.0, 21, 0.0, 1.0, 2};  // dx = 0.1
    auto field = sample_x(g, [](double x) { return x * x; });
    const double xq = g.x(10) + 0.05;
    const double got = interpolate(field, xq, g.t0);
    REQUIRE(std::abs(got - xq * xq) <= g.dx() * g.dx() / 4.0 + 1e-12);
}

TEST_CASE("interpolate: refuses to extrapolate") {
    GridSpec g{0.0, 1.0, 11, 0.0, 1.0, 3};
    auto field = ScalarField::over_xt(g, 1.0);
    REQUIRE_THROWS_AS(interpolate(field, 1.5, 0.5), DomainError);
    REQUIRE_THROWS_AS(interpolate(field, 0.5, -0.2), DomainError);
}

TEST_CASE("rk4_step: constant and exponential solutions") {
    auto zero_rhs = [](const std::array<double, 1>&, double) { return std::array<double, 1>{0.0}; };
    REQUIRE(rk4_step<1>(zero_rhs, {1.0}, 0.0, 0.3)[0] == 1.0);

    auto growth = [](const std::array<double, 1>& y, double) { return std::array<double, 1>{y[0]}; };
    const double fwd = rk4_step<1>(growth, {1.0}, 0.0, 0.1)[0];
    REQUIRE_THAT(fwd, WithinAbs(std::exp(0.1), 1e-7));

    auto decay = [](const std::array<double, 1>& y, double) { return std::array<double, 1>{-y[0]}; };
    const double back = rk4_step<1>(decay, {std::exp(-0.1)}, 0.1, -0.1)[0];
    REQUIRE_THAT(back, WithinAbs(1.0, 1e-7));
}

TEST_CASE("rk4_step: non-finite right-hand side names the failing time") {
    auto rhs = [](const std::array<double, 1>&, double t) {
        return std::array<double, 1>{t >= 0.05 ? std::nan("") : 0.0};
    };
    try {
        rk4_step<1>(rhs, {1.0}, 0.0, 0.1);
        FAIL("expected PropagationError");
    } catch (const PropagationError& e) {
        REQUIRE_THAT(e.time, WithinAbs(0.05, 1e-12));
    }
}

TEST_CASE("leapfrog_step: free drift, reversibility, energy bound") {
    auto free_sys = make_separable_system(1.0, [](double) { return 0.0; },
                                          [](double) { return 0.0; });
    auto [x1, p1] = leapfrog_step(free_sys, 0.0, 1.0, 0.0, 0.1);
    REQUIRE_THAT(x1, WithinAbs(0.1, 1e-15));
    REQUIRE_THAT(p1, WithinAbs(1.0, 1e-15));

    auto sho = make_separable_system(1.0, [](double x) { return 0.5 * x * x; },
                                     [](double x) { return x; });
    // one step forward then one step back restores the state to round-off
    auto [xf, pf] = leapfrog_step(sho, 0.7, -0.2, 0.0, 0.05);
    auto [xb, pb] = leapfrog_step(sho, xf, pf, 0.05, -0.05);
    REQUIRE_THAT(xb, WithinAbs(0.7, 1e-12));
    REQUIRE_THAT(pb, WithinAbs(-0.2, 1e-12));

    auto energy_drift = [&](double dt, int steps) {
        double x = 1.0, p = 0.0, t = 0.0;
        const double H0 = 0.5;
        double worst = 0.0;
        for (int k = 0; k < steps; ++k) {
            std::tie(x, p) = leapfrog_step(sho, x, p, t, dt);
            t += dt;
            worst = std::max(worst, std::abs(0.5 * (x * x + p * p) - H0));
        }
        return worst;
    };
    const double e1 = energy_drift(0.01, 10000);
    REQUIRE(e1 <= 1e-4);
    // bounded error with a dt^2 constant that is stable under halving
    const double e2 = energy_drift(0.005, 20000);
    const double c1 = e1 / (0.01 * 0.01);
    const double c2 = e2 / (0.005 * 0.005);
    REQUIRE(c2 / c1 > 0.5);
    REQUIRE(c2 / c1 < 2.0);
}

TEST_CASE("leapfrog_step: requires a separable system") {
    HamiltonianSystem sys;
    sys.H = [](double x, double p, double) { return x * p; };
    sys.dH_dx = [](double, double p, double) { return p; };
    sys.dH_dp = [](double x, double, double) { return x; };
    REQUIRE_THROWS_AS(leapfrog_step(sys, 0.0, 1.0, 0.0, 0.1), UnsupportedSystemError);
}

TEST_CASE("solve_tridiagonal: identity, scalar, round trip, zero pivot") {
    std::vector<double> rhs{1.0, -2.0, 3.0};
    auto v = solve_tridiagonal<double>({0.0, 0.0}, {1.0, 1.0, 1.0}, {0.0, 0.0}, rhs);
    REQUIRE(v == rhs);

    auto s = solve_tridiagonal<double>({}, {2.0}, {}, {4.0});
    REQUIRE_THAT(s[0], WithinAbs(2.0, 1e-15));

    const std::size_t n = 40;
    std::vector<double> lower(n - 1, -1.0), diag(n, 2.0), upper(n - 1, -1.0), truth(n);
    Probe probe;
    for (auto& t : truth) t = probe.in(-1.0, 1.0);
    auto b = tridiagonal_multiply(lower, diag, upper, truth);
    auto sol = solve_tridiagonal(lower, diag, upper, b);
    for (std::size_t i = 0; i < n; ++i) REQUIRE_THAT(sol[i], WithinAbs(truth[i], 1e-10));

    REQUIRE_THROWS_AS(
        solve_tridiagonal<double>({1.0}, {0.0, 1.0}, {1.0}, {1.0, 1.0}),
        SingularSystemError);
}

TEST_CASE("solve_tridiagonal: residual bound on diagonally dominant systems") {
    Probe probe;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 5 + static_cast<std::size_t>(probe.in(0.0, 30.0));
        std::vector<double> lower(n - 1), diag(n), upper(n - 1), rhs(n);
        for (auto& v : lower) v = probe.in(-1.0, 1.0);
        for (auto& v : upper) v = probe.in(-1.0, 1.0);
        for (auto& v : rhs) v = probe.in(-2.0, 2.0);
        for (std::size_t i = 0; i < n; ++i) diag[i] = 3.0 + probe.in(0.0, 1.0);

        auto v = solve_tridiagonal(lower, diag, upper, rhs);
        auto back = tridiagonal_multiply(lower, diag, upper, v);
        double rhs_inf = 0.0, res_inf = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            rhs_inf = std::max(rhs_inf, std::abs(rhs[i]));
            res_inf = std::max(res_inf, std::abs(back[i] - rhs[i]));
        }
        REQUIRE(res_inf <= 1e-12 * rhs_inf);
    }
}

TEST_CASE("solve_tridiagonal: complex coefficients") {
    using C = cplx;
    std::vector<C> lower{{0.0, -1.0}}, diag{{2.0, 1.0}, {2.0, -1.0}}, upper{{0.0, 1.0}};
    std::vector<C> truth{{1.0, 2.0}, {-0.5, 0.25}};
    auto rhs = tridiagonal_multiply(lower, diag, upper, truth);
    auto sol = solve_tridiagonal(lower, diag, upper, rhs);
    REQUIRE(std::abs(sol[0] - truth[0]) < 1e-12);
    REQUIRE(std::abs(sol[1] - truth[1]) < 1e-12);
}

TEST_CASE("maximize_scalar: parabola, boundary, sine") {
    auto para = maximize_scalar([](double u) { return -(u - 0.3) * (u - 0.3); }, -1.0, 1.0, 1e-8);
    REQUIRE_THAT(para.arg, WithinAbs(0.3, 1e-8));

    auto mono = maximize_scalar([](double u) { return u; }, 0.0, 1.0, 1e-8);
    REQUIRE_THAT(mono.arg, WithinAbs(1.0, 1e-8));

    auto sine = maximize_scalar([](double u) { return std::sin(u); }, 0.0, 3.0, 1e-8);
    REQUIRE_THAT(sine.arg, WithinAbs(std::numbers::pi / 2.0, 1e-8));
}

TEST_CASE("maximize_scalar: multimodal result no worse than best seed") {
    auto g = [](double u) { return std::sin(5.0 * u) + 0.3 * u; };
    auto r = maximize_scalar(g, 0.0, 4.0, 1e-9);
    for (int j = 0; j < 8; ++j) {
        const double seed = 4.0 * j / 7.0;
        REQUIRE(r.value >= g(seed) - 1e-12);
    }
}

TEST_CASE("maximize_scalar: non-finite objective reports the probe") {
    auto g = [](double u) { return u > 0.5 ? std::numeric_limits<double>::infinity() : u; };
    REQUIRE_THROWS_AS(maximize_scalar(g, 0.0, 1.0, 1e-6), EvaluationError);
}

TEST_CASE("root_find_1d: linear, bracketed sqrt, no-root failure") {
    REQUIRE_THAT(root_find_1d([](double z) { return z - 2.0; }, SeedPair{0.0, 1.0}, 1e-12),
                 WithinAbs(2.0, 1e-12));
    REQUIRE_THAT(root_find_1d([](double z) { return z * z - 2.0; }, Bracket{0.0, 2.0}, 1e-12),
                 WithinAbs(std::sqrt(2.0), 1e-10));
    REQUIRE_THROWS_AS(root_find_1d([](double z) { return 1.0 + z * z; }, SeedPair{0.5, 1.5}, 1e-12),
                      NoConvergenceError);
}

TEST_CASE("unwrap_phase: zero phase, linear phase, round trip") {
    std::vector<cplx> ones(10, cplx{1.0, 0.0});
    for (double th : unwrap_phase(ones)) REQUIRE(th == 0.0);

    // exp(i 3x) on [0,3] crosses the principal branch twice
    const std::size_t n = 61;
    std::vector<cplx> lin(n);
    for (std::size_t k = 0; k < n; ++k)
        lin[k] = std::polar(1.0, 3.0 * (3.0 * k / (n - 1.0)));
    auto theta = unwrap_phase(lin);
    for (std::size_t k = 0; k < n; ++k)
        REQUIRE_THAT(theta[k], WithinAbs(3.0 * (3.0 * k / (n - 1.0)), 1e-12));

    // re-wrapping reproduces the stored arguments
    for (std::size_t k = 0; k < n; ++k) {
        const cplx z = std::polar(1.0, theta[k]);
        REQUIRE(std::abs(z - lin[k]) < 1e-12);
    }
}

TEST_CASE("unwrap_phase: adjacent differences never exceed pi") {
    Probe probe;
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<cplx> z(200);
        for (auto& v : z) v = std::polar(0.5 + probe.next(), probe.in(-10.0, 10.0));
        auto theta = unwrap_phase(z);
        for (std::size_t k = 0; k + 1 < theta.size(); ++k)
            REQUIRE(std::abs(theta[k + 1] - theta[k]) <= std::numbers::pi + 1e-12);
    }
}

TEST_CASE("unwrap_phase: zero sample is a node error with its index") {
    std::vector<cplx> z{{1.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}};
    try {
        unwrap_phase(z);
        FAIL("expected NodeError");
    } catch (const NodeError& e) {
        REQUIRE(e.index == 1);
    }
}

namespace {

Trajectory lq_reference_trajectory(std::size_t n) {
    using control::LqReference;
    Trajectory traj;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(n - 1);
        traj.times.push_back(t);
        traj.states.push_back(LqReference::x(t));
        traj.costates.push_back(LqReference::lambda(t));
        traj.controls.push_back(LqReference::u(t));
    }
    return traj;
}

// Integrate x' = f(x, u(t), t) with the core RK4 kernel; used to build
// admissible comparison trajectories for perturbed controls.
Trajectory integrate_control_table(const ControlProblem& p,
                                   const std::function<double(double)>& u_of_t, double dt) {
    Trajectory traj;
    const auto steps = static_cast<std::size_t>(std::llround((p.t1 - p.t0) / dt));
    double x = p.x0;
    for (std::size_t k = 0;; ++k) {
        const double t = p.t0 + static_cast<double>(k) * dt;
        traj.times.push_back(t);
        traj.states.push_back(x);
        traj.costates.push_back(0.0);
        traj.controls.push_back(u_of_t(t));
        if (k == steps) break;
        auto rhs = [&](const std::array<double, 1>& y, double at) {
            return std::array<double, 1>{p.f(y[0], u_of_t(at), at)};
        };
        x = rk4_step<1>(rhs, {x}, t, dt)[0];
    }
    return traj;
}

}  // namespace

TEST_CASE("action_value: constant payoff integrates to the horizon length") {
    ControlProblem p = control::make_lq_problem();
    p.F = [](double, double, double) { return 1.0; };
    p.F_x = [](double, double, double) { return 0.0; };
    p.F_u = [](double, double, double) { return 0.0; };
    p.f = [](double, double, double) { return 0.0; };
    p.f_x = [](double, double, double) { return 0.0; };
    p.f_u = [](double, double, double) { return 0.0; };
    Trajectory traj;
    for (int k = 0; k <= 10; ++k) {
        traj.times.push_back(k / 10.0);
        traj.states.push_back(1.0);
        traj.costates.push_back(0.0);
        traj.controls.push_back(0.0);
    }
    REQUIRE_THAT(action_value(p, traj), WithinAbs(1.0, 1e-14));
}

TEST_CASE("action_value: LQ optimal trajectory reproduces the closed-form value") {
    const auto p = control::make_lq_problem();
    const auto traj = lq_reference_trajectory(1001);
    REQUIRE_THAT(action_value(p, traj), WithinAbs(-std::tanh(1.0) / 2.0, 1e-4));
}

TEST_CASE("action_value: optimum beats ten perturbed control tables") {
    const auto p = control::make_lq_problem();
    const double best = action_value(p, lq_reference_trajectory(1001));

    std::vector<std::function<double(double)>> bumps;
    for (int j = 1; j <= 4; ++j)
        bumps.emplace_back([j](double t) { return 0.1 * std::sin(j * std::numbers::pi * t); });
    for (int j = 1; j <= 3; ++j)
        bumps.emplace_back([j](double t) { return 0.1 * std::cos(j * std::numbers::pi * t); });
    bumps.emplace_back([](double t) { return 0.1 * t; });
    bumps.emplace_back([](double t) { return 0.1 * (1.0 - t); });
    bumps.emplace_back([](double) { return 0.05; });
    REQUIRE(bumps.size() == 10);

    for (const auto& bump : bumps) {
        auto u = [&](double t) { return control::LqReference::u(t) + bump(t); };
        const double perturbed = action_value(p, integrate_control_table(p, u, 1e-3));
        REQUIRE(best >= perturbed);
    }
}

TEST_CASE("action_value: rejects trajectories violating the dynamics") {
    const auto p = control::make_lq_problem();
    auto traj = lq_reference_trajectory(101);
    for (auto& u : traj.controls) u += 0.5;  // controls no longer drive these states
    REQUIRE_THROWS_AS(action_value(p, traj), InconsistentTrajectoryError);
}

TEST_CASE("consistency_residual: constants give a zero residual") {
    GridSpec g{-1.0, 1.0, 21, 0.0, 1.0, 11};
    auto h = ScalarField::over_xt(g, 3.0);
    auto lam = ScalarField::over_xt(g, -2.0);
    auto rep = consistency_residual(h, lam);
    REQUIRE_THAT(rep.sup_norm, WithinAbs(0.0, 1e-13));
    REQUIRE(rep.coverage == 1.0);
}

TEST_CASE("consistency_residual: analytic free-particle pair and refinement order") {
    // H* = x^2 / (2 (1-t)^2) with p = -x/(1-t) solves the consistency
    // condition exactly; only time differencing contributes error.
    auto run = [](std::size_t n) {
        GridSpec g{-1.0, 1.0, n, 0.0, 0.5, n};
        auto hstar = ScalarField::over_xt(g);
        auto lam = ScalarField::over_xt(g);
        hstar.fill_with([](double x, double t) {
            const double d = 1.0 - t;
            return x * x / (2.0 * d * d);
        });
        lam.fill_with([](double x, double t) { return -x / (1.0 - t); });
        return consistency_residual(hstar, lam).sup_norm;
    };
    const double fine = run(401);
    REQUIRE(fine <= 5e-4);
    const double coarse = run(201);
    const double order = std::log2(coarse / fine);
    REQUIRE(order >= 1.9);
}

TEST_CASE("consistency_residual: hand-computed linear case and shape guard") {
    GridSpec g{-1.0, 2.0, 31, 0.0, 1.0, 11};
    auto h = ScalarField::over_xt(g, 0.0);
    auto lam = ScalarField::over_xt(g);
    lam.fill_with([](double x, double t) { return x * t; });
    auto rep = consistency_residual(h, lam);
    // residual is d(xt)/dt = x, so the sup is max|x| over the grid
    REQUIRE_THAT(rep.sup_norm, WithinAbs(2.0, 1e-12));

    GridSpec g2 = g;
    g2.nx = 33;
    auto other = ScalarField::over_xt(g2, 0.0);
    REQUIRE_THROWS_AS(consistency_residual(other, lam), ShapeError);
}

TEST_CASE("domain types: invariants and probe checks") {
    const auto lq = control::make_lq_problem();
    REQUIRE(lq.probe_partials() <= 1e-5);

    auto sho = make_separable_system(2.0, [](double x) { return 0.25 * x * x; },
                                     [](double x) { return 0.5 * x; });
    REQUIRE(sho.probe_separable() <= 1e-12);

    GridSpec bad{0.0, 1.0, 2, 0.0, 1.0, 5};
    REQUIRE_THROWS_AS(bad.validate(), DegenerateGridError);
    GridSpec g{0.0, 1.0, 11, 0.0, 2.0, 21};
    REQUIRE_THAT(g.dx(), WithinAbs(0.1, 1e-15));
    REQUIRE_THAT(g.dt(), WithinAbs(0.1, 1e-15));

    Trajectory t;
    t.times = {0.0, 0.1, 0.1};
    t.states = {1.0, 1.0, 1.0};
    t.costates = {0.0, 0.0, 0.0};
    REQUIRE_THROWS_AS(t.validate(), DomainError);
}
