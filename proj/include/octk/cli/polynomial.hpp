#pragma once

#include <array>
#include <cctype>
#include <string>

#include "octk/cli/config.hpp"
#include "octk/core/errors.hpp"
#include "octk/core/types.hpp"

namespace octk::cli {

/// Bivariate polynomial in (x,u) of total degree <= 4, entered in config
/// files as term keys: c (constant), x, x2.., u, u2.., and mixed terms such
/// as x2u or xu3. Degree-4 cap keeps the analytic partials trivially
/// correct.
struct Poly2 {
    std::array<std::array<double, 5>, 5> coef{};  // coef[i][j] * x^i u^j

    double eval(double x, double u) const {
        double acc = 0.0;
        double xp = 1.0;
        for (int i = 0; i <= 4; ++i) {
            double up = 1.0;
            for (int j = 0; j + i <= 4; ++j) {
                acc += coef[i][j] * xp * up;
                up *= u;
            }
            xp *= x;
        }
        return acc;
    }

    Poly2 d_dx() const {
        Poly2 d;
        for (int i = 1; i <= 4; ++i)
            for (int j = 0; j + i <= 4; ++j) d.coef[i - 1][j] = coef[i][j] * i;
        return d;
    }

    Poly2 d_du() const {
        Poly2 d;
        for (int i = 0; i <= 4; ++i)
            for (int j = 1; j + i <= 4; ++j) d.coef[i][j - 1] = coef[i][j] * j;
        return d;
    }
};

namespace detail {

// term grammar: "c" | ["x"[digit]]["u"[digit]]
inline bool parse_term(const std::string& term, int& xi, int& uj) {
    xi = 0;
    uj = 0;
    if (term == "c") return true;
    std::size_t pos = 0;
    auto read_power = [&](char var, int& out) {
        if (pos < term.size() && term[pos] == var) {
            ++pos;
            out = 1;
            if (pos < term.size() && std::isdigit(static_cast<unsigned char>(term[pos]))) {
                out = term[pos] - '0';
                ++pos;
            }
        }
    };
    read_power('x', xi);
    read_power('u', uj);
    return pos == term.size() && (xi > 0 || uj > 0) && xi + uj <= 4;
}

}  // namespace detail

/// Collect the polynomial terms under `prefix.` from a config.
inline Poly2 parse_poly2(const ScenarioConfig& cfg, const std::string& prefix) {
    Poly2 p;
    const std::string head = prefix + ".";
    bool any = false;
    for (const auto& [key, value] : cfg.values) {
        if (key.rfind(head, 0) != 0) continue;
        const std::string term = key.substr(head.size());
        int xi = 0, uj = 0;
        if (!detail::parse_term(term, xi, uj))
            throw ConfigurationError("config key '" + key +
                                     "': not a polynomial term of degree <= 4");
        p.coef[xi][uj] = cfg.get_double(key, 0.0);
        any = true;
    }
    if (!any)
        throw ConfigurationError("config: no '" + prefix + ".*' polynomial terms found");
    return p;
}

/// Inline control problem from polynomial payoff and dynamics.
inline ControlProblem inline_control_problem(const ScenarioConfig& cfg) {
    const Poly2 F = parse_poly2(cfg, "F");
    const Poly2 f = parse_poly2(cfg, "f");
    const Poly2 Fx = F.d_dx(), Fu = F.d_du(), fx = f.d_dx(), fu = f.d_du();

    ControlProblem p;
    p.F = [F](double x, double u, double) { return F.eval(x, u); };
    p.f = [f](double x, double u, double) { return f.eval(x, u); };
    p.F_x = [Fx](double x, double u, double) { return Fx.eval(x, u); };
    p.F_u = [Fu](double x, double u, double) { return Fu.eval(x, u); };
    p.f_x = [fx](double x, double u, double) { return fx.eval(x, u); };
    p.f_u = [fu](double x, double u, double) { return fu.eval(x, u); };
    p.t0 = cfg.get_double("horizon.t0", 0.0);
    p.t1 = cfg.get_double("horizon.t1", 1.0);
    p.x0 = cfg.get_double("problem.x0", 1.0);
    p.u_lo = cfg.get_double("problem.u_lo", -5.0);
    p.u_hi = cfg.get_double("problem.u_hi", 5.0);
    p.name = "inline";
    p.validate();
    return p;
}

/// Inline potential U(x) from polynomial x-terms.
inline Fn1 inline_potential(const ScenarioConfig& cfg, Fn1* derivative = nullptr) {
    const Poly2 U = parse_poly2(cfg, "U");
    for (int i = 0; i <= 4; ++i)
        for (int j = 1; j + i <= 4; ++j)
            if (U.coef[i][j] != 0.0)
                throw ConfigurationError("config: potential terms must not involve u");
    const Poly2 Ux = U.d_dx();
    if (derivative) *derivative = [Ux](double x) { return Ux.eval(x, 0.0); };
    return [U](double x) { return U.eval(x, 0.0); };
}

}  // namespace octk::cli
