#pragma once

// Validation battery: closed-form identities checked against the numerical machinery.

#include <cmath>
#include <string>
#include <vector>

#include "fhenon/kernel.hpp"
#include "fhenon/operator.hpp"
#include "fhenon/params.hpp"
#include "fhenon/radial.hpp"
#include "fhenon/solver.hpp"

namespace fhenon {

struct ValidationRow {
    std::string name;
    double measured = 0.0;   ///< error measure (relative unless the name says otherwise)
    double tolerance = 0.0;
    bool pass = false;
};

struct ValidationConfig {
    int N = 3;
    double s = 0.5;
    double L = 30.0;
    double h = 0.05;
    double t_max = 30.0;
};

namespace detail {

inline void push(std::vector<ValidationRow>& rows, std::string name, double err, double tol) {
    rows.push_back({std::move(name), err, tol, err < tol});
}

inline std::string fmt(const char* prefix, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s%.4f", prefix, x);
    return buf;
}

}  // namespace detail

/// Relative error of (T + A) e^{(mu-beta) k} / e^{(mu-beta) k} against c(mu), max over |k| <= L/3.
inline double eigen_identity_error(const ReducedOperator& op, double mu) {
    const Grid1D& g = op.grid();
    const FracHenonParams& P = op.table().params;
    std::vector<double> v(g.n);
    for (std::size_t i = 0; i < g.n; ++i) v[i] = std::exp((mu - P.beta) * g.node(i));
    const std::vector<double> Tv = op.apply_T(v);
    const double c = c_mu(mu, P.N, P.s);
    double err = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
        if (std::abs(g.node(i)) > g.L / 3.0 + 1e-12) continue;
        err = std::max(err, std::abs((Tv[i] + op.A() * v[i]) / v[i] - c) / std::abs(c));
    }
    return err;
}

inline std::vector<ValidationRow> run_validation(const ValidationConfig& cfg) {
    const int N = cfg.N;
    const double s = cfg.s;
    const FracHenonParams P = FracHenonParams::make(N, s, 0.0);
    std::vector<ValidationRow> rows;

    // symbol of power laws on the stable interior
    const double lo = -N + 2.0 * s + 0.05, hi = -0.05;
    for (int i = 0; i < 9; ++i) {
        const double mu = lo + (hi - lo) * i / 8.0;
        detail::push(rows, detail::fmt("power_law mu=", mu), power_law_check(mu, P).rel_err, 1e-3);
    }
    // both zeros of the symbol (the folded integrand vanishes identically), scaled by A
    {
        const double a = normalization_a_Ns(N, s) / A_constant(N, s);
        detail::push(rows, "c(0)/A", std::abs(a * RadialFracLap::power_law_integral(N, s, 0.0)), 1e-8);
        detail::push(rows, "c(-N+2s)/A",
                     std::abs(a * RadialFracLap::power_law_integral(N, s, -N + 2.0 * s)), 1e-8);
    }
    {
        const double A = A_constant(N, s);
        detail::push(rows, "A_constant quadrature", std::abs(A_constant_quadrature(N, s) - A) / A, 1e-4);
    }

    const KernelTable tab = build_table(P, cfg.t_max);
    {
        const SpectralConstants sc = SpectralConstants::compute(N, s);
        detail::push(rows, "kernel kappa0", std::abs(tab.kappa0 / sc.kappa0 - 1.0), 1e-4);
        detail::push(rows, "kernel c_inf", std::abs(tab.c_inf / sc.c_inf - 1.0), 1e-4);
    }

    const Grid1D grid = Grid1D::make(cfg.L, cfg.h);
    const ReducedOperator op(grid, tab);
    detail::push(rows, "eigen_identity mu=beta", eigen_identity_error(op, P.beta), 5e-3);
    detail::push(rows, "eigen_identity mu=beta/2", eigen_identity_error(op, 0.5 * P.beta), 5e-3);

    {
        const double a = P.decay_rate();
        const RadialFunction bubble = RadialFunction::from_function(
            P, [a](double r) { return std::pow(1.0 + r * r, -a); }, {1.0, 0.0}, {1.0, -2.0 * a});
        const RadialFunction gauss =
            RadialFunction::from_function(P, [](double r) { return std::exp(-r * r); }, {1.0, 0.0}, {0.0, 0.0});
        for (double lam : {0.5, 1.0, 2.0}) {
            detail::push(rows, detail::fmt("kelvin bubble lambda=", lam),
                         kelvin_identity_check(bubble, lam, {0.5, 1.0, 2.0}).max_rel_err, 1e-3);
            detail::push(rows, detail::fmt("kelvin gaussian lambda=", lam),
                         kelvin_identity_check(gauss, lam, {0.5, 1.0, 2.0}).max_rel_err, 1e-3);
        }
    }

    {
        const Profile b = alpha0_profile(N, s, op);
        const RieszReport rz = riesz_consistency(b, {0.5, 1.0, 2.0, 4.0});
        detail::push(rows, "riesz spread (alpha=0 bubble)", rz.spread, 1e-2);
    }
    return rows;
}

}  // namespace fhenon
