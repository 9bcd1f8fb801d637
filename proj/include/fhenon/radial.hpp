#pragma once

// Radial functions u(r) in R^N and the checks that tie a solved profile back to the PDE
// (-Delta)^s u = |x|^alpha u^p: fractional Laplacian of radial functions (two independent
// quadratures), Kelvin transform, Riesz potential form, decay bounds.
//
// Direct mode. With rho = r y and the sphere integral done in the polar angle,
//   (-Delta)^s u(r) = a_{N,s} r^{-2s} int_0^inf (u(r) - u(r y)) y^{N-1} J(y) dy,
//   J(y) = |S^{N-2}| int_0^pi sin^{N-2}(th) ((1-y)^2 + 4 y sin^2(th/2))^{-(N+2s)/2} dth.
// Since J(1/x) = x^{N+2s} J(x), the part y > 1 folds onto (0, 1):
//   a r^{-2s} int_0^1 [(u(r)-u(rx)) x^{N-1} + (u(r)-u(r/x)) x^{2s-1}] J(x) dx.
// Reduced mode evaluates r^{beta-2s} (T + A) vbar(log r) with vbar = r^{-beta} u.

#include <boost/math/interpolators/cardinal_quintic_b_spline.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

#include "fhenon/errors.hpp"
#include "fhenon/kernel.hpp"
#include "fhenon/operator.hpp"
#include "fhenon/params.hpp"
#include "fhenon/quadrature.hpp"

namespace fhenon {

/// u ~ coeff * r^exponent; coeff = 0 marks a tail faster than any power.
struct PowerTail {
    double coeff = 0.0;
    double exponent = 0.0;
};

struct RadialFunction {
    std::vector<double> log_nodes;  ///< k_i, r_i = e^{k_i}, ascending
    std::vector<double> values;     ///< u(r_i)
    FracHenonParams params;
    PowerTail tail0;    ///< r -> 0
    PowerTail tail_inf; ///< r -> inf
    /// u(r) for every r > 0 (interpolant plus tail models for sampled data)
    std::function<double(double)> eval;

    double operator()(double r) const { return eval(r); }
    /// r^{-beta} u(r) at r = e^k
    double vbar(double k) const { return std::exp(-params.beta * k) * eval(std::exp(k)); }
    double kappa_min() const { return log_nodes.front(); }
    double kappa_max() const { return log_nodes.back(); }

    /// Samples an analytic u on n log-uniform nodes over [k_min, k_max].
    static RadialFunction from_function(const FracHenonParams& params, std::function<double(double)> u,
                                        PowerTail tail0, PowerTail tail_inf, double k_min = -40.0,
                                        double k_max = 40.0, std::size_t n = 1601) {
        if (!(k_max > k_min) || n < 2) throw DomainError("radial function needs k_max > k_min and n >= 2");
        RadialFunction f;
        f.params = params;
        f.tail0 = tail0;
        f.tail_inf = tail_inf;
        f.eval = std::move(u);
        f.log_nodes.resize(n);
        f.values.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double k = k_min + (k_max - k_min) * static_cast<double>(i) / static_cast<double>(n - 1);
            f.log_nodes[i] = k;
            f.values[i] = f.eval(std::exp(k));
        }
        return f;
    }
};

namespace detail {

/// Least-squares slope of log|v| against |k| over nodes with |k| in [lo, hi] on one side.
/// Returns nullopt if any value is not positive.
inline std::optional<double> side_rate(const Grid1D& g, const std::vector<double>& v, int side, double lo,
                                       double hi) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (std::size_t i = 0; i < g.n; ++i) {
        const double k = g.node(i);
        if ((side < 0 ? k >= 0.0 : k <= 0.0) || std::abs(k) < lo || std::abs(k) > hi) continue;
        if (!(v[i] > 0.0)) return std::nullopt;
        const double x = std::abs(k), y = std::log(v[i]);
        sx += x, sy += y, sxx += x * x, sxy += x * y;
        ++m;
    }
    if (m < 2) return std::nullopt;
    return -(m * sxy - sx * sy) / (m * sxx - sx * sx);
}

/// vbar on the real line: quintic spline inside [-0.9L, 0.9L], exponential tails outside
/// with the rates fitted on [0.6L, 0.9L].
class ProfileInterpolant {
public:
    explicit ProfileInterpolant(const Profile& p)
        : spline_(p.values, p.grid.node(0), p.grid.h), k_edge_(0.9 * p.grid.L) {
        const double a = p.params.decay_rate();
        rate_left_ = side_rate(p.grid, p.values, -1, 0.6 * p.grid.L, 0.9 * p.grid.L).value_or(a);
        rate_right_ = side_rate(p.grid, p.values, +1, 0.6 * p.grid.L, 0.9 * p.grid.L).value_or(a);
        v_left_ = spline_(-k_edge_);
        v_right_ = spline_(k_edge_);
    }

    double operator()(double k) const {
        if (k > k_edge_) return v_right_ * std::exp(-rate_right_ * (k - k_edge_));
        if (k < -k_edge_) return v_left_ * std::exp(-rate_left_ * (-k_edge_ - k));
        return spline_(k);
    }

    double rate_left() const { return rate_left_; }
    double rate_right() const { return rate_right_; }
    double v_left() const { return v_left_; }
    double v_right() const { return v_right_; }
    double k_edge() const { return k_edge_; }

private:
    boost::math::interpolators::cardinal_quintic_b_spline<double> spline_;
    double k_edge_;
    double rate_left_ = 0.0, rate_right_ = 0.0, v_left_ = 0.0, v_right_ = 0.0;
};

}  // namespace detail

/// u(r_i) = r_i^beta vbar(k_i), plus a smooth interpolant with fitted power-law tails.
inline RadialFunction reconstruct_u(const Profile& profile) {
    for (double v : profile.values)
        if (!std::isfinite(v)) throw DomainError("profile has non-finite values");
    const FracHenonParams P = profile.params;
    const Grid1D& g = profile.grid;
    auto interp = std::make_shared<const detail::ProfileInterpolant>(profile);
    RadialFunction f;
    f.params = P;
    f.log_nodes = g.nodes();
    f.values.resize(g.n);
    for (std::size_t i = 0; i < g.n; ++i) f.values[i] = std::exp(P.beta * f.log_nodes[i]) * profile.values[i];
    const double ke = interp->k_edge();
    // vbar ~ v_e e^{-rate (|k| - k_e)}  ->  u ~ coeff r^{beta -+ rate}
    f.tail_inf = {interp->v_right() * std::exp(interp->rate_right() * ke), P.beta - interp->rate_right()};
    f.tail0 = {interp->v_left() * std::exp(interp->rate_left() * ke), P.beta + interp->rate_left()};
    const double beta = P.beta;
    f.eval = [interp, beta](double r) {
        const double k = std::log(r);
        return std::exp(beta * k) * (*interp)(k);
    };
    return f;
}

/// vbar(k_i) = r_i^{-beta} u(r_i); needs the uniform symmetric nodes of a Grid1D.
inline Profile emden_fowler_forward(const RadialFunction& u) {
    const std::size_t n = u.log_nodes.size();
    if (n < 3) throw DomainError("emden_fowler_forward needs at least three nodes");
    const double L = -u.log_nodes.front();
    const double h = (u.log_nodes.back() - u.log_nodes.front()) / static_cast<double>(n - 1);
    const Grid1D g = Grid1D::make(L, h);
    if (g.n != n || std::abs(u.log_nodes.back() - L) > 1e-9 * L) {
        throw DomainError("emden_fowler_forward needs uniform nodes symmetric about k = 0");
    }
    Profile p;
    p.grid = g;
    p.params = u.params;
    p.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(u.log_nodes[i] - g.node(i)) > 1e-9 * std::max(1.0, L))
            throw DomainError("emden_fowler_forward needs uniform nodes");
        p.values[i] = std::exp(-u.params.beta * u.log_nodes[i]) * u.values[i];
    }
    bool even = true;
    for (std::size_t i = 0; i < n && even; ++i) even = p.values[i] == p.values[g.mirror(i)];
    p.even = even;
    return p;
}

namespace detail {

/// J(x) for x in (0, 1) with eps = 1 - x given separately to keep (1-x)^2 exact near x = 1.
/// Geometric panels in the polar angle scaled by the peak width eps / sqrt(x).
inline double angular_J(int N, double x, double eps, double q) {
    if (N == 1) return std::pow(eps, -2.0 * q) + std::pow(1.0 + x, -2.0 * q);
    const double e2 = eps * eps;
    auto f = [&](double th) {
        const double sh = std::sin(0.5 * th);
        const double w = N == 2 ? 1.0 : std::pow(std::sin(th), N - 2);
        return w * std::pow(e2 + 4.0 * x * sh * sh, -q);
    };
    const auto& rule = quad::gauss20();
    const double pi = std::numbers::pi;
    double width = eps / std::sqrt(x);
    double total = 0.0;
    if (width >= 0.5 * pi) {
        total = quad::fixed(rule, f, 0.0, 0.5 * pi) + quad::fixed(rule, f, 0.5 * pi, pi);
    } else {
        double a = 0.0, b = width;
        while (a < pi) {
            total += quad::fixed(rule, f, a, b);
            a = b;
            b = std::min(2.0 * b, pi);
        }
    }
    return sphere_measure(N - 2) * total;
}

/// Quadrature on (0, 1) for integrands F(x) = B(x) J(x): geometric panels toward x = 0 and
/// toward x = 1 (in eps = 1 - x), with power-law end pieces F ~ x^{e0-1} and F ~ eps^{e1-1}.
struct FoldedRule {
    std::vector<double> x, eps, w, J;
    double x_end = 0.0, J_x_end = 0.0;
    double eps_end = 0.0, J_eps_end = 0.0;

    static FoldedRule make(int N, double q, int zero_panels, int one_panels) {
        FoldedRule R;
        const auto& g = quad::gauss20();
        auto add = [&](double xx, double ee, double ww) {
            R.x.push_back(xx);
            R.eps.push_back(ee);
            R.w.push_back(ww);
            R.J.push_back(angular_J(N, xx, ee, q));
        };
        for (int k = zero_panels; k >= 1; --k) {
            const double a = std::ldexp(1.0, -k - 1), b = std::ldexp(1.0, -k);
            const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
            for (std::size_t i = 0; i < g.x.size(); ++i) {
                const double xx = mid + half * g.x[i];
                add(xx, 1.0 - xx, half * g.w[i]);
            }
        }
        for (int k = 1; k <= one_panels; ++k) {
            const double a = std::ldexp(1.0, -k - 1), b = std::ldexp(1.0, -k);
            const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
            for (std::size_t i = 0; i < g.x.size(); ++i) {
                const double ee = mid + half * g.x[i];
                add(1.0 - ee, ee, half * g.w[i]);
            }
        }
        R.x_end = std::ldexp(1.0, -zero_panels - 1);
        R.J_x_end = angular_J(N, R.x_end, 1.0 - R.x_end, q);
        R.eps_end = std::ldexp(1.0, -one_panels - 1);
        R.J_eps_end = angular_J(N, 1.0 - R.eps_end, R.eps_end, q);
        return R;
    }

    /// B(x, eps) is the non-kernel factor of the integrand.
    template <class B>
    double integrate(B&& b, double e0, double e1) const {
        double total = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) total += w[i] * b(x[i], eps[i]) * J[i];
        total += b(x_end, 1.0 - x_end) * J_x_end * x_end / e0;
        total += b(1.0 - eps_end, eps_end) * J_eps_end * eps_end / e1;
        return total;
    }
};

}  // namespace detail

enum class FracLapMode { Reduced, Direct };

struct FracLapOptions {
    FracLapMode mode = FracLapMode::Direct;
    /// Kernel table for reduced mode; built on demand when null.
    const KernelTable* table = nullptr;
};

/// Reusable evaluator of (-Delta)^s on radial functions for fixed (N, s).
class RadialFracLap {
public:
    static constexpr int zero_panels = 53;
    static constexpr int one_panels = 16;

    RadialFracLap(int N, double s)
        : N_(N), s_(s), a_(normalization_a_Ns(N, s)),
          rule_(detail::FoldedRule::make(N, 0.5 * (N + 2.0 * s), zero_panels, one_panels)) {}

    double direct(const RadialFunction& u, double r) const {
        check(u, r);
        const double ur = u(r);
        const int N = N_;
        const double s = s_;
        auto B = [&](double x, double) {
            return (ur - u(r * x)) * std::pow(x, N - 1) + (ur - u(r / x)) * std::pow(x, 2.0 * s - 1.0);
        };
        const double I = rule_.integrate(B, 2.0 * s, 2.0 - 2.0 * s);
        const double out = a_ * std::pow(r, -2.0 * s) * I;
        if (!std::isfinite(out)) throw QuadratureError("direct radial quadrature produced a non-finite value");
        return out;
    }

    /// Folded integral for u = r^mu at r = 1 with 1 - x^mu evaluated through expm1.
    /// Rounding in B grows like eps^{-2s} against an eps^{3-2s} end-model error, so the
    /// panels stop near eps = 1e-8.
    static double power_law_integral(int N, double s, double mu) {
        static constexpr int deep = 26;
        const auto R = detail::FoldedRule::make(N, 0.5 * (N + 2.0 * s), zero_panels, deep);
        auto B = [&](double x, double eps) {
            const double lx = x > 0.5 ? std::log1p(-eps) : std::log(x);
            return -std::expm1(mu * lx) * std::pow(x, N - 1) - std::expm1(-mu * lx) * std::pow(x, 2.0 * s - 1.0);
        };
        return R.integrate(B, 2.0 * s, 2.0 - 2.0 * s);
    }

    double a_Ns() const { return a_; }

private:
    void check(const RadialFunction& u, double r) const {
        if (u.params.N != N_ || u.params.s != s_) throw DomainError("radial function has different (N, s)");
        const double k = std::log(r);
        if (!(r > 0.0) || k < u.kappa_min() + 2.0 || k > u.kappa_max() - 2.0) {
            std::ostringstream os;
            os << "radius " << r << " is not inside the stored range shrunk by e^2 at both ends";
            throw DomainError(os.str());
        }
    }

    int N_;
    double s_;
    double a_;
    detail::FoldedRule rule_;
};

namespace detail {

/// r^{beta-2s} (T + A) vbar(log r) with T by product quadrature on geometric/unit panels.
inline double reduced_fraclap(const RadialFunction& u, double r, const KernelTable& K) {
    const FracHenonParams& P = u.params;
    const double k = std::log(r);
    if (!(r > 0.0) || k < u.kappa_min() + 2.0 || k > u.kappa_max() - 2.0)
        throw DomainError("radius is not inside the stored range shrunk by e^2 at both ends");
    const double s = P.s;
    const double v0 = u.vbar(k);
    auto D = [&](double t) { return (2.0 * v0 - u.vbar(k + t) - u.vbar(k - t)) * K(t); };
    const auto& rule = quad::gauss20();
    constexpr double t_c = 1e-4, t_end = 60.0;
    double T = 0.0;
    double a = t_c;
    while (a < 1.0) {
        const double b = std::min(2.0 * a, 1.0);
        T += quad::fixed(rule, D, a, b);
        a = b;
    }
    for (double t0 = 1.0; t0 < t_end; t0 += 0.5) T += quad::fixed(rule, D, t0, t0 + 0.5);
    T += 2.0 * v0 * K.tail_integral(t_end);
    // D(t) ~ -vbar'' t^2 below t_c, K ~ kappa0 t^{-1-2s}
    constexpr double dk = 1e-3;
    const double v2 = (u.vbar(k + dk) - 2.0 * v0 + u.vbar(k - dk)) / (dk * dk);
    T += -v2 * K.kappa0 * std::pow(t_c, 2.0 - 2.0 * s) / (2.0 - 2.0 * s);
    return std::exp((P.beta - 2.0 * s) * k) * (T + A_constant(P.N, s) * v0);
}

}  // namespace detail

inline double radial_fraclap(const RadialFunction& u, double r, const FracLapOptions& opts = {}) {
    if (opts.mode == FracLapMode::Direct) return RadialFracLap(u.params.N, u.params.s).direct(u, r);
    if (opts.table) return detail::reduced_fraclap(u, r, *opts.table);
    const KernelTable tab = build_table(u.params);
    return detail::reduced_fraclap(u, r, tab);
}

struct PowerLawCheck {
    double numeric = 0.0;
    double formula = 0.0;
    double rel_err = 0.0;
};

/// (-Delta)^s r^mu at r = 1 by direct quadrature against c(mu).
inline PowerLawCheck power_law_check(double mu, const FracHenonParams& params) {
    const FracHenonParams P = params;
    const RadialFunction u = RadialFunction::from_function(
        P, [mu](double r) { return std::pow(r, mu); }, {1.0, mu}, {1.0, mu});
    PowerLawCheck c;
    c.numeric = radial_fraclap(u, 1.0);
    c.formula = c_mu(mu, P.N, P.s);
    c.rel_err = std::abs(c.numeric - c.formula) / std::abs(c.formula);
    return c;
}

/// a_{N,s} times the folded quadrature of (-Delta)^s r^beta at r = 1; compare with A.
inline double A_constant_quadrature(int N, double s) {
    const double beta = -0.5 * (N - 2.0 * s);
    return normalization_a_Ns(N, s) * RadialFracLap::power_law_integral(N, s, beta);
}

/// u_lambda(r) = (lambda/r)^{N-2s} u(lambda^2/r); in log variables a reflection about log lambda.
inline RadialFunction kelvin_transform(const RadialFunction& u, double lambda) {
    if (!(lambda > 0.0)) throw DomainError("Kelvin transform needs lambda > 0");
    const FracHenonParams P = u.params;
    const double d = P.N - 2.0 * P.s;
    const double c = 2.0 * std::log(lambda);
    RadialFunction out;
    out.params = P;
    const std::size_t n = u.log_nodes.size();
    out.log_nodes.resize(n);
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = n - 1 - i;
        const double k = c - u.log_nodes[j];
        out.log_nodes[i] = k;
        out.values[i] = std::exp(d * (0.5 * c - k)) * u.values[j];
    }
    // u ~ a r^g at 0  ->  u_lambda ~ a lambda^{N-2s+2g} r^{-(N-2s)-g} at inf, and vice versa
    out.tail_inf = {u.tail0.coeff * std::pow(lambda, d + 2.0 * u.tail0.exponent), -d - u.tail0.exponent};
    out.tail0 = {u.tail_inf.coeff * std::pow(lambda, d + 2.0 * u.tail_inf.exponent), -d - u.tail_inf.exponent};
    auto base = u.eval;
    out.eval = [base, lambda, d](double r) { return std::pow(lambda / r, d) * base(lambda * lambda / r); };
    return out;
}

struct KelvinReport {
    double max_rel_err = 0.0;
    std::vector<double> lhs, rhs;
};

/// (-Delta)^s u_lambda (r) against (lambda/r)^{N+2s} (-Delta)^s u (lambda^2/r), direct mode.
inline KelvinReport kelvin_identity_check(const RadialFunction& u, double lambda, const std::vector<double>& radii) {
    const RadialFunction ul = kelvin_transform(u, lambda);
    const RadialFracLap op(u.params.N, u.params.s);
    const double e = u.params.N + 2.0 * u.params.s;
    KelvinReport rep;
    for (double r : radii) {
        const double l = op.direct(ul, r);
        const double rr = std::pow(lambda / r, e) * op.direct(u, lambda * lambda / r);
        rep.lhs.push_back(l);
        rep.rhs.push_back(rr);
        const double den = std::max(std::abs(rr), std::abs(l));
        rep.max_rel_err = std::max(rep.max_rel_err, den == 0.0 ? 0.0 : std::abs(l - rr) / den);
    }
    return rep;
}

/// u_mu(r) = mu^{(N-2s)/2} u(mu r), the critical scaling.
inline RadialFunction rescale(const RadialFunction& u, double mu) {
    if (!(mu > 0.0)) throw DomainError("rescale needs mu > 0");
    const double a = u.params.decay_rate();
    const double lm = std::log(mu);
    RadialFunction out = u;
    for (std::size_t i = 0; i < out.log_nodes.size(); ++i) {
        out.log_nodes[i] -= lm;
        out.values[i] *= std::pow(mu, a);
    }
    out.tail0.coeff *= std::pow(mu, a + u.tail0.exponent);
    out.tail_inf.coeff *= std::pow(mu, a + u.tail_inf.exponent);
    auto base = u.eval;
    out.eval = [base, mu, a](double r) { return std::pow(mu, a) * base(mu * r); };
    return out;
}

struct HenonResidualReport {
    double max_rel_err = 0.0;
    std::vector<double> radii;  ///< radii actually checked
    std::vector<double> rel_err;
};

/// |(-Delta)^s u - r^alpha u^p| / (r^alpha u^p) by direct quadrature. For alpha < 0 radii
/// below 0.1 are skipped (the weight is singular at the origin).
inline HenonResidualReport henon_residual(const RadialFunction& u, const std::vector<double>& radii) {
    const FracHenonParams& P = u.params;
    const RadialFracLap op(P.N, P.s);
    HenonResidualReport rep;
    for (double r : radii) {
        if (P.alpha < 0.0 && r < 0.1) continue;
        const double ur = u(r);
        const double rhs = std::pow(r, P.alpha) * std::pow(std::abs(ur), P.p_star);
        if (!(rhs > 0.0)) {
            std::ostringstream os;
            os << "relative Henon residual undefined: u(" << r << ") = " << ur;
            throw DomainError(os.str());
        }
        const double err = std::abs(op.direct(u, r) - rhs) / rhs;
        rep.radii.push_back(r);
        rep.rel_err.push_back(err);
        rep.max_rel_err = std::max(rep.max_rel_err, err);
    }
    return rep;
}

inline HenonResidualReport henon_residual(const Profile& profile, const std::vector<double>& radii) {
    const double L = profile.grid.L;
    for (double r : radii) {
        if (!(r > 0.0) || std::abs(std::log(r)) > 0.6 * L) {
            std::ostringstream os;
            os << "radius " << r << " outside [e^{-0.6L}, e^{0.6L}]";
            throw DomainError(os.str());
        }
    }
    if (profile.max_abs() == 0.0) throw DomainError("relative Henon residual undefined for the zero profile");
    return henon_residual(reconstruct_u(profile), radii);
}

struct RieszReport {
    std::vector<double> radii;
    std::vector<double> ratios;  ///< R(r) / u(r)
    double spread = 0.0;         ///< (max - min) / mean
    double mean_ratio = 0.0;
    double expected_ratio = 0.0; ///< inverse Riesz normalization
};

/// R(r) = int |y|^alpha u^p(y) |x-y|^{2s-N} dy, folded like the direct fractional Laplacian:
///   r^{alpha+2s} int_0^1 [x^{alpha+N-1} u(rx)^p + x^{-alpha-2s-1} u(r/x)^p] J_R(x) dx,
/// J_R with exponent (N-2s)/2. End pieces follow x^{alpha+N-1} at 0 and eps^{2s-1} at 1.
inline RieszReport riesz_consistency(const RadialFunction& u, const std::vector<double>& radii) {
    const FracHenonParams& P = u.params;
    const double qR = 0.5 * (P.N - 2.0 * P.s);
    const auto rule = detail::FoldedRule::make(P.N, qR, 53, 40);
    RieszReport rep;
    for (double r : radii) {
        if (P.alpha < 0.0 && r < 0.1) continue;
        const double k = std::log(r);
        if (!(r > 0.0) || k < u.kappa_min() + 2.0 || k > u.kappa_max() - 2.0)
            throw DomainError("Riesz radius outside the stored range");
        const double p = P.p_star, al = P.alpha, s = P.s;
        const int N = P.N;
        auto B = [&](double x, double) {
            return std::pow(x, al + N - 1.0) * std::pow(std::abs(u(r * x)), p) +
                   std::pow(x, -al - 2.0 * s - 1.0) * std::pow(std::abs(u(r / x)), p);
        };
        const double R = std::pow(r, al + 2.0 * s) * rule.integrate(B, al + N, 2.0 * s);
        const double ur = u(r);
        if (!(ur > 0.0)) throw DomainError("Riesz ratio undefined where u vanishes");
        rep.radii.push_back(r);
        rep.ratios.push_back(R / ur);
    }
    if (rep.ratios.empty()) throw DomainError("no admissible radii for the Riesz check");
    const auto [mn, mx] = std::minmax_element(rep.ratios.begin(), rep.ratios.end());
    double sum = 0.0;
    for (double x : rep.ratios) sum += x;
    rep.mean_ratio = sum / rep.ratios.size();
    rep.spread = (*mx - *mn) / rep.mean_ratio;
    rep.expected_ratio = 1.0 / SpectralConstants::compute(P.N, P.s).c_riesz;
    return rep;
}

inline RieszReport riesz_consistency(const Profile& profile, const std::vector<double>& radii) {
    return riesz_consistency(reconstruct_u(profile), radii);
}

struct DecayReport {
    double c1 = 0.0;  ///< min r^{N-2s} u on the window
    double c2 = 0.0;  ///< max r^{N-2s} u on the window
    double exponent_fit = 0.0;
    double window_lo = 0.0, window_hi = 0.0;
    double exponent0_fit = 0.0;  ///< log-slope of u on [e^{0.9 k_min}, 0.1]
    double window0_lo = 0.0, window0_hi = 0.0;
    bool ok = false;   ///< far-field exponent within 2% of 2s-N and c2/c1 < 1.5
    bool ok0 = false;  ///< |exponent0_fit| <= 0.02 (N-2s)
};

namespace detail {

inline double log_slope(const RadialFunction& u, double klo, double khi) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (std::size_t i = 0; i < u.log_nodes.size(); ++i) {
        const double k = u.log_nodes[i];
        if (k < klo || k > khi) continue;
        const double v = u.values[i];
        if (!(v >= 1e-300)) throw WindowUnderflowError("u underflows in the decay window");
        const double y = std::log(v);
        sx += k, sy += y, sxx += k * k, sxy += k * y;
        ++m;
    }
    if (m < 2) throw WindowUnderflowError("decay window holds fewer than two nodes");
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace detail

inline DecayReport decay_bounds(const RadialFunction& u) {
    const FracHenonParams& P = u.params;
    const double d = P.N - 2.0 * P.s;
    DecayReport rep;
    const double klo = std::log(10.0), khi = 0.9 * u.kappa_max();
    if (!(khi > klo)) throw WindowUnderflowError("no tail data for r >= 10");
    rep.window_lo = 10.0;
    rep.window_hi = std::exp(khi);
    rep.exponent_fit = detail::log_slope(u, klo, khi);
    rep.c1 = std::numeric_limits<double>::infinity();
    rep.c2 = 0.0;
    for (std::size_t i = 0; i < u.log_nodes.size(); ++i) {
        const double k = u.log_nodes[i];
        if (k < klo || k > khi) continue;
        const double w = std::exp(d * k) * u.values[i];
        rep.c1 = std::min(rep.c1, w);
        rep.c2 = std::max(rep.c2, w);
    }
    rep.ok = std::abs(rep.exponent_fit + d) <= 0.02 * d && rep.c2 / rep.c1 < 1.5;

    const double k0lo = 0.9 * u.kappa_min(), k0hi = std::log(0.1);
    if (k0hi > k0lo) {
        rep.window0_lo = std::exp(k0lo);
        rep.window0_hi = 0.1;
        rep.exponent0_fit = detail::log_slope(u, k0lo, k0hi);
        rep.ok0 = std::abs(rep.exponent0_fit) <= 0.02 * d;
    }
    return rep;
}

}  // namespace fhenon
