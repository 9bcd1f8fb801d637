#pragma once

// Even-constrained damped Newton for T v + A v = v^p, with continuation in alpha from the
// alpha = 0 bubble C (2 cosh k)^{-(N-2s)/2}.

#include <boost/math/tools/roots.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "fhenon/errors.hpp"
#include "fhenon/operator.hpp"
#include "fhenon/params.hpp"

namespace fhenon {

struct SolveOptions {
    double newton_tol = 1e-10;
    int max_iter = 50;
    double backtrack = 0.5;
    double min_step = 0x1p-20;
    double alpha_step = 0.25;
    bool enforce_even = true;
    /// Re-solve on [-2L, 2L] and record the change on the original nodes.
    bool check_L_refinement = false;

    void validate() const {
        if (!(newton_tol > 0.0)) throw DomainError("newton_tol must be positive");
        if (!(alpha_step > 0.0 && alpha_step <= 0.5)) throw DomainError("alpha_step must lie in (0, 0.5]");
        if (max_iter < 1) throw DomainError("max_iter must be at least 1");
    }
};

struct DecayFit {
    double rate = 0.0;  ///< fitted d log v / d|k|, expected -(N-2s)/2
    bool ok = false;
    double window_lo = 0.0, window_hi = 0.0;
};

struct SolveReport {
    bool converged = false;
    int iterations = 0;
    double final_residual = 0.0;
    double energy = 0.0;
    double decay_rate_fit = std::numeric_limits<double>::quiet_NaN();
    double decay_window_lo = 0.0, decay_window_hi = 0.0;
    bool decay_ok = false;
    /// no value below -1e-8 max|v|
    bool positivity = false;
    bool zero_solution = false;
    std::optional<double> L_refinement_delta;
    std::vector<double> residual_history;
    std::vector<double> alpha_path;
};

/// Least-squares slope of log v against |k| on |k| in [0.6 L, 0.9 L], averaged over both sides.
inline DecayFit decay_check(const Profile& profile) {
    const Grid1D& g = profile.grid;
    DecayFit fit;
    fit.window_lo = 0.6 * g.L;
    fit.window_hi = 0.9 * g.L;
    double slopes[2];
    for (int side = 0; side < 2; ++side) {
        std::vector<double> xs, ys;
        for (std::size_t i = 0; i < g.n; ++i) {
            const double k = g.node(i);
            const double ak = std::abs(k);
            if ((side == 0 ? k <= 0.0 : k >= 0.0) || ak < fit.window_lo || ak > fit.window_hi) continue;
            const double v = profile.values[i];
            if (!(v >= 1e-14)) {
                std::ostringstream os;
                os << "profile value " << v << " at k=" << k << " underflows the decay window";
                throw WindowUnderflowError(os.str());
            }
            xs.push_back(ak);
            ys.push_back(std::log(v));
        }
        if (xs.size() < 2) throw WindowUnderflowError("decay window holds fewer than two nodes");
        double mx = 0.0, my = 0.0;
        for (std::size_t j = 0; j < xs.size(); ++j) mx += xs[j], my += ys[j];
        mx /= xs.size();
        my /= xs.size();
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t j = 0; j < xs.size(); ++j) {
            sxy += (xs[j] - mx) * (ys[j] - my);
            sxx += (xs[j] - mx) * (xs[j] - mx);
        }
        slopes[side] = sxy / sxx;
    }
    fit.rate = 0.5 * (slopes[0] + slopes[1]);
    const double a = profile.params.decay_rate();
    fit.ok = std::abs(fit.rate + a) <= 0.02 * a;
    return fit;
}

namespace detail {

/// (2 cosh k)^{-(N-2s)/2} scaled so the discrete residual vanishes at k = 0.
inline Profile matched_cosh_profile(const FracHenonParams& params, const ReducedOperator& op) {
    const Grid1D& g = op.grid();
    const double a = params.decay_rate();
    std::vector<double> shape(g.n);
    for (std::size_t i = 0; i < g.n; ++i) shape[i] = std::pow(2.0 * std::cosh(g.node(i)), -a);
    const std::size_t c = g.center();
    const double lin = op.apply_T(shape)[c] + op.A() * shape[c];
    const double p = params.p_star;
    auto center_residual = [&](double C) { return C * lin - std::pow(C * shape[c], p); };

    constexpr double c_max = 1e6;
    double lo = 1e-12, hi = 1.0;
    if (!(center_residual(lo) > 0.0)) throw RootFindingError("no sign change: center residual is not positive near C = 0");
    while (center_residual(hi) > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > c_max) throw RootFindingError("no sign change of the center residual for C in (0, 1e6]");
    }
    std::uintmax_t max_iter = 200;
    const auto bracket = boost::math::tools::toms748_solve(center_residual, lo, hi,
                                                           boost::math::tools::eps_tolerance<double>(52), max_iter);
    const double C = 0.5 * (bracket.first + bracket.second);

    Profile prof;
    prof.grid = g;
    prof.params = params;
    prof.even = true;
    prof.values.resize(g.n);
    for (std::size_t i = 0; i < g.n; ++i) prof.values[i] = C * shape[i];
    return prof;
}

}  // namespace detail

/// Emden-Fowler image C (2 cosh k)^{-(N-2s)/2} of the alpha = 0 bubble (lambda = 1).
inline Profile alpha0_profile(int N, double s, const ReducedOperator& op) {
    return detail::matched_cosh_profile(FracHenonParams::make(N, s, 0.0), op);
}

inline Profile initial_guess(const FracHenonParams& params, const ReducedOperator& op) {
    return detail::matched_cosh_profile(params, op);
}

inline std::pair<Profile, SolveReport> newton_solve(const Profile& guess, const ReducedOperator& op,
                                                    const SolveOptions& opts = {}) {
    opts.validate();
    const Grid1D& g = op.grid();
    op.check_size(guess.values);
    const double p = guess.params.p_star;
    const double alpha = guess.params.alpha;
    const std::size_t n = g.n, c = g.center();

    std::vector<double> v = guess.values;
    if (opts.enforce_even) {
        const double scale = std::max(guess.max_abs(), 1e-300);
        for (std::size_t i = 0; i < c; ++i) {
            if (std::abs(v[i] - v[g.mirror(i)]) > 1e-12 * scale)
                throw DomainError("newton_solve with enforce_even needs an even initial guess");
            v[i] = v[g.mirror(i)];
        }
    }

    auto max_norm = [](const std::vector<double>& f) {
        double m = 0.0;
        for (double x : f) m = std::max(m, std::abs(x));
        return m;
    };
    auto l2 = [](const std::vector<double>& f) {
        double m = 0.0;
        for (double x : f) m += x * x;
        return std::sqrt(m);
    };

    SolveReport rep;
    std::vector<double> F = op.residual(v, p);
    for (int it = 0;; ++it) {
        const double norm = max_norm(F);
        rep.residual_history.push_back(norm);
        if (norm <= opts.newton_tol) {
            rep.iterations = it;
            rep.final_residual = norm;
            break;
        }
        if (it >= opts.max_iter) {
            std::ostringstream os;
            os << "residual " << norm << " after " << it << " iterations (tol " << opts.newton_tol << ")";
            throw SolverError(SolverFailure::MaxIterExceeded, alpha, os.str());
        }

        const Eigen::MatrixXd J = op.jacobian(v, p);
        Eigen::VectorXd dv(static_cast<Eigen::Index>(n));
        if (opts.enforce_even) {
            const auto m = static_cast<Eigen::Index>(n - c);
            Eigen::MatrixXd Jr(m, m);
            Eigen::VectorXd Fr(m);
            for (Eigen::Index a = 0; a < m; ++a) {
                const auto i = static_cast<Eigen::Index>(c) + a;
                Fr(a) = F[static_cast<std::size_t>(i)];
                for (Eigen::Index b = 0; b < m; ++b) {
                    const auto j = static_cast<Eigen::Index>(c) + b;
                    Jr(a, b) = J(i, j) + (b > 0 ? J(i, static_cast<Eigen::Index>(g.mirror(static_cast<std::size_t>(j)))) : 0.0);
                }
            }
            Eigen::PartialPivLU<Eigen::MatrixXd> lu(Jr);
            const double rcond = lu.rcond();
            if (!(rcond * 1e12 >= 1.0)) {
                std::ostringstream os;
                os << "reduced Jacobian condition estimate " << 1.0 / rcond << " exceeds 1e12";
                throw SolverError(SolverFailure::SingularJacobian, alpha, os.str());
            }
            const Eigen::VectorXd dr = lu.solve(-Fr);
            for (Eigen::Index a = 0; a < m; ++a) {
                const auto i = c + static_cast<std::size_t>(a);
                dv(static_cast<Eigen::Index>(i)) = dr(a);
                dv(static_cast<Eigen::Index>(g.mirror(i))) = dr(a);
            }
        } else {
            Eigen::PartialPivLU<Eigen::MatrixXd> lu(J);
            const double rcond = lu.rcond();
            if (!(rcond * 1e12 >= 1.0)) {
                std::ostringstream os;
                os << "Jacobian condition estimate " << 1.0 / rcond << " exceeds 1e12";
                throw SolverError(SolverFailure::SingularJacobian, alpha, os.str());
            }
            dv = lu.solve(-Eigen::Map<const Eigen::VectorXd>(F.data(), static_cast<Eigen::Index>(n)));
        }

        const double merit = l2(F);
        double step = 1.0;
        std::vector<double> trial(n), Ft;
        for (;;) {
            for (std::size_t i = 0; i < n; ++i) trial[i] = v[i] + step * dv(static_cast<Eigen::Index>(i));
            Ft = op.residual(trial, p);
            if (l2(Ft) <= (1.0 - 1e-4 * step) * merit) break;
            step *= opts.backtrack;
            if (step < opts.min_step) {
                std::ostringstream os;
                os << "no decrease of the residual for steps down to " << opts.min_step << " (residual " << norm
                   << ")";
                throw SolverError(SolverFailure::LineSearchFailed, alpha, os.str());
            }
        }
        v.swap(trial);
        F.swap(Ft);
    }

    double vmax = 0.0, vmin = 0.0;
    for (double x : v) vmax = std::max(vmax, x), vmin = std::min(vmin, x);
    rep.zero_solution = vmax == 0.0 && vmin == 0.0;
    if (vmin < -1e-8 * vmax) {
        std::ostringstream os;
        os << "converged profile has min " << vmin << " against max " << vmax;
        throw SolverError(SolverFailure::NegativeSolution, alpha, os.str());
    }
    rep.positivity = true;
    rep.converged = true;
    rep.energy = op.energy(v, p);
    rep.alpha_path.push_back(alpha);

    Profile out;
    out.grid = g;
    out.params = guess.params;
    out.even = opts.enforce_even;
    out.values = std::move(v);
    if (!rep.zero_solution) {
        try {
            const DecayFit d = decay_check(out);
            rep.decay_rate_fit = d.rate;
            rep.decay_window_lo = d.window_lo;
            rep.decay_window_hi = d.window_hi;
            rep.decay_ok = d.ok;
        } catch (const WindowUnderflowError&) {
            // decay fit unavailable when the tail underflows; the solve itself stands
        }
    }
    return {std::move(out), std::move(rep)};
}

namespace detail {

/// Rescale a warm start so its center residual vanishes for exponent p.
inline Profile rematch_amplitude(Profile prof, const ReducedOperator& op) {
    const std::size_t c = op.grid().center();
    const double lin = op.apply_T(prof.values)[c] + op.A() * prof.values[c];
    const double vc = prof.values[c];
    const double p = prof.params.p_star;
    if (lin > 0.0 && vc > 0.0) {
        const double lambda = std::pow(lin / std::pow(vc, p), 1.0 / (p - 1.0));
        for (double& x : prof.values) x *= lambda;
    }
    return prof;
}

}  // namespace detail

/// Continuation in alpha from the alpha = 0 bubble up (or down) to params.alpha.
inline std::pair<Profile, SolveReport> solve_bubble(const FracHenonParams& params, const ReducedOperator& op,
                                                    const SolveOptions& opts = {}) {
    opts.validate();
    const AdmissibilityClass cls = classify_admissibility(params.N, params.s, params.alpha);
    if (cls != AdmissibilityClass::ClassicalRange && cls != AdmissibilityClass::WeakRange)
        throw AdmissibilityError(admissibility_message(params.N, params.s, params.alpha));

    auto [prof, rep] = newton_solve(initial_guess(params.with_alpha(0.0), op), op, opts);
    SolveReport total = rep;
    total.alpha_path = {0.0};
    double alpha = 0.0;
    const double target = params.alpha;
    const double dir = target >= 0.0 ? 1.0 : -1.0;
    double step = opts.alpha_step;
    int halvings = 0;
    while (alpha != target) {
        double next = alpha + dir * step;
        if (dir * (next - target) > 0.0 || std::abs(next - target) < 1e-12) next = target;
        try {
            Profile warm = prof;
            warm.params = params.with_alpha(next);
            auto [p2, r2] = newton_solve(detail::rematch_amplitude(std::move(warm), op), op, opts);
            prof = std::move(p2);
            total.iterations += r2.iterations;
            total.residual_history.insert(total.residual_history.end(), r2.residual_history.begin(),
                                          r2.residual_history.end());
            total.final_residual = r2.final_residual;
            total.energy = r2.energy;
            total.decay_rate_fit = r2.decay_rate_fit;
            total.decay_window_lo = r2.decay_window_lo;
            total.decay_window_hi = r2.decay_window_hi;
            total.decay_ok = r2.decay_ok;
            total.positivity = r2.positivity;
            total.zero_solution = r2.zero_solution;
            total.alpha_path.push_back(next);
            alpha = next;
        } catch (const SolverError&) {
            if (++halvings > 4) throw;
            step *= 0.5;
        }
    }

    if (opts.check_L_refinement) {
        const Grid1D wide = Grid1D::make(2.0 * op.grid().L, op.grid().h);
        const ReducedOperator wide_op(wide, op.table());
        SolveOptions o2 = opts;
        o2.check_L_refinement = false;
        const auto [pw, rw] = solve_bubble(params, wide_op, o2);
        const std::size_t offset = (wide.n - op.grid().n) / 2;
        double delta = 0.0;
        for (std::size_t i = 0; i < op.grid().n; ++i)
            delta = std::max(delta, std::abs(pw.values[i + offset] - prof.values[i]));
        total.L_refinement_delta = delta;
    }
    return {std::move(prof), std::move(total)};
}

/// Overloads that build the kernel table themselves (default horizon 30, resolution 0.01).
inline Profile alpha0_profile(int N, double s, const Grid1D& grid, double t_max = 30.0) {
    const KernelTable table = build_table(FracHenonParams::make(N, s, 0.0), t_max);
    return alpha0_profile(N, s, ReducedOperator(grid, table));
}

inline std::pair<Profile, SolveReport> newton_solve(const Profile& guess, const KernelTable& table,
                                                    const SolveOptions& opts = {}) {
    return newton_solve(guess, ReducedOperator(guess.grid, table), opts);
}

inline std::pair<Profile, SolveReport> solve_bubble(const FracHenonParams& params, const Grid1D& grid,
                                                    const SolveOptions& opts = {}, double t_max = 30.0) {
    const KernelTable table = build_table(params, t_max);
    return solve_bubble(params, ReducedOperator(grid, table), opts);
}

}  // namespace fhenon
