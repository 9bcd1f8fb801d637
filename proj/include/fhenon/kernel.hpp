#pragma once

// One-dimensional kernel K(t) of the Emden-Fowler reduced operator:
//
//   K(t) = a_{N,s} e^{-t(N+2s)/2} int_{S^{N-1}} |1 + e^{-2t} - 2 e^{-t} <theta, sigma>|^{-(N+2s)/2} dsigma
//        = a_{N,s} |S^{N-2}| 2^{-(N+2s)/2} int_0^pi sin^{N-2}(y) (cosh t - cos y)^{-(N+2s)/2} dy.
//
// K is even, positive, decreasing on (0, inf), K(t) ~ kappa0 t^{-1-2s} at 0 and
// K(t) ~ c_inf e^{-t(N+2s)/2} at infinity.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "fhenon/errors.hpp"
#include "fhenon/params.hpp"
#include "fhenon/quadrature.hpp"

namespace fhenon {

namespace detail {

/// int_0^pi sin^{N-2}(y) (cosh t - cos y)^{-e} dy for N >= 2, t > 0.
///
/// cosh t - cos y = 2 (sigma^2 + sin^2(y/2)) with sigma = sinh(t/2). On [0, pi/2] the
/// substitution sin(y/2) = sigma sinh(xi) resolves the peak of width ~t at y = 0.
inline double angular_integral(int N, double t, double e) {
    const double sigma = std::sinh(0.5 * t);
    const int m = N - 2;
    const quad::AdaptiveOptions opts{1e-13};

    auto near = [&](double xi) {
        const double sh = sigma * std::sinh(xi);
        const double c = std::sqrt(std::max(0.0, 1.0 - sh * sh));
        const double ch = std::cosh(xi);
        const double base = 2.0 * sigma * sigma * ch * ch;
        double v = std::pow(base, -e) * 2.0 * sigma * ch / c;
        if (m > 0) v *= std::pow(2.0 * sh * c, m);
        return v;
    };
    const double xi_max = std::asinh(std::sin(0.25 * std::numbers::pi) / sigma);
    double total = 0.0;
    double lo = 0.0;
    for (double mark : {1.0, 4.0, 10.0}) {
        const double hi = std::min(mark, xi_max);
        if (hi > lo) total += quad::adaptive(near, lo, hi, opts);
        lo = std::max(lo, hi);
    }
    if (xi_max > lo) total += quad::adaptive(near, lo, xi_max, opts);

    auto far = [&](double y) {
        const double sy = std::sin(0.5 * y);
        double v = std::pow(2.0 * (sigma * sigma + sy * sy), -e);
        if (m > 0) v *= std::pow(std::sin(y), m);
        return v;
    };
    total += quad::adaptive(far, 0.5 * std::numbers::pi, std::numbers::pi, opts);
    return total;
}

}  // namespace detail

inline double kernel_K(double t, const FracHenonParams& params) {
    if (t == 0.0 || !std::isfinite(t)) throw DomainError("kernel K(t) is singular at t = 0");
    t = std::abs(t);
    const int N = params.N;
    const double s = params.s;
    const double a = normalization_a_Ns(N, s);
    if (N == 1) {
        const double q1 = 0.5 + s;
        const double sh = std::sinh(0.5 * t);
        return a * (std::pow(4.0 * sh * sh, -q1) + std::pow(2.0 * (std::cosh(t) + 1.0), -q1));
    }
    const double q = 0.5 * (N + 2.0 * s);
    return a * sphere_measure(N - 2) * std::pow(2.0, -q) * detail::angular_integral(N, t, q);
}

/// dK/dt for t > 0.
inline double kernel_K_derivative(double t, const FracHenonParams& params) {
    if (t == 0.0) throw DomainError("kernel derivative is singular at t = 0");
    const double sign = t < 0.0 ? -1.0 : 1.0;
    t = std::abs(t);
    const int N = params.N;
    const double s = params.s;
    const double a = normalization_a_Ns(N, s);
    if (N == 1) {
        const double q1 = 0.5 + s;
        const double sh = std::sinh(0.5 * t);
        const double d = -q1 * 2.0 * std::sinh(t) *
                         (std::pow(4.0 * sh * sh, -q1 - 1.0) + std::pow(2.0 * (std::cosh(t) + 1.0), -q1 - 1.0));
        return sign * a * d;
    }
    const double q = 0.5 * (N + 2.0 * s);
    return sign * a * sphere_measure(N - 2) * std::pow(2.0, -q) * (-q * std::sinh(t)) *
           detail::angular_integral(N, t, q + 1.0);
}

/// kappa0 = lim_{t->0} t^{1+2s} K(t), by Richardson extrapolation in t^2 over t = 1e-2, 1e-3, 1e-4.
inline double singularity_coefficient(const FracHenonParams& params) {
    const double e = 1.0 + 2.0 * params.s;
    auto g = [&](double t) { return std::pow(t, e) * kernel_K(t, params); };
    const double g2 = g(1e-2), g3 = g(1e-3), g4 = g(1e-4);
    const double r1 = (100.0 * g3 - g2) / 99.0;
    const double r2 = (100.0 * g4 - g3) / 99.0;
    if (!(std::abs(r1 - r2) <= 1e-3 * std::abs(r2))) {
        std::ostringstream os;
        os << "singular coefficient extrapolation unstable: " << r1 << " vs " << r2;
        throw EstimateError(os.str());
    }
    return r2;
}

struct TailFit {
    double c_inf = 0.0;
    /// max |log(e^{qt} K(t)) - log c_inf| over the fit window
    double residual = 0.0;
    /// slope of log(e^{qt} K(t)) fitted freely; zero for an exact exponential tail
    double slope_defect = 0.0;
};

/// Fit of c_inf = lim e^{t(N+2s)/2} K(t) on t in [8, 16].
inline TailFit tail_fit(const FracHenonParams& params) {
    const double q = 0.5 * (params.N + 2.0 * params.s);
    constexpr int samples = 9;
    std::array<double, samples> ts{}, ys{};
    double mean_y = 0.0, mean_t = 0.0;
    for (int j = 0; j < samples; ++j) {
        ts[j] = 8.0 + j;
        ys[j] = std::log(kernel_K(ts[j], params)) + q * ts[j];
        mean_y += ys[j] / samples;
        mean_t += ts[j] / samples;
    }
    double sty = 0.0, stt = 0.0, res = 0.0;
    for (int j = 0; j < samples; ++j) {
        sty += (ts[j] - mean_t) * (ys[j] - mean_y);
        stt += (ts[j] - mean_t) * (ts[j] - mean_t);
        res = std::max(res, std::abs(ys[j] - mean_y));
    }
    TailFit fit{std::exp(mean_y), res, sty / stt};
    if (!(fit.residual <= 1e-3)) {
        std::ostringstream os;
        os << "exponential tail fit residual " << fit.residual << " exceeds 1e-3";
        throw EstimateError(os.str());
    }
    return fit;
}

inline double tail_coefficient(const FracHenonParams& params) { return tail_fit(params).c_inf; }

/// Tabulated K on a graded mesh: logarithmic on [t_min, 1], uniform on [1, t_max].
/// Interpolation is monotone cubic Hermite in (log t, log K) using exact slopes, limited
/// Fritsch-Carlson style; beyond t_max the tail law c_inf e^{-t(N+2s)/2} is used.
class KernelTable {
public:
    FracHenonParams params;
    std::vector<double> nodes;
    std::vector<double> values;
    double kappa0 = 0.0;
    double c_inf = 0.0;
    double h0 = 0.5;
    double t_max = 30.0;
    double t_min = 1e-6;
    double resolution = 0.01;

    double decay_exponent() const { return 0.5 * (params.N + 2.0 * params.s); }

    double operator()(double t) const {
        if (t == 0.0 || !std::isfinite(t)) throw DomainError("kernel table queried at t = 0");
        t = std::abs(t);
        const double e = 1.0 + 2.0 * params.s;
        if (t < t_min) return g_min_ * std::pow(t, -e);
        if (t > t_max) return c_inf * std::exp(-decay_exponent() * t);
        const double x = std::log(t);
        std::size_t j;
        if (t < 1.0) {
            j = static_cast<std::size_t>((x - log_t_min_) / dlog_);
            j = std::min(j, n_log_ - 1);
        } else {
            j = n_log_ + static_cast<std::size_t>((t - 1.0) / dlin_);
            j = std::min(j, nodes.size() - 2);
        }
        // guard against rounding at segment boundaries
        while (j > 0 && x < xs_[j]) --j;
        while (j + 2 < nodes.size() && x > xs_[j + 1]) ++j;
        const double hx = xs_[j + 1] - xs_[j];
        const double u = (x - xs_[j]) / hx;
        const double u2 = u * u, u3 = u2 * u;
        const double y = (2 * u3 - 3 * u2 + 1) * ys_[j] + (u3 - 2 * u2 + u) * hx * dys_[j] +
                         (-2 * u3 + 3 * u2) * ys_[j + 1] + (u3 - u2) * hx * dys_[j + 1];
        return std::exp(y);
    }

    /// Integral of K over [t, inf) using the tail law; valid for t >= t_max.
    double tail_integral(double t) const {
        const double q = decay_exponent();
        return c_inf * std::exp(-q * t) / q;
    }

    friend KernelTable build_table(const FracHenonParams& params, double t_max, double resolution);

private:
    std::vector<double> xs_, ys_, dys_;
    std::size_t n_log_ = 0;
    double log_t_min_ = 0.0, dlog_ = 0.0, dlin_ = 0.0, g_min_ = 0.0;
};

inline KernelTable build_table(const FracHenonParams& params, double t_max = 30.0, double resolution = 0.01) {
    if (!(t_max > 1.0) || !(resolution > 0.0 && resolution <= 0.1)) {
        throw DomainError("kernel table needs t_max > 1 and 0 < resolution <= 0.1");
    }
    KernelTable tab;
    tab.params = params;
    tab.t_max = t_max;
    tab.resolution = resolution;
    tab.log_t_min_ = std::log(tab.t_min);
    tab.n_log_ = static_cast<std::size_t>(std::ceil(-tab.log_t_min_ / resolution));
    tab.dlog_ = -tab.log_t_min_ / static_cast<double>(tab.n_log_);
    const auto n_lin = static_cast<std::size_t>(std::ceil((t_max - 1.0) / resolution));
    tab.dlin_ = (t_max - 1.0) / static_cast<double>(n_lin);

    for (std::size_t j = 0; j < tab.n_log_; ++j) tab.nodes.push_back(std::exp(tab.log_t_min_ + j * tab.dlog_));
    for (std::size_t j = 0; j <= n_lin; ++j) tab.nodes.push_back(1.0 + j * tab.dlin_);

    const std::size_t n = tab.nodes.size();
    tab.values.resize(n);
    tab.xs_.resize(n);
    tab.ys_.resize(n);
    tab.dys_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double t = tab.nodes[j];
        const double k = kernel_K(t, params);
        tab.values[j] = k;
        tab.xs_[j] = std::log(t);
        tab.ys_[j] = std::log(k);
        tab.dys_[j] = t * kernel_K_derivative(t, params) / k;
    }
    // Fritsch-Carlson limiter on the exact slopes: keeps every cell monotone
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double secant = (tab.ys_[j + 1] - tab.ys_[j]) / (tab.xs_[j + 1] - tab.xs_[j]);
        if (!(secant < 0.0)) throw EstimateError("kernel table is not strictly decreasing");
        double a = tab.dys_[j] / secant, b = tab.dys_[j + 1] / secant;
        if (a < 0.0) tab.dys_[j] = 0.0, a = 0.0;
        if (b < 0.0) tab.dys_[j + 1] = 0.0, b = 0.0;
        const double r2 = a * a + b * b;
        if (r2 > 9.0) {
            const double tau = 3.0 / std::sqrt(r2);
            tab.dys_[j] = tau * a * secant;
            tab.dys_[j + 1] = tau * b * secant;
        }
    }
    tab.g_min_ = tab.values.front() * std::pow(tab.t_min, 1.0 + 2.0 * params.s);
    tab.kappa0 = singularity_coefficient(params);
    tab.c_inf = tail_coefficient(params);
    return tab;
}

}  // namespace fhenon
