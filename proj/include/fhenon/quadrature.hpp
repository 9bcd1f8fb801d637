#pragma once

// Thin wrappers over Boost.Math quadrature used across the library.

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "fhenon/errors.hpp"

namespace fhenon::quad {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};

namespace detail {

template <unsigned Points>
GaussRule expand_rule() {
    using rule = boost::math::quadrature::gauss<double, Points>;
    const auto& a = rule::abscissa();
    const auto& w = rule::weights();
    GaussRule g;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) {
            g.x.push_back(0.0);
            g.w.push_back(w[i]);
            continue;
        }
        g.x.push_back(-a[i]);
        g.w.push_back(w[i]);
        g.x.push_back(a[i]);
        g.w.push_back(w[i]);
    }
    return g;
}

}  // namespace detail

inline const GaussRule& gauss10() {
    static const GaussRule r = detail::expand_rule<10>();
    return r;
}

inline const GaussRule& gauss20() {
    static const GaussRule r = detail::expand_rule<20>();
    return r;
}

/// Fixed Gauss-Legendre rule mapped to [a, b].
template <class F>
double fixed(const GaussRule& rule, F&& f, double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) sum += rule.w[i] * f(mid + half * rule.x[i]);
    return half * sum;
}

struct AdaptiveOptions {
    double rel_tol = 1e-12;
    /// Maximum number of subintervals kept by the global adaptive scheme.
    unsigned max_intervals = 4000;
    /// Absolute error accepted regardless of the magnitude of the integral.
    double abs_floor = 1e-300;
};

namespace detail {

struct Segment {
    double a, b, value, error;
};

/// Gauss-Kronrod 15/7 on [a, b]; error is |K15 - G7|.
template <class F>
Segment gk15(F& f, double a, double b) {
    using kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
    using gauss = boost::math::quadrature::gauss<double, 7>;
    const auto& xk = kronrod::abscissa();
    const auto& wk = kronrod::weights();
    const auto& wg = gauss::weights();
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    const double fc = f(mid);
    double k = wk[0] * fc, g = wg[0] * fc;
    for (std::size_t i = 1; i < xk.size(); ++i) {
        const double sum = f(mid - half * xk[i]) + f(mid + half * xk[i]);
        k += wk[i] * sum;
        // Gauss nodes are the even-indexed Kronrod abscissae
        if (i % 2 == 0) g += wg[i / 2] * sum;
    }
    return {a, b, half * k, std::abs(half * (k - g))};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod on a finite interval: the subinterval with the largest
/// error estimate is bisected until the summed estimate meets the tolerance. Throws
/// QuadratureError when the interval budget is exhausted first.
template <class F>
double adaptive(F&& f, double a, double b, const AdaptiveOptions& opts = {}) {
    if (a == b) return 0.0;
    auto cmp = [](const detail::Segment& x, const detail::Segment& y) { return x.error < y.error; };
    std::vector<detail::Segment> heap;
    heap.push_back(detail::gk15(f, a, b));
    double value = heap.front().value, error = heap.front().error;
    while (!(error <= std::max(opts.rel_tol * std::abs(value), opts.abs_floor))) {
        if (heap.size() >= opts.max_intervals || !std::isfinite(value)) {
            std::ostringstream os;
            os << "adaptive quadrature on [" << a << ", " << b << "] did not converge: error estimate "
               << error << " for value " << value;
            throw QuadratureError(os.str());
        }
        std::pop_heap(heap.begin(), heap.end(), cmp);
        const detail::Segment worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // interval cannot be split further in double precision
            heap.push_back({worst.a, worst.b, worst.value, 0.0});
            std::push_heap(heap.begin(), heap.end(), cmp);
            error -= worst.error;
            continue;
        }
        const detail::Segment left = detail::gk15(f, worst.a, mid);
        const detail::Segment right = detail::gk15(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end(), cmp);
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end(), cmp);
        // resum occasionally so the running totals do not drift
        if (heap.size() % 64 == 0) {
            value = 0.0, error = 0.0;
            for (const auto& seg : heap) value += seg.value, error += seg.error;
        }
    }
    // final sum in a fixed order
    std::sort(heap.begin(), heap.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
    double total = 0.0;
    for (const auto& seg : heap) total += seg.value;
    return total;
}

}  // namespace fhenon::quad
