#pragma once

// Problem parameters for (-Delta)^s u = |x|^alpha u^p in R^N, derived exponents,
// admissibility ranges and the closed-form spectral constants.

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "fhenon/errors.hpp"

namespace fhenon {

namespace detail {

inline void check_order_and_dimension(int N, double s) {
    if (!(s > 0.0 && s < 1.0)) {
        std::ostringstream os;
        os << "fractional order s=" << s << " must lie in (0,1)";
        throw DomainError(os.str());
    }
    if (N < 1 || !(N > 2.0 * s)) {
        std::ostringstream os;
        os << "dimension N=" << N << " must satisfy N >= 1 and N > 2s (2s=" << 2.0 * s << ")";
        throw DomainError(os.str());
    }
}

}  // namespace detail

/// 1/Gamma(x), exactly zero at the poles 0, -1, -2, ...
inline double reciprocal_gamma(double x) {
    if (x <= 0.0 && x == std::floor(x)) return 0.0;
    return 1.0 / std::tgamma(x);
}

/// Surface measure of the unit sphere S^k in R^{k+1}; |S^0| = 2 counts the two points.
inline double sphere_measure(int k) {
    const double d = 0.5 * (k + 1);
    return 2.0 * std::pow(std::numbers::pi, d) / std::tgamma(d);
}

inline double critical_exponent(int N, double s, double alpha) {
    detail::check_order_and_dimension(N, s);
    return (N + 2.0 * alpha + 2.0 * s) / (N - 2.0 * s);
}

struct FracHenonParams {
    int N = 3;
    double s = 0.5;
    double alpha = 0.0;
    double p_star = 2.0;  ///< (N + 2 alpha + 2s) / (N - 2s)
    double beta = -1.0;   ///< -(N - 2s) / 2

    /// Validates N >= 1, 0 < s < 1, N > 2s and alpha > -2s.
    static FracHenonParams make(int N, double s, double alpha) {
        detail::check_order_and_dimension(N, s);
        if (!(alpha > -2.0 * s)) {
            std::ostringstream os;
            os << "weight exponent alpha=" << alpha << " must exceed -2s=" << -2.0 * s;
            throw DomainError(os.str());
        }
        FracHenonParams p;
        p.N = N;
        p.s = s;
        p.alpha = alpha;
        p.p_star = critical_exponent(N, s, alpha);
        p.beta = -0.5 * (N - 2.0 * s);
        return p;
    }

    /// Same (N, s) with a different weight exponent.
    FracHenonParams with_alpha(double a) const { return make(N, s, a); }

    /// (N - 2s) / 2, the decay rate of the Emden-Fowler profile.
    double decay_rate() const { return -beta; }
};

enum class AdmissibilityClass { ClassicalRange, WeakRange, SupercriticalReduction, NoSolutionRange };

inline const char* to_string(AdmissibilityClass c) {
    switch (c) {
        case AdmissibilityClass::ClassicalRange: return "ClassicalRange";
        case AdmissibilityClass::WeakRange: return "WeakRange";
        case AdmissibilityClass::SupercriticalReduction: return "SupercriticalReduction";
        case AdmissibilityClass::NoSolutionRange: return "NoSolutionRange";
    }
    return "Unknown";
}

/// Upper admissible weight exponent 2s(N-1)/(1-2s) for s < 1/2; +inf otherwise.
inline double supercritical_threshold(int N, double s) {
    if (s >= 0.5) return INFINITY;
    return 2.0 * s * (N - 1) / (1.0 - 2.0 * s);
}

inline AdmissibilityClass classify_admissibility(int N, double s, double alpha) {
    detail::check_order_and_dimension(N, s);
    if (alpha <= -2.0 * s) return AdmissibilityClass::NoSolutionRange;
    if (alpha < 0.0) return AdmissibilityClass::WeakRange;
    if (alpha == 0.0) return AdmissibilityClass::ClassicalRange;
    // ties at the threshold are supercritical: the existence range is open
    if (s >= 0.5 || alpha < supercritical_threshold(N, s)) return AdmissibilityClass::ClassicalRange;
    return AdmissibilityClass::SupercriticalReduction;
}

/// Human-readable reason for a rejected class, citing the violated range.
inline std::string admissibility_message(int N, double s, double alpha) {
    std::ostringstream os;
    switch (classify_admissibility(N, s, alpha)) {
        case AdmissibilityClass::NoSolutionRange:
            os << "alpha=" << alpha << " violates alpha > -2s (-2s=" << -2.0 * s
               << "): for alpha <= -2s there is no nonnegative locally bounded solution";
            break;
        case AdmissibilityClass::SupercriticalReduction:
            os << "alpha=" << alpha << " violates α<2s(N−1)/(1−2s) (bound " << supercritical_threshold(N, s)
               << " for s=" << s << " < 1/2): the reduced one-dimensional problem is supercritical";
            break;
        default:
            os << "admissible (" << to_string(classify_admissibility(N, s, alpha)) << ")";
    }
    return os.str();
}

/// Symbol of (-Delta)^s on power laws: (-Delta)^s r^mu = c(mu) r^{mu-2s}, for -N < mu < 2s.
inline double c_mu(double mu, int N, double s) {
    detail::check_order_and_dimension(N, s);
    if (!(mu > -N && mu < 2.0 * s)) {
        std::ostringstream os;
        os << "c(mu) requires -N < mu < 2s; got mu=" << mu;
        throw DomainError(os.str());
    }
    return std::pow(4.0, s) * std::tgamma(0.5 * (2.0 * s - mu)) * std::tgamma(0.5 * (N + mu)) *
           reciprocal_gamma(0.5 * (mu + (N - 2.0 * s))) * reciprocal_gamma(-0.5 * mu);
}

/// Zero-order constant of the reduced equation, c(beta) with beta = -(N-2s)/2.
inline double A_constant(int N, double s) {
    detail::check_order_and_dimension(N, s);
    const double g = std::tgamma(0.25 * (N + 2.0 * s)) / std::tgamma(0.25 * (N - 2.0 * s));
    return std::pow(4.0, s) * g * g;
}

/// Normalization of (-Delta)^s u(x) = a_{N,s} PV int (u(x)-u(y)) |x-y|^{-N-2s} dy.
/// Defined for every N >= 1 (no N > 2s needed); a_{1,s} doubles as the kernel singularity coefficient.
inline double normalization_a_Ns(int N, double s) {
    if (!(s > 0.0 && s < 1.0) || N < 1) {
        std::ostringstream os;
        os << "normalization needs N >= 1 and s in (0,1); got N=" << N << ", s=" << s;
        throw DomainError(os.str());
    }
    return std::pow(4.0, s) * std::tgamma(0.5 * N + s) /
           (std::pow(std::numbers::pi, 0.5 * N) * std::abs(std::tgamma(-s)));
}

/// Exponent N + 2s + 2 alpha - p (N - 2s); vanishes exactly at the critical p.
inline double critical_identity_exponent(const FracHenonParams& params, double p) {
    return params.N + 2.0 * params.s + 2.0 * params.alpha - p * (params.N - 2.0 * params.s);
}

struct SpectralConstants {
    double a_Ns = 0.0;
    double A_sN = 0.0;
    /// lim t^{1+2s} K(t); equals the one-dimensional normalization a_{1,s}.
    double kappa0 = 0.0;
    /// lim e^{t(N+2s)/2} K(t) = a_{N,s} |S^{N-1}|.
    double c_inf = 0.0;
    /// u = c_riesz * int f(y) |x-y|^{2s-N} dy inverts (-Delta)^s.
    double c_riesz = 0.0;
    double sphere_N_minus_1 = 0.0;
    double sphere_N_minus_2 = 0.0;  ///< zero for N = 1

    static SpectralConstants compute(int N, double s) {
        detail::check_order_and_dimension(N, s);
        SpectralConstants c;
        c.a_Ns = normalization_a_Ns(N, s);
        c.A_sN = A_constant(N, s);
        c.kappa0 = std::pow(4.0, s) * std::tgamma(0.5 + s) / (std::sqrt(std::numbers::pi) * std::abs(std::tgamma(-s)));
        c.sphere_N_minus_1 = sphere_measure(N - 1);
        c.sphere_N_minus_2 = N >= 2 ? sphere_measure(N - 2) : 0.0;
        c.c_inf = c.a_Ns * c.sphere_N_minus_1;
        c.c_riesz = std::tgamma(0.5 * (N - 2.0 * s)) /
                    (std::pow(4.0, s) * std::pow(std::numbers::pi, 0.5 * N) * std::tgamma(s));
        return c;
    }
};

}  // namespace fhenon
