#pragma once

// Discretization of the reduced operator
//
//   T v(k) = int_R (v(k) - v(tau)) K(k - tau) dtau = int_0^inf (2 v(k) - v(k+t) - v(k-t)) K(t) dt
//
// on a uniform symmetric grid with zero extension outside [-L, L]. The second difference
// D(t) = 2v(k) - v(k+t) - v(k-t) is even in t with D(0) = 0, so on the first panel it is
// interpolated by an even polynomial in t (t^2, t^4, ...); on the remaining panels by
// piecewise Lagrange polynomials. Both are integrated exactly against K (product quadrature),
// with K = kappa0 t^{-1-2s} + K_reg split on the first panel.

#include <Eigen/Dense>

#include <cmath>
#include <span>
#include <sstream>
#include <vector>

#include "fhenon/errors.hpp"
#include "fhenon/kernel.hpp"
#include "fhenon/params.hpp"
#include "fhenon/quadrature.hpp"

namespace fhenon {

struct Grid1D {
    double L = 30.0;
    double h = 0.05;
    std::size_t n = 1201;

    static Grid1D make(double L, double h) {
        if (!(L > 0.0) || !(h > 0.0) || h > L) throw DomainError("grid needs L > 0 and 0 < h <= L");
        const double cells = 2.0 * L / h;
        const double rounded = std::round(cells);
        if (std::abs(cells - rounded) > 1e-9 * rounded) {
            std::ostringstream os;
            os << "grid spacing h=" << h << " does not divide [-L, L] with L=" << L;
            throw DomainError(os.str());
        }
        Grid1D g;
        g.L = L;
        g.h = h;
        g.n = static_cast<std::size_t>(rounded) + 1;
        return g;
    }

    // offset from the center, so node(mirror(i)) == -node(i) bit for bit
    double node(std::size_t i) const { return (static_cast<double>(i) - 0.5 * static_cast<double>(n - 1)) * h; }
    std::size_t center() const { return (n - 1) / 2; }
    std::size_t mirror(std::size_t i) const { return n - 1 - i; }

    std::vector<double> nodes() const {
        std::vector<double> k(n);
        for (std::size_t i = 0; i < n; ++i) k[i] = node(i);
        return k;
    }
};

/// Emden-Fowler profile v(k) = r^{(N-2s)/2} u(r), r = e^k, sampled on a Grid1D.
struct Profile {
    Grid1D grid;
    std::vector<double> values;
    FracHenonParams params;
    bool even = true;

    double max_abs() const {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }
};

/// v -> sign(v) |v|^p, the odd extension of the nonlinearity.
inline double odd_power(double v, double p) { return std::copysign(std::pow(std::abs(v), p), v); }

/// Product-quadrature weights of T for a fixed (grid spacing, kernel table) pair.
class ReducedOperator {
public:
    static constexpr int panel_degree = 4;

    ReducedOperator(const Grid1D& grid, const KernelTable& table) : grid_(grid), table_(&table) {
        if (table.resolution > grid.h) {
            std::ostringstream os;
            os << "kernel table resolution " << table.resolution << " is coarser than grid spacing " << grid.h;
            throw ResolutionError(os.str());
        }
        if (panel_degree * grid.h > table.h0) {
            throw ResolutionError("first quadrature panel extends beyond the singular split radius h0");
        }
        build_weights();
        A_ = A_constant(table.params.N, table.params.s);
    }

    const Grid1D& grid() const { return grid_; }
    const KernelTable& table() const { return *table_; }
    double A() const { return A_; }

    /// w_m for offsets m = 1..M (w_0 unused).
    const std::vector<double>& weights() const { return w_; }
    /// Integral of K beyond the last offset.
    double tail() const { return tail_; }
    /// Sum over all offsets plus the tail; (T v)_i = 2 Omega v_i - sum_{j != i} w_{|i-j|} v_j.
    double omega() const { return omega_; }

    void check_size(std::span<const double> v) const {
        if (v.size() != grid_.n) throw DomainError("profile size does not match the operator grid");
    }

    /// T v at every node, summed over offsets in a fixed order.
    std::vector<double> apply_T(std::span<const double> v) const {
        check_size(v);
        const std::size_t n = grid_.n;
        const std::size_t M = w_.size() - 1;
        std::vector<double> out(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double vi2 = 2.0 * v[i];
            double acc = 0.0;
            for (std::size_t m = 1; m <= M; ++m) {
                const double right = i + m < n ? v[i + m] : 0.0;
                const double left = i >= m ? v[i - m] : 0.0;
                acc += w_[m] * (vi2 - right - left);
            }
            out[i] = acc + tail_ * vi2;
        }
        return out;
    }

    /// F = T v + A v - sign(v)|v|^p.
    std::vector<double> residual(std::span<const double> v, double p) const {
        std::vector<double> f = apply_T(v);
        for (std::size_t i = 0; i < f.size(); ++i) f[i] += A_ * v[i] - odd_power(v[i], p);
        return f;
    }

    /// Double integral of (v(k) - v(tau))^2 K(k - tau) over R^2 with zero extension, summed
    /// pairwise over all lattice shifts.
    double hs_seminorm(std::span<const double> v) const {
        check_size(v);
        const std::size_t n = grid_.n;
        const std::size_t M = w_.size() - 1;
        double total = 0.0;
        for (std::size_t m = 1; m <= M; ++m) {
            // all lattice indices i with at least one of v_i, v_{i+m} inside the grid
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = v[i] - (i + m < n ? v[i + m] : 0.0);
                acc += d * d;
            }
            for (std::size_t i = 0; i < std::min(m, n); ++i) acc += v[i] * v[i];
            total += w_[m] * acc;
        }
        double sq = 0.0;
        for (double x : v) sq += x * x;
        total += 2.0 * tail_ * sq;
        return 2.0 * grid_.h * total;
    }

    /// Discrete energy (1/4) seminorm + (A/2) int v^2 - int |v|^{p+1}/(p+1).
    double energy(std::span<const double> v, double p) const {
        double sq = 0.0, pw = 0.0;
        for (double x : v) {
            sq += x * x;
            pw += std::pow(std::abs(x), p + 1.0);
        }
        return 0.25 * hs_seminorm(v) + 0.5 * A_ * grid_.h * sq - grid_.h * pw / (p + 1.0);
    }

    /// Dense M_K + A I - p diag(|v|^{p-1}).
    Eigen::MatrixXd jacobian(std::span<const double> v, double p) const {
        check_size(v);
        Eigen::MatrixXd J = matrix_T();
        for (std::size_t i = 0; i < grid_.n; ++i) J(i, i) += A_ - p * std::pow(std::abs(v[i]), p - 1.0);
        return J;
    }

    /// Dense matrix of the discrete T (symmetric Toeplitz).
    Eigen::MatrixXd matrix_T() const {
        const auto n = static_cast<Eigen::Index>(grid_.n);
        const auto M = static_cast<Eigen::Index>(w_.size() - 1);
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            T(i, i) = 2.0 * omega_;
            for (Eigen::Index m = 1; m <= M && i + m < n; ++m) {
                T(i, i + m) = -w_[m];
                T(i + m, i) = -w_[m];
            }
        }
        return T;
    }

private:
    void build_weights();

    Grid1D grid_;
    const KernelTable* table_;
    std::vector<double> w_;
    double tail_ = 0.0;
    double omega_ = 0.0;
    double A_ = 0.0;
};

inline void ReducedOperator::build_weights() {
    const KernelTable& K = *table_;
    const double h = grid_.h;
    constexpr int P = panel_degree;
    const double s = K.params.s;
    const double e = 1.0 + 2.0 * s;
    const auto panels = static_cast<std::size_t>(std::ceil(K.t_max / (P * h) - 1e-9));
    const std::size_t M = panels * P;
    w_.assign(M + 1, 0.0);

    // First panel [0, P h]: D(t) ~ sum_k c_k (t/h)^{2k}, k = 1..P, matched at t = h..P h.
    {
        const double b = P * h;
        Eigen::MatrixXd V(P, P);
        for (int l = 1; l <= P; ++l)
            for (int k = 1; k <= P; ++k) V(l - 1, k - 1) = std::pow(static_cast<double>(l), 2 * k);
        // mu_k = int_0^b (t/h)^{2k} K(t) dt, singular part exact and the rest by Gauss-Legendre
        // in u with t = b u^2
        Eigen::VectorXd mu(P);
        const auto& rule = quad::gauss20();
        for (int k = 1; k <= P; ++k) {
            const double sing = K.kappa0 * std::pow(b, 2 * k - 2 * s) / (2 * k - 2 * s) / std::pow(h, 2 * k);
            auto reg = [&](double u) {
                const double t = b * u * u;
                if (t == 0.0) return 0.0;
                const double g = std::pow(t, e) * K(t) - K.kappa0;
                return std::pow(t / h, 2 * k) * std::pow(t, -e) * g * 2.0 * b * u;
            };
            mu(k - 1) = sing + quad::fixed(rule, reg, 0.0, 1.0);
        }
        // weights satisfy sum_l w_l D(l h) = sum_k c_k mu_k with V c = D
        const Eigen::VectorXd wl = V.transpose().fullPivLu().solve(mu);
        for (int l = 1; l <= P; ++l) w_[l] += wl(l - 1);
    }

    // Remaining panels: degree-P Lagrange through the P+1 nodes of each panel.
    const auto& rule = quad::gauss10();
    for (std::size_t p = 1; p < panels; ++p) {
        const std::size_t m0 = p * P;
        for (int c = 0; c < P; ++c) {
            const double a = (m0 + c) * h, bb = a + h;
            const double mid = 0.5 * (a + bb), half = 0.5 * h;
            for (std::size_t g = 0; g < rule.x.size(); ++g) {
                const double t = mid + half * rule.x[g];
                const double wk = half * rule.w[g] * K(t);
                const double x = t / h - static_cast<double>(m0);  // local coordinate in [0, P]
                for (int j = 0; j <= P; ++j) {
                    double l = 1.0;
                    for (int i = 0; i <= P; ++i)
                        if (i != j) l *= (x - i) / static_cast<double>(j - i);
                    w_[m0 + j] += wk * l;
                }
            }
        }
    }
    tail_ = K.tail_integral(static_cast<double>(M) * h);
    omega_ = tail_;
    for (std::size_t m = 1; m <= M; ++m) omega_ += w_[m];
}

/// T v for a profile, building the quadrature weights on the fly.
inline std::vector<double> apply_T(const Profile& profile, const KernelTable& table) {
    return ReducedOperator(profile.grid, table).apply_T(profile.values);
}

struct ResidualResult {
    std::vector<double> values;
    double max_norm = 0.0;
};

inline ResidualResult residual(const Profile& profile, const KernelTable& table) {
    ResidualResult r;
    r.values = ReducedOperator(profile.grid, table).residual(profile.values, profile.params.p_star);
    for (double f : r.values) r.max_norm = std::max(r.max_norm, std::abs(f));
    return r;
}

inline double energy(const Profile& profile, const KernelTable& table) {
    return ReducedOperator(profile.grid, table).energy(profile.values, profile.params.p_star);
}

inline double hs_seminorm(const Profile& profile, const KernelTable& table) {
    return ReducedOperator(profile.grid, table).hs_seminorm(profile.values);
}

inline Eigen::MatrixXd jacobian(const Profile& profile, const KernelTable& table) {
    return ReducedOperator(profile.grid, table).jacobian(profile.values, profile.params.p_star);
}

}  // namespace fhenon
