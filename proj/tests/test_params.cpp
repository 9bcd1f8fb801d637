#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fhenon/params.hpp"

using namespace fhenon;

TEST(CriticalExponent, Substitution) {
    EXPECT_DOUBLE_EQ(critical_exponent(3, 0.5, 0.0), 2.0);
    EXPECT_DOUBLE_EQ(critical_exponent(3, 0.5, 1.0), 3.0);
    EXPECT_NEAR(critical_exponent(3, 0.75, -1.0), 5.0 / 3.0, 1e-15);
}

TEST(CriticalExponent, DomainErrors) {
    EXPECT_THROW(critical_exponent(1, 0.5, 0.0), DomainError);  // N = 2s
    EXPECT_THROW(critical_exponent(3, 0.0, 0.0), DomainError);
    EXPECT_THROW(critical_exponent(3, 1.0, 0.0), DomainError);
    EXPECT_THROW(critical_exponent(0, 0.3, 0.0), DomainError);
}

TEST(CriticalExponent, AboveOneIffAlphaAboveMinus2s) {
    for (int N : {1, 2, 3, 4, 6})
        for (double s : {0.1, 0.3, 0.45, 0.5, 0.75, 0.95}) {
            if (!(N > 2 * s)) continue;
            for (double a : {-1.9, -1.0, -0.5, -0.2, 0.0, 0.5, 2.0, 7.0}) {
                const double p = critical_exponent(N, s, a);
                if (std::abs(a + 2.0 * s) < 1e-12) {
                    EXPECT_NEAR(p, 1.0, 1e-14);  // boundary, sign decided by rounding
                    continue;
                }
                EXPECT_EQ(p > 1.0, a > -2.0 * s) << N << " " << s << " " << a;
            }
        }
}

TEST(FracHenonParams, DerivedFields) {
    const auto P = FracHenonParams::make(3, 0.6, 1.0);
    EXPECT_NEAR(P.p_star, (3 + 2.0 + 1.2) / 1.8, 1e-15);
    EXPECT_NEAR(P.beta, -0.9, 1e-15);
    EXPECT_GT(P.beta, -3 + 1.2);
    EXPECT_LT(P.beta, 0.0);
    EXPECT_THROW(FracHenonParams::make(3, 0.5, -1.0), DomainError);
    EXPECT_THROW(FracHenonParams::make(3, 0.5, -1.2), DomainError);
}

TEST(Admissibility, Examples) {
    EXPECT_EQ(classify_admissibility(3, 0.6, 1.0), AdmissibilityClass::ClassicalRange);
    EXPECT_EQ(classify_admissibility(3, 0.25, 2.0), AdmissibilityClass::SupercriticalReduction);
    EXPECT_EQ(classify_admissibility(3, 0.5, -1.2), AdmissibilityClass::NoSolutionRange);
    EXPECT_EQ(classify_admissibility(3, 0.5, -1.0), AdmissibilityClass::NoSolutionRange);
    EXPECT_EQ(classify_admissibility(3, 0.6, -0.5), AdmissibilityClass::WeakRange);
    EXPECT_EQ(classify_admissibility(3, 0.25, 0.0), AdmissibilityClass::ClassicalRange);
    EXPECT_EQ(classify_admissibility(3, 0.25, 1.999), AdmissibilityClass::ClassicalRange);
    EXPECT_EQ(classify_admissibility(3, 0.25, 2.5), AdmissibilityClass::SupercriticalReduction);
    EXPECT_EQ(classify_admissibility(3, 0.5, 100.0), AdmissibilityClass::ClassicalRange);
    EXPECT_THROW(classify_admissibility(1, 0.5, 0.0), DomainError);
}

TEST(Admissibility, MessagesCiteTheViolatedRange) {
    EXPECT_NE(admissibility_message(3, 0.25, 2.5).find("α<2s(N−1)/(1−2s)"), std::string::npos);
    EXPECT_NE(admissibility_message(3, 0.5, -1.2).find("no nonnegative locally bounded solution"),
              std::string::npos);
}

TEST(Symbol, Zeros) {
    EXPECT_EQ(c_mu(0.0, 3, 0.5), 0.0);
    for (int N : {1, 2, 3, 4})
        for (double s : {0.2, 0.5, 0.7})
            if (N > 2 * s) { EXPECT_EQ(c_mu(-N + 2 * s, N, s), 0.0) << N << " " << s; }
}

TEST(Symbol, SignsAndConcavity) {
    for (int N : {2, 3, 4})
        for (double s : {0.3, 0.5, 0.8}) {
            const double lo = -N + 1e-3, hi = 2 * s - 1e-3;
            const int m = 400;
            std::vector<double> c(m + 1), mu(m + 1);
            for (int i = 0; i <= m; ++i) {
                mu[i] = lo + (hi - lo) * i / m;
                c[i] = c_mu(mu[i], N, s);
                if (mu[i] > -N + 2 * s + 1e-9 && mu[i] < -1e-9) { EXPECT_GT(c[i], 0.0); }
                if (mu[i] < -N + 2 * s - 1e-9 || mu[i] > 1e-9) { EXPECT_LT(c[i], 0.0); }
            }
            for (int i = 1; i < m; ++i) EXPECT_LE(c[i + 1] - 2 * c[i] + c[i - 1], 0.0) << N << " " << s << " " << mu[i];
        }
}

TEST(Symbol, EndpointsRejected) {
    EXPECT_THROW(c_mu(-3.0, 3, 0.5), DomainError);
    EXPECT_THROW(c_mu(1.0, 3, 0.5), DomainError);
}

TEST(AConstant, ClosedFormValue) {
    EXPECT_NEAR(A_constant(3, 0.5), 2.0 / std::numbers::pi, 1e-15);
    EXPECT_NEAR(A_constant(3, 0.5), c_mu(-1.0, 3, 0.5), 1e-15);
}

TEST(AConstant, EqualsSymbolAtBeta) {
    for (int N : {1, 2, 3, 4, 5})
        for (double s : {0.1, 0.25, 0.5, 0.6, 0.75, 0.9}) {
            if (!(N > 2 * s)) continue;
            const double A = A_constant(N, s);
            EXPECT_GT(A, 0.0);
            EXPECT_NEAR(A, c_mu(-0.5 * (N - 2 * s), N, s), 1e-14 * A);
        }
}

TEST(Normalization, Values) {
    EXPECT_NEAR(normalization_a_Ns(1, 0.5), 1.0 / std::numbers::pi, 1e-15);
    // a_{3,1/2} = 2 Gamma(2) / (pi^{3/2} 2 sqrt(pi)) = 1 / pi^2
    EXPECT_NEAR(normalization_a_Ns(3, 0.5), 1.0 / (std::numbers::pi * std::numbers::pi), 1e-15);
    for (int N : {1, 2, 3, 4})
        for (double s : {0.1, 0.5, 0.9}) EXPECT_GT(normalization_a_Ns(N, s), 0.0);
}

TEST(CriticalIdentityExponent, Examples) {
    EXPECT_EQ(critical_identity_exponent(FracHenonParams::make(3, 0.5, 1.0), 3.0), 0.0);
    EXPECT_DOUBLE_EQ(critical_identity_exponent(FracHenonParams::make(3, 0.5, 0.0), 1.5), 1.0);
    const auto P = FracHenonParams::make(4, 0.75, 0.5);
    EXPECT_NEAR(critical_identity_exponent(P, P.p_star), 0.0, 1e-14);
}

TEST(SpectralConstants, PositiveAndConsistent) {
    for (int N : {1, 2, 3, 4})
        for (double s : {0.2, 0.5, 0.75}) {
            if (!(N > 2 * s)) continue;
            const auto c = SpectralConstants::compute(N, s);
            EXPECT_GT(c.a_Ns, 0.0);
            EXPECT_GT(c.A_sN, 0.0);
            EXPECT_GT(c.kappa0, 0.0);
            EXPECT_GT(c.c_riesz, 0.0);
            EXPECT_NEAR(c.kappa0, normalization_a_Ns(1, s), 1e-15 * c.kappa0);
            EXPECT_NEAR(c.sphere_N_minus_1, sphere_measure(N - 1), 1e-15);
        }
    EXPECT_NEAR(sphere_measure(2), 4 * std::numbers::pi, 1e-14);
    EXPECT_NEAR(sphere_measure(0), 2.0, 1e-15);
}
