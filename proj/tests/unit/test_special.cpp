#include <zerosum/special.hpp>

#include <gtest/gtest.h>

using namespace zerosum;

TEST(LogGamma, MatchesStdOnRealAxis) {
    for (double x = 0.05; x < 60.0; x *= 1.37) EXPECT_NEAR(log_gamma(x).real(), std::lgamma(x), 1e-12 * std::max(1.0, std::abs(std::lgamma(x)))) << x;
}

TEST(LogGamma, ReflectionAndRecurrence) {
    EXPECT_NEAR(std::abs(zerosum::gamma(cplx(0.5)) - std::sqrt(pi)), 0.0, 1e-14);
    for (cplx z : {cplx(0.3, 2.0), cplx(-2.7, 5.0), cplx(4.0, -30.0), cplx(0.25, 200.0)}) {
        // Gamma(z + 1) = z Gamma(z), compared in logs (mod 2 pi i)
        const cplx d = log_gamma(z + 1.0) - log_gamma(z) - std::log(z);
        EXPECT_NEAR(d.real(), 0.0, 1e-12);
        EXPECT_NEAR(std::remainder(d.imag(), two_pi), 0.0, 1e-10);
    }
    // |Gamma(1/2 + i t)|^2 = pi / cosh(pi t)
    for (double t : {0.5, 3.0, 20.0}) {
        const double lhs = 2.0 * log_gamma(cplx(0.5, t)).real();
        EXPECT_NEAR(lhs, std::log(pi / std::cosh(pi * t)), 1e-11);
    }
    EXPECT_THROW(log_gamma(-3.0), DomainError);
}

TEST(Zeta, SpecialValues) {
    EXPECT_NEAR(riemann_zeta(2.0).real(), pi * pi / 6.0, 1e-13);
    EXPECT_NEAR(riemann_zeta(4.0).real(), std::pow(pi, 4) / 90.0, 1e-13);
    EXPECT_NEAR(riemann_zeta(-1.0).real(), -1.0 / 12.0, 1e-12);
    EXPECT_NEAR(riemann_zeta(0.0).real(), -0.5, 1e-12);
    EXPECT_NEAR(riemann_zeta(0.5).real(), -1.4603545088095868, 1e-12);
}

TEST(Zeta, VanishesAtFirstZero) {
    EXPECT_LT(std::abs(riemann_zeta(cplx(0.5, 14.134725141734693790))), 1e-12);
    EXPECT_GT(std::abs(riemann_zeta(cplx(0.5, 14.0))), 1e-2);
}

TEST(Hurwitz, HalfShift) {
    // zeta(s, 1/2) = (2^s - 1) zeta(s)
    for (cplx s : {cplx(2.0), cplx(3.5, 1.0), cplx(0.5, 25.0)}) {
        const cplx lhs = hurwitz_zeta(s, 0.5).value;
        const cplx rhs = (std::pow(2.0, s) - 1.0) * riemann_zeta(s);
        EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-11 * std::max(1.0, std::abs(rhs)));
    }
    EXPECT_THROW(hurwitz_zeta(2.0, 0.0), DomainError);
}

TEST(DirichletL, KnownValues) {
    const auto chi4 = character_from_label("4.3");
    EXPECT_NEAR(std::abs(dirichlet_L(chi4, 1.0) - pi / 4.0), 0.0, 1e-13);
    // Catalan's constant
    EXPECT_NEAR(dirichlet_L(chi4, 2.0).real(), 0.91596559417721901505, 1e-13);
    // L(1, (./3)) = pi / (3 sqrt 3)
    const auto chi3 = character_from_label("3.2");
    EXPECT_NEAR(dirichlet_L(chi3, 1.0).real(), pi / (3.0 * std::sqrt(3.0)), 1e-13);
    EXPECT_THROW(dirichlet_L(conrey_character(1, 1), 1.0), DomainError);
}

TEST(DirichletL, AgreesWithPartialSumsWhereTheyConverge) {
    // Re s = 3: direct sum to 1e5 is accurate to ~1e-10
    const auto chi = character_from_label("7.3");
    const cplx s(3.0, 4.0);
    cplx direct = 0.0;
    for (int n = 100000; n >= 1; --n) direct += chi(n) * std::pow(static_cast<double>(n), -s);
    EXPECT_NEAR(std::abs(dirichlet_L(chi, s) - direct), 0.0, 1e-9);
}
