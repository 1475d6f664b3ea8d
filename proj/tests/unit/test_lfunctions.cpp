#include <zerosum/lfunctions.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace zerosum;

TEST(LFunction, CompletedZetaAtTwo) {
    // pi^{-1} Gamma(1) zeta(2) = pi / 6
    EXPECT_NEAR(std::abs(complete(zeta_lfunction(), 2.0) - pi / 6.0), 0.0, 1e-13);
    EXPECT_THROW(complete(zeta_lfunction(), 1.0), DomainError);
    EXPECT_THROW(complete(zeta_lfunction(), 0.0), DomainError);
}

TEST(LFunction, FunctionalEquations) {
    for (const char* lab : {"1.1", "3.2", "4.3", "5.2", "5.4", "7.3", "8.3", "8.5"}) {
        const auto L = dirichlet_lfunction(character_from_label(lab));
        for (cplx s : {cplx(0.3, 4.0), cplx(0.8, 21.0), cplx(-0.5, 2.5), cplx(0.5, 60.0)})
            EXPECT_LT(functional_equation_residual(L, s), 1e-9) << lab << " " << s;
    }
}

TEST(LFunction, WrongRootNumberBreaksFunctionalEquation) {
    auto L = dirichlet_lfunction(character_from_label("5.2"));
    L.gamma.omega *= std::polar(1.0, 0.3);
    EXPECT_GT(functional_equation_residual(L, cplx(0.3, 4.0)), 1e-3);
}

TEST(LFunction, DualConjugates) {
    const auto L = dirichlet_lfunction(character_from_label("5.2"));
    const auto D = dual(L);
    const cplx s(0.7, 3.0);
    EXPECT_NEAR(std::abs(D(s) - std::conj(L(std::conj(s)))), 0.0, 1e-12);
    EXPECT_EQ(dual(zeta_lfunction()).label, "zeta");
}

TEST(LFunction, ModularGammaData) {
    const auto D = delta_lfunction(100, 100);
    EXPECT_FALSE(D.evaluable());
    EXPECT_THROW(D(2.0), MissingDataError);
    EXPECT_DOUBLE_EQ(D.gamma.degree(), 2.0);
    EXPECT_NEAR(D.a(2).real(), -24.0 / std::pow(2.0, 5.5), 1e-15);
    const auto DD = delta_squared_lfunction(100);
    EXPECT_DOUBLE_EQ(DD.gamma.degree(), 4.0);
    EXPECT_EQ(DD.pole_order, 1);
}

TEST(Archimedean, TrivialZeroLatticeOracle) {
    // support in (1, inf): W_{lambda,mu}(h) = sum_{n >= 0} hhat(-(n + mu)/lambda)
    auto h = bump(2.5, 1.0);
    auto hhat = [&](double s) {
        return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            [&](double u) { return h(u) * std::pow(u, s - 1.0); }, 1.5, 3.5, 15, 1e-15);
    };
    for (auto [lambda, mu] : {std::pair{0.5, 0.0}, {0.5, 0.5}, {1.0, 5.5}, {1.0, 0.0}}) {
        double oracle = 0.0;
        for (int n = 0; n < 200; ++n) oracle += hhat(-(n + mu) / lambda);
        const auto w = archimedean_W(lambda, mu, h, 1e-13);
        EXPECT_NEAR(w.value.real(), oracle, 1e-11) << lambda << " " << mu;
        EXPECT_NEAR(w.value.imag(), 0.0, 1e-14);
    }
}

TEST(Archimedean, ScaledMatchesDirect) {
    auto h = bump(2.5, 1.0);
    for (double x : {0.5, 0.1}) {
        const auto direct = archimedean_W(0.5, 0.5, dilated(h.as_fn(), x), 1e-12).value;
        const auto scaled = scaled_archimedean_W(0.5, 0.5, h, x, 1e-12).value;
        EXPECT_NEAR(std::abs(direct - scaled), 0.0, 1e-10 * std::max(1.0, std::abs(direct))) << x;
    }
    EXPECT_THROW(scaled_archimedean_W(0.5, 0.0, h, 2.0), DomainError);
}

TEST(Registry, BuiltinsAndFile) {
    Registry r;
    EXPECT_EQ(r.get("zeta").label, "zeta");
    EXPECT_EQ(r.get("4.3").label, "chi:4.3");
    EXPECT_THROW(r.get("4.2"), DomainError);
    EXPECT_THROW(r.get("6.5"), DomainError);  // imprimitive
    EXPECT_THROW(r.get("nonsense"), DomainError);

    const auto dir = std::filesystem::temp_directory_path() / "zerosum-registry-test";
    std::filesystem::create_directories(dir);
    {
        std::ofstream f(dir / "reg.ini");
        f << "[mychar]\ncharacter = 5.2\n\n[custom]\nQ = 0.5\nlambda = 0.5\nmu = 0\npole_order = 1\n";
    }
    auto reg = Registry::from_ini((dir / "reg.ini").string());
    EXPECT_TRUE(reg.contains("mychar"));
    EXPECT_EQ(reg.get("mychar").chi->label(), "5.2");
    EXPECT_DOUBLE_EQ(reg.get("custom").gamma.Q, 0.5);
    {
        std::ofstream f(dir / "bad.ini");
        f << "[broken]\nQ = -1\nlambda = 0.5\nmu = 0\n";
    }
    EXPECT_THROW(Registry::from_ini((dir / "bad.ini").string()), DomainError);
    std::filesystem::remove_all(dir);
}
