#include <zerosum/explicit_formula.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace zerosum;

namespace {

ZeroStore& shared_store() {
    static ZeroStore s;
    static const bool filled = [] {
        populate(s, zeta_lfunction(), 500.0);
        populate(s, dirichlet_lfunction(character_from_label("4.3")), 500.0);
        return true;
    }();
    (void)filled;
    return s;
}

// log p sum_i sum_{m in Z} alpha_i^m (1 + p^m) h(p^m): Poisson summation of the local zero lattice.
cplx lattice_oracle(const std::vector<cplx>& roots, const TestFunction& h, std::uint64_t p) {
    cplx o = 0.0;
    for (auto a : roots)
        for (int m = -60; m <= 60; ++m) {
            const double u = std::pow(static_cast<double>(p), m);
            o += std::pow(a, static_cast<double>(m)) * (1.0 + u) * h(u);
        }
    return o * std::log(static_cast<double>(p));
}

}  // namespace

TEST(ExplicitFormula, ConstantTerm) {
    EXPECT_NEAR(ef_constant(zeta_lfunction().gamma), std::log(pi) + euler_gamma, 1e-15);
    // chi mod 4: Q = sqrt(4/pi)
    EXPECT_NEAR(ef_constant(dirichlet_lfunction(character_from_label("4.3")).gamma),
                -std::log(4.0 / pi) + euler_gamma, 1e-15);
}

TEST(ExplicitFormula, ZetaBalances) {
    const auto r = verify(zeta_lfunction(), bump(2.5, 1.0).as_fn(), shared_store(), 1e-6, 500.0);
    EXPECT_TRUE(r.pass);
    EXPECT_LE(r.discrepancy, 1e-6);
    EXPECT_GE(r.budget, r.discrepancy);
    EXPECT_EQ(r.zeros_used, shared_store().points("zeta", 500.0).size());
}

TEST(ExplicitFormula, BalancesWithMassAtOne) {
    // h(1) != 0 exercises the constant term and the singular part of W
    const auto r = verify(zeta_lfunction(), bump(1.2, 0.9).as_fn(), shared_store(), 1e-6, 500.0);
    EXPECT_TRUE(r.pass) << r.discrepancy << " " << r.budget;
}

TEST(ExplicitFormula, OddCharacterBalances) {
    const auto L = dirichlet_lfunction(character_from_label("4.3"));
    const auto r = verify(L, bump(2.5, 1.0).as_fn(), shared_store(), 1e-6, 500.0);
    EXPECT_TRUE(r.pass) << r.discrepancy << " " << r.budget;
}

TEST(ExplicitFormula, UnreachableToleranceFailsCleanly) {
    const auto r = verify(zeta_lfunction(), bump(2.5, 1.0).as_fn(), shared_store(), 1e-15, 500.0);
    EXPECT_FALSE(r.pass);
    EXPECT_GT(r.budget, 0.0);
    EXPECT_THROW(verify(zeta_lfunction(), bump(2.5, 1.0).as_fn(), shared_store(), 0.0), DomainError);
}

TEST(ExplicitFormula, WrongGammaShiftFails) {
    // the odd character treated as even
    auto L = dirichlet_lfunction(character_from_label("4.3"));
    L.gamma.pairs = {{0.5, 0.0}};
    const auto r = verify(L, bump(2.5, 1.0).as_fn(), shared_store(), 1e-6, 500.0);
    EXPECT_FALSE(r.pass);
    EXPECT_GT(r.discrepancy, 100.0 * r.budget);
}

TEST(ExplicitFormula, PerturbedZeroFails) {
    ZeroStore s;
    auto recs = find_zeros_zeta(500.0);
    recs[2].gamma += 0.01;
    s.merge("zeta", recs, true);
    s.set_complete("zeta", 500.0);
    const auto r = verify(zeta_lfunction(), bump(2.5, 1.0).as_fn(), s, 1e-6, 500.0);
    EXPECT_FALSE(r.pass);
    EXPECT_GT(r.discrepancy, 10.0 * r.budget);
}

TEST(ExplicitFormula, SpectralTailShrinksWithHeight) {
    const auto f = bump(2.5, 1.0).as_fn();
    const auto g = zeta_lfunction().gamma;
    EXPECT_GT(spectral_tail(f, g, 100.0), spectral_tail(f, g, 300.0));
    EXPECT_LT(spectral_tail(f, g, 500.0), 1e-4);
}

TEST(LocalFormula, PrimeSideExamples) {
    auto z = zeta_spec(10);
    // only 2 lies in (1.5, 3.5) among the powers of 2
    const auto h = bump(2.5, 1.0);
    EXPECT_NEAR(std::abs(local_W(z, h.as_fn(), 2) - std::log(2.0) * h(2.0)), 0.0, 1e-15);
    EXPECT_EQ(local_W(z, bump(3.0, 0.4).as_fn(), 2), cplx(0.0));
    // rank 2 with roots e^{+-i theta}: 2 and 4 in (1.4, 4.6)
    const double th = 0.7;
    EulerProductSpec s;
    s.rank = 2;
    s.add(LocalFactor::from_roots(2, {std::polar(1.0, th), std::polar(1.0, -th)}));
    const auto h2 = bump(3.0, 1.6);
    const double expect = (2 * std::cos(th) * h2(2.0) + 2 * std::cos(2 * th) * h2(4.0)) * std::log(2.0);
    EXPECT_NEAR(std::abs(local_W(s, h2.as_fn(), 2) - expect), 0.0, 1e-14);
}

TEST(LocalFormula, ZeroLatticeAgainstPoisson) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-pi, pi);
    const auto h = bump(3.0, 2.8);
    for (int trial = 0; trial < 4; ++trial) {
        EulerProductSpec s;
        s.rank = 1 + trial % 2;
        std::vector<cplx> roots;
        for (std::size_t i = 0; i < s.rank; ++i) roots.push_back(std::polar(1.0, u(rng)));
        s.add(LocalFactor::from_roots(3, roots));
        const auto z = local_zero_sum(s, h.as_fn(), 3, 200);
        EXPECT_NEAR(std::abs(z.value - lattice_oracle(roots, h, 3)), 0.0, 1e-8);
        // the two prime-side routes agree with the oracle too
        const cplx w = local_W(s, h.as_fn(), 3) + local_poisson_correction(s, h.as_fn(), 3);
        EXPECT_NEAR(std::abs(w - lattice_oracle(roots, h, 3)), 0.0, 1e-12);
        // truncation self-consistency
        EXPECT_NEAR(std::abs(local_zero_sum(s, h.as_fn(), 3, 100).value - z.value), 0.0, 1e-6);
    }
}

TEST(LocalFormula, RejectsOffCircleRoots) {
    EulerProductSpec s;
    s.add(LocalFactor::from_roots(2, {1.5}));
    EXPECT_THROW(local_zero_sum(s, bump(3.0, 2.8).as_fn(), 2, 50), DomainError);
}

TEST(LocalFormula, GammaLatticeEqualsW) {
    const auto h = bump(2.5, 1.0).as_fn();
    for (const auto& L : {zeta_lfunction(), dirichlet_lfunction(character_from_label("4.3"))}) {
        const auto g = gamma_local_sum(L.gamma, h);
        cplx w = 0.0;
        for (const auto& p : L.gamma.pairs) w += archimedean_W(p.lambda, p.mu, h, 1e-13).value;
        EXPECT_NEAR(std::abs(g.value - w), 0.0, 1e-12);
    }
    EXPECT_THROW(gamma_local_sum(zeta_lfunction().gamma, bump(1.0, 0.5).as_fn()), DomainError);
}

TEST(Identity, ComparesAllPairs) {
    IdentitySide a{"a", cplx(1.0), 1e-6, 0}, b{"b", cplx(1.0 + 5e-7), 1e-6, 0}, c{"c", cplx(1.1), 1e-6, 0};
    EXPECT_TRUE(compare_sides({a, b}, 1e-5).pass);
    EXPECT_FALSE(compare_sides({a, b, c}, 1e-5).pass);
    EXPECT_FALSE(compare_sides({a, b}, 1e-7).pass);
}
