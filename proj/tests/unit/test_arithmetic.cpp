#include <zerosum/arithmetic.hpp>

#include <gtest/gtest.h>

#include <numeric>
#include <sstream>

using namespace zerosum;

TEST(Primes, CountBelowTenThousand) {
    PrimeTable t(10000);
    EXPECT_EQ(t.primes().size(), 1229u);
    EXPECT_EQ(PrimeTable(100).primes().size(), 25u);
}

TEST(Primes, SieveMatchesTrialDivision) {
    PrimeTable t(5000);
    for (std::uint64_t n = 0; n <= 5000; ++n) {
        bool trial = n >= 2;
        for (std::uint64_t d = 2; d * d <= n; ++d)
            if (n % d == 0) trial = false;
        EXPECT_EQ(is_prime(n), trial) << n;
        if (n >= 2) EXPECT_EQ(t.is_prime(n), trial) << n;
    }
    EXPECT_THROW(t.is_prime(5001), DomainError);
}

TEST(Primes, FactorizationReconstructs) {
    for (std::uint64_t n = 2; n < 3000; ++n) {
        std::uint64_t prod = 1;
        for (auto [p, e] : factorize(n)) {
            EXPECT_TRUE(is_prime(p));
            for (int i = 0; i < e; ++i) prod *= p;
        }
        EXPECT_EQ(prod, n);
    }
}

TEST(Primes, VonMangoldt) {
    EXPECT_DOUBLE_EQ(von_mangoldt(8), std::log(2.0));
    EXPECT_DOUBLE_EQ(von_mangoldt(49), std::log(7.0));
    EXPECT_EQ(von_mangoldt(6), 0.0);
    EXPECT_EQ(von_mangoldt(1), 0.0);
    // sum_{d | n} Lambda(d) = log n
    for (std::uint64_t n = 1; n <= 200; ++n) {
        double s = 0.0;
        for (std::uint64_t d = 1; d <= n; ++d)
            if (n % d == 0) s += von_mangoldt(d);
        EXPECT_NEAR(s, std::log(static_cast<double>(n)), 1e-12) << n;
    }
}

TEST(Primes, EulerPhiCountsUnits) {
    for (std::uint64_t n = 1; n <= 300; ++n) {
        std::uint64_t c = 0;
        for (std::uint64_t a = 1; a <= n; ++a) c += std::gcd(a, n) == 1;
        EXPECT_EQ(euler_phi(n), c) << n;
    }
}

namespace {

// Number of primitive characters mod q: multiplicative, p -> p - 2, p^k -> p^{k-2}(p-1)^2.
std::size_t primitive_count(std::uint64_t q) {
    std::size_t c = 1;
    for (auto [p, e] : factorize(q)) {
        if (e == 1)
            c *= p - 2;
        else {
            std::size_t t = (p - 1) * (p - 1);
            for (int i = 2; i < e; ++i) t *= p;
            c *= t;
        }
    }
    return c;
}

}  // namespace

TEST(Characters, GroupStructure) {
    for (std::uint64_t q : {3, 4, 5, 7, 8, 9, 12, 15}) {
        auto chars = characters_mod(q);
        ASSERT_EQ(chars.size(), euler_phi(q)) << q;
        std::size_t prim = 0;
        for (const auto& chi : chars) {
            prim += chi.primitive;
            cplx s = 0.0;
            for (std::uint64_t a = 0; a < q; ++a) s += chi(static_cast<std::int64_t>(a));
            if (chi.is_principal())
                EXPECT_NEAR(std::abs(s), static_cast<double>(euler_phi(q)), 1e-12);
            else
                EXPECT_NEAR(std::abs(s), 0.0, 1e-12) << chi.label();
            for (std::int64_t a = 1; a < 40; ++a)
                for (std::int64_t b = 1; b < 40; ++b) ASSERT_NEAR(std::abs(chi(a * b) - chi(a) * chi(b)), 0.0, 1e-12);
            const double sign = chi.parity == Parity::odd ? -1.0 : 1.0;
            EXPECT_NEAR(std::abs(chi(-1) - sign), 0.0, 1e-12) << chi.label();
        }
        EXPECT_EQ(prim, primitive_count(q)) << q;
    }
}

TEST(Characters, OddCharacterModFour) {
    auto chi = character_from_label("4.3");
    EXPECT_TRUE(chi.primitive);
    EXPECT_EQ(chi.parity, Parity::odd);
    EXPECT_NEAR(std::abs(chi(1) - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(chi(3) + 1.0), 0.0, 1e-15);
    EXPECT_EQ(chi(2), 0.0);
    // tau = i - i^3 = 2i
    EXPECT_NEAR(std::abs(gauss_sum(chi) - cplx(0.0, 2.0)), 0.0, 1e-13);
}

TEST(Characters, GaussSums) {
    for (std::uint64_t q : {3, 4, 5, 7, 8, 9, 11, 13})
        for (const auto& chi : characters_mod(q)) {
            const cplx tau = gauss_sum(chi);
            if (chi.primitive) {
                EXPECT_NEAR(std::abs(tau), std::sqrt(static_cast<double>(q)), 1e-12) << chi.label();
                EXPECT_NEAR(std::abs(root_number(chi)), 1.0, 1e-12);
            }
        }
    // Legendre symbol mod 5 has tau = sqrt 5
    for (const auto& chi : characters_mod(5))
        if (chi.is_real() && !chi.is_principal())
            EXPECT_NEAR(std::abs(gauss_sum(chi) - std::sqrt(5.0)), 0.0, 1e-12);
}

TEST(Characters, BadLabelsRejected) {
    EXPECT_THROW(character_from_label("4"), Error);
    EXPECT_THROW(character_from_label("4.2"), Error);
}

TEST(Tau, KnownValues) {
    const std::vector<long long> known{1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920};
    auto t = ramanujan_tau_exact(10);
    for (std::size_t n = 0; n < known.size(); ++n) EXPECT_EQ(static_cast<long long>(t[n]), known[n]);
    EXPECT_EQ(to_string(ramanujan_tau_exact(23)[22]), "18643272");
}

TEST(Tau, HeckeRelations) {
    auto t = ramanujan_tau_exact(200);
    auto tau = [&](std::size_t n) { return t[n - 1]; };
    for (std::size_t p : {2, 3, 5, 7, 11, 13}) {
        int128 p11 = 1;
        for (int i = 0; i < 11; ++i) p11 *= static_cast<int128>(p);
        EXPECT_EQ(to_string(tau(p * p)), to_string(tau(p) * tau(p) - p11)) << p;
    }
    for (std::size_t m = 1; m < 14; ++m)
        for (std::size_t n = 1; n < 14; ++n)
            if (std::gcd(m, n) == 1) EXPECT_EQ(to_string(tau(m * n)), to_string(tau(m) * tau(n)));
}

TEST(Tau, RamanujanCongruenceMod691) {
    auto t = ramanujan_tau_exact(2000);
    for (std::size_t n = 1; n <= 2000; ++n) {
        int128 sigma = 0;
        for (std::size_t d = 1; d <= n; ++d)
            if (n % d == 0) {
                int128 p = 1;
                for (int i = 0; i < 11; ++i) p = (p * static_cast<int128>(d)) % 691;
                sigma = (sigma + p) % 691;
            }
        int128 r = t[n - 1] % 691;
        if (r < 0) r += 691;
        ASSERT_EQ(static_cast<long long>(r), static_cast<long long>(sigma)) << n;
    }
}

TEST(Tau, DeligneBoundOnShiftedStream) {
    auto s = shifted_coefficients(ramanujan_tau(3000), 12);
    for (std::uint64_t p : PrimeTable(3000).primes()) EXPECT_LE(std::abs(s(p)), 2.0 + 1e-12) << p;
    EXPECT_THROW(s(3001), MissingDataError);
}

TEST(Streams, Squares) {
    auto s = squares_stream();
    for (std::uint64_t n = 1; n < 500; ++n) {
        auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)) + 0.5);
        EXPECT_EQ(s(n).real(), r * r == n ? 1.0 : 0.0);
    }
}

TEST(Streams, CoefficientParsing) {
    std::istringstream good("# header\n1,1.5,0\n2,-2,0.25\n\n3,0,1\n");
    auto v = parse_coefficients(good);
    ASSERT_EQ(v.size(), 3u);
    EXPECT_EQ(v[1], cplx(-2.0, 0.25));
    std::istringstream gap("1,1,0\n3,1,0\n");
    EXPECT_THROW(parse_coefficients(gap), ParseError);
    std::istringstream junk("1,abc,0\n");
    EXPECT_THROW(parse_coefficients(junk), ParseError);
    std::istringstream short_rec("1,2\n");
    EXPECT_THROW(parse_coefficients(short_rec), ParseError);
}
