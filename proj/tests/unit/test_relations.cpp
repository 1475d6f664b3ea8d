#include <zerosum/relations.hpp>
#include <zerosum/zeros.hpp>

#include <gtest/gtest.h>

using namespace zerosum;

namespace {

const SelbergLFunction& delta() {
    static const auto D = delta_lfunction();
    return D;
}

}  // namespace

TEST(PrimeSums, WeightedSumMatchesBruteForce) {
    const auto h = bump(2.5, 1.0);
    const double x = 0.02;
    const auto chi = character_from_label("5.2");
    const auto w = [&](double u) { return chi(static_cast<std::int64_t>(u)); };
    cplx plain = 0.0, twisted = 0.0;
    for (std::uint64_t n = 1; n <= 200; ++n) {
        plain += von_mangoldt(n) * h(x * static_cast<double>(n));
        twisted += von_mangoldt(n) * h(x * static_cast<double>(n)) * chi(static_cast<std::int64_t>(n));
    }
    const auto lam = [](std::uint64_t n) { return cplx(von_mangoldt(n)); };
    EXPECT_LT(std::abs(prime_weighted_sum(lam, h, x) - plain), 1e-12);
    EXPECT_LT(std::abs(prime_weighted_sum(lam, h, x, w) - twisted), 1e-12);
    EXPECT_THROW(prime_weighted_sum(lam, h, 0.0), DomainError);
}

TEST(PrimeSums, ZetaSplitHasNoSecondCoefficient) {
    const auto h = bump(2.5, 1.0);
    const double x = 0.01;
    const auto spec = zeta_spec(1000);
    cplx want = 0.0;
    for (std::uint64_t p = 2; p <= 350; ++p) {
        if (!is_prime(p)) continue;
        const double P = static_cast<double>(p);
        want += std::log(P) * (h(x * P) + h(x * P * P));
    }
    const auto s = s_tilde_split(spec, h, x);
    EXPECT_LT(std::abs(s.S - want), 1e-12);
    EXPECT_LT(std::abs(s.S1 - want), 1e-12);
    EXPECT_EQ(s.S2, cplx(0.0));
    EXPECT_LT(s.split_error(), 1e-12);
}

TEST(PrimeSums, DeltaSplitAgainstLambda) {
    const auto h = bump(2.5, 1.0);
    const auto& spec = *delta().euler;
    for (double x : {1e-2, 1e-3}) {
        const auto s = s_tilde_split(spec, h, x);
        cplx S = 0.0, S2 = 0.0;
        for (std::uint64_t p = 2; static_cast<double>(p) <= 3.5 / x; ++p) {
            if (!is_prime(p)) continue;
            const double P = static_cast<double>(p);
            S += lambda_phi(spec, p) * h(x * P) + lambda_phi(spec, p * p) * h(x * P * P);
            S2 += -std::log(P) * h(x * P * P);  // c_2(p) = -1 at every prime
        }
        EXPECT_LT(std::abs(s.S - S), 1e-9 * std::max(1.0, std::abs(S))) << x;
        EXPECT_LT(std::abs(s.S2 - S2), 1e-12) << x;
        EXPECT_LT(std::abs(j_term_direct(spec, h, x) - S2), 1e-12) << x;
        EXPECT_EQ(s.S3, cplx(0.0));
        EXPECT_LT(s.split_error(), 1e-9) << x;
    }
}

TEST(PrimeSums, SplitNeedsPrimeTable) {
    const auto h = bump(2.5, 1.0);
    EXPECT_THROW(s_tilde_split(zeta_spec(100), h, 1e-3), MissingDataError);
    EXPECT_THROW(j_term_direct(zeta_spec(10), h, 1e-4), MissingDataError);
}

TEST(PrimeSums, TensorSplitsAgainstLambdaTensor) {
    const auto h = bump(2.5, 1.0);
    const auto& spec = *delta().euler;
    const double x = 1e-2;
    const auto t = tensor_decompositions(spec, spec, h, x);
    cplx S = 0.0;
    for (std::uint64_t p = 2; p <= 350; ++p) {
        if (!is_prime(p)) continue;
        const double P = static_cast<double>(p);
        S += lambda_tensor(spec, spec, p) * h(x * P) + lambda_tensor(spec, spec, p * p) * h(x * P * P);
    }
    EXPECT_LT(std::abs(t.S - S), 1e-9 * std::abs(S));
    EXPECT_LT(t.split2_error, 1e-10);
    EXPECT_LT(t.split4_error, 1e-10);
    EXPECT_LT(t.identity_error, 1e-10);
}

TEST(Report, LogLogSlopeOfPowerLaw) {
    RelationReport rep;
    for (double x : {1e-1, 1e-2, 1e-3, 1e-4}) {
        RelationRow r;
        r.x = x;
        r.residual = 3.0 * std::pow(x, 0.25);  // decays like (1/x)^{-1/4}
        rep.rows.push_back(r);
    }
    EXPECT_NEAR(RelationReport::log_log_slope(rep.rows), -0.25, 1e-12);
    rep.claimed_order = -0.5;
    rep.slack = 0.15;
    rep.finalize();
    EXPECT_EQ(rep.status, Status::fail);
    rep.claimed_order = -0.3;
    rep.finalize();
    EXPECT_EQ(rep.status, Status::pass);
}

TEST(Report, ZeroResidualsGiveNoSlope) {
    std::vector<RelationRow> rows(3);
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i].x = std::pow(10.0, -1.0 - static_cast<double>(i));
    EXPECT_TRUE(std::isinf(RelationReport::log_log_slope(rows)));
    RelationReport rep;
    rep.rows = rows;
    rep.finalize();
    EXPECT_EQ(rep.to_json()["fitted_order"], nullptr);
}

TEST(Report, JsonUsesFifteenDigits) {
    nlohmann::ordered_json j;
    j["a"] = 0.1 + 0.2;
    j["b"] = {1.0 / 3.0};
    j["c"] = {{"d", 2.0}};
    EXPECT_EQ(dump_json(j, -1), R"({"a":0.3,"b":[0.333333333333333],"c":{"d":2.0}})");
    EXPECT_EQ(fmt(1.0 / 7.0), "0.142857142857143");
}

TEST(Report, CsvHasOneLinePerRow) {
    RelationReport rep;
    rep.rows.resize(2);
    rep.rows[0].x = 0.5;
    rep.rows[1].x = 0.25;
    const auto csv = rep.to_csv();
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
    EXPECT_EQ(csv.rfind("x,lhs_re", 0), 0u);
    EXPECT_EQ(to_string(Status::skipped), "SKIPPED");
}

TEST(Relations, CuspFormJTermConstant) {
    const auto h = bump(2.5, 1.0);
    const auto rep = theorem5_check(*delta().euler, h, {1e-2, 1e-3});
    EXPECT_NEAR(rep.extra["C_h"].get<double>(), 0.5 * mellin(h, 0.5).value.real(), 1e-14);
    ASSERT_EQ(rep.rows.size(), 2u);
    for (const auto& r : rep.rows) {
        EXPECT_LT(std::abs(r.lhs - j_term_direct(*delta().euler, h, r.x)), 1e-15);
        EXPECT_LT(r.rhs.real(), 0.0);
    }
    // the J-term approaches -C(h) x^{-1/2}
    const auto& ratios = rep.extra["j_ratio"];
    EXPECT_LT(std::abs(ratios[1]["ratio"].get<double>() - 1.0), 0.25);
}

TEST(Relations, DegreeTwoWithoutZerosIsSkipped) {
    const auto h = bump(2.5, 1.0);
    const ZeroStore store;
    const auto phi = phi_f(delta().a, 12);
    const auto rep = theorem2_compare(delta(), phi, h, {1e-2, 1e-3}, store, -1.0, 1.0, 1.0);
    EXPECT_EQ(rep.status, Status::skipped);
    EXPECT_TRUE(rep.extra.contains("j_term_status"));
    EXPECT_FALSE(rep.note.empty());
    EXPECT_LT(rep.extra["split_error"].get<double>(), 1e-9);
    for (const auto& r : rep.rows) {
        EXPECT_LT(std::abs(r.lhs - j_term_direct(*delta().euler, h, r.x)), 1e-15);
        EXPECT_LT(std::abs(r.rhs - j_term_asymptotic(h, r.x, -1.0, 1.0)), 1e-15);
    }
    EXPECT_THROW(theorem2_compare(zeta_lfunction(), phi, h, {1e-2}, store, -1.0, 1.0, 1.0), MissingDataError);
}

TEST(Relations, GammaWeightedTrivialCharacter) {
    ZeroStore store;
    populate(store, zeta_lfunction(), 60.0);
    const auto rep = linnik_classic(conrey_character(1, 1), {0.5, 0.2, 0.1}, store, 60.0, 60.0);
    ASSERT_EQ(rep.rows.size(), 3u);
    for (const auto& r : rep.rows) {
        EXPECT_EQ(r.residual, 0.0);
        EXPECT_GT(std::abs(r.lhs), 0.0);
    }
    EXPECT_EQ(rep.status, Status::pass);
    EXPECT_EQ(rep.extra["growth"].get<double>(), 0.0);
}
