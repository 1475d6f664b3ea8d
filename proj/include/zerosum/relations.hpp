#pragma once

/**
 * @file relations.hpp
 * @brief Harness comparing zero sums of different L-functions on an x-grid:
 *        interpolation-weighted zeta sums, J-terms from degree-2 Euler
 *        coefficients, exact prime-sum splits, symmetry experiments and the
 *        classical Gamma-weighted relation for Dirichlet characters.
 */

#include <zerosum/explicit_formula.hpp>
#include <zerosum/interpolation.hpp>

#include <sstream>

namespace zerosum {

enum class Status { pass, fail, skipped };

inline std::string to_string(Status s) {
    switch (s) {
        case Status::pass: return "PASS";
        case Status::fail: return "FAIL";
        default: return "SKIPPED";
    }
}

/// Fixed 15-significant-digit formatting shared by every report.
inline std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

struct RelationRow {
    double x = 0.0;
    cplx lhs;
    cplx rhs;
    double residual = 0.0;
    double budget = 0.0;
    std::optional<cplx> predicted;  // zero-free evaluation of lhs - rhs, when available
};

struct RelationReport {
    std::string name;
    std::vector<RelationRow> rows;
    double claimed_order = 0.0;
    double fitted_order = 0.0;
    double slack = 0.15;
    Status status = Status::fail;
    std::string note;
    nlohmann::ordered_json extra = nlohmann::ordered_json::object();

    /// Least-squares slope of log(residual) against log(1/x); rows with zero residual are ignored.
    static double log_log_slope(const std::vector<RelationRow>& rows) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& r : rows)
            if (r.residual > 0.0) pts.emplace_back(std::log(1.0 / r.x), std::log(r.residual));
        if (pts.size() < 2) return -std::numeric_limits<double>::infinity();
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (auto [a, b] : pts) sx += a, sy += b, sxx += a * a, sxy += a * b;
        const double n = static_cast<double>(pts.size());
        return (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }

    /// Fit the residual order and decide PASS/FAIL against claimed_order + slack.
    void finalize() {
        fitted_order = log_log_slope(rows);
        status = fitted_order <= claimed_order + slack ? Status::pass : Status::fail;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["name"] = name;
        j["status"] = to_string(status);
        j["claimed_order"] = claimed_order;
        j["fitted_order"] = std::isfinite(fitted_order) ? nlohmann::ordered_json(fitted_order) : nullptr;
        j["slack"] = slack;
        j["rows"] = nlohmann::ordered_json::array();
        for (const auto& r : rows) {
            nlohmann::ordered_json row{{"x", r.x},
                                       {"lhs_re", r.lhs.real()},
                                       {"lhs_im", r.lhs.imag()},
                                       {"rhs_re", r.rhs.real()},
                                       {"rhs_im", r.rhs.imag()},
                                       {"residual", r.residual},
                                       {"budget", r.budget}};
            if (r.predicted) {
                row["predicted_re"] = r.predicted->real();
                row["predicted_im"] = r.predicted->imag();
            }
            j["rows"].push_back(row);
        }
        if (!note.empty()) j["note"] = note;
        if (!extra.empty()) j["extra"] = extra;
        return j;
    }

    std::string to_csv() const {
        std::ostringstream o;
        o << "x,lhs_re,lhs_im,rhs_re,rhs_im,residual,budget\n";
        for (const auto& r : rows)
            o << fmt(r.x) << ',' << fmt(r.lhs.real()) << ',' << fmt(r.lhs.imag()) << ',' << fmt(r.rhs.real()) << ','
              << fmt(r.rhs.imag()) << ',' << fmt(r.residual) << ',' << fmt(r.budget) << '\n';
        return o.str();
    }
};

/// JSON text with every double printed to 15 significant digits.
inline std::string dump_json(const nlohmann::ordered_json& j, int indent = 2) {
    // nlohmann prints shortest round-trip doubles; rewrite them at fixed precision
    std::function<nlohmann::ordered_json(const nlohmann::ordered_json&)> fix = [&](const nlohmann::ordered_json& v) {
        if (v.is_number_float()) return nlohmann::ordered_json(std::stod(fmt(v.get<double>())));
        if (v.is_object()) {
            nlohmann::ordered_json o = nlohmann::ordered_json::object();
            for (auto it = v.begin(); it != v.end(); ++it) o[it.key()] = fix(it.value());
            return o;
        }
        if (v.is_array()) {
            nlohmann::ordered_json a = nlohmann::ordered_json::array();
            for (const auto& e : v) a.push_back(fix(e));
            return a;
        }
        return v;
    };
    return fix(j).dump(indent);
}

// =============================================================================
// Prime sums
// =============================================================================

/// sum_n Lambda(n) h(x n) phi(n) over n in support(h)/x; phi defaults to 1.
inline cplx prime_weighted_sum(const std::function<cplx(std::uint64_t)>& lambda, const TestFunction& h, double x,
                               const std::function<cplx(double)>& phi = {}) {
    if (!(x > 0.0)) throw DomainError("prime_weighted_sum: x must be positive");
    const auto lo = static_cast<std::uint64_t>(std::max(1.0, std::ceil(h.support().lo / x)));
    const auto hi = static_cast<std::uint64_t>(std::floor(h.support().hi / x));
    if (hi < lo) return 0.0;
    return block_sum(hi - lo + 1, [&](std::size_t i) {
        const std::uint64_t n = lo + i;
        const cplx l = lambda(n);
        if (l == 0.0) return cplx(0.0);
        const double u = static_cast<double>(n);
        return l * h(x * u) * (phi ? phi(u) : cplx(1.0));
    });
}

/// Lemma-5 split of sum_p sum_{m<=2} Lambda_phi(p^m) h(x p^m).
struct STildeSplit {
    cplx S, S1, S2, S3;
    double split_error() const { return std::abs(S - (S1 + S2 + S3)); }
};

inline STildeSplit s_tilde_split(const EulerProductSpec& spec, const TestFunction& h, double x) {
    const double top = h.support().hi / x;
    if (static_cast<double>(spec.prime_limit) < top)
        throw MissingDataError("s_tilde_split: spec '" + spec.label + "' needs primes up to " + fmt(top));
    ComplexKahanSum S, S1, S2, S3;
    for (const auto& [p, f] : spec.factors) {
        const double P = static_cast<double>(p), logp = std::log(P);
        if (P > top) break;
        const double h1 = h(x * P), h2 = h(x * P * P);
        if (h1 == 0.0 && h2 == 0.0) continue;
        const auto r = power_sum_coeffs(f, 2);
        const auto phi = dirichlet_from_local(f, 2);
        S += (r[1] * h1 + r[2] * h2) * logp;
        S1 += (phi[1] * h1 + phi[2] * h2) * logp;
        const cplx c2 = f.degree() >= 2 ? f.c[1] : cplx(0.0);
        (spec.exceptional.count(p) ? S3 : S2) += c2 * h2 * logp;
    }
    return {S.value(), S1.value(), S2.value(), S3.value()};
}

/// Every prime sum of the tensor splits at one x.
struct TensorSplit {
    double x = 0.0;
    cplx S;                  // sum_{p not in S} sum_{m<=2} Lambda_{phi x psi}(p^m) h(x p^m)
    cplx S1, S2;             // two-part split
    cplx S5, S6, S7, S8;     // four-part split
    double split2_error = 0.0;
    double split4_error = 0.0;
    double identity_error = 0.0;  // max_p |Lambda_phi(p^2) - Lambda_{phi x phi}(p) - 2 c_{phi,2}(p) log p|
};

inline TensorSplit tensor_decompositions(const EulerProductSpec& phi, const EulerProductSpec& psi,
                                         const TestFunction& h, double x) {
    const double top = h.support().hi / x;
    if (static_cast<double>(std::min(phi.prime_limit, psi.prime_limit)) < top)
        throw MissingDataError("tensor_decompositions: specs need primes up to " + fmt(top));
    TensorSplit t;
    t.x = x;
    ComplexKahanSum S, S1, S2, S5, S6, S7, S8;
    for (const auto& [p, f] : phi.factors) {
        const double P = static_cast<double>(p), logp = std::log(P);
        if (P > top) break;
        if (phi.exceptional.count(p) || psi.exceptional.count(p)) continue;
        const auto& g = psi.factor(p);
        if (!f.roots || !g.roots) throw MissingDataError("tensor_decompositions: roots required at p=" + std::to_string(p));
        const double h1 = h(x * P), h2 = h(x * P * P);
        const auto rf = power_sum_coeffs(f, 2), rg = power_sum_coeffs(g, 2);
        const auto vf = dirichlet_from_local(f, 2), vg = dirichlet_from_local(g, 2);
        const cplx cf = f.degree() >= 2 ? f.c[1] : cplx(0.0), cg = g.degree() >= 2 ? g.c[1] : cplx(0.0);
        const cplx lam_phi2 = rf[2] * logp;
        const cplx lam_phiphi = rf[1] * rf[1] * logp, lam_psipsi = rg[1] * rg[1] * logp;
        t.identity_error = std::max(t.identity_error, std::abs(lam_phi2 - lam_phiphi - 2.0 * cf * logp));
        if (h1 == 0.0 && h2 == 0.0) continue;
        S += (rf[1] * rg[1] * h1 + rf[2] * rg[2] * h2) * logp;
        S1 += rf[1] * logp * h1 * vg[1] + lam_phi2 * h2 * vg[2];
        S2 += lam_phi2 * h2 * cg;
        S5 += (h1 * vf[1] * vg[1] + h2 * vf[2] * vg[2]) * logp;
        S6 += h2 * lam_phiphi * cg;
        S7 += h2 * lam_psipsi * cf;
        S8 += 3.0 * h2 * cf * cg * logp;
    }
    t.S = S.value();
    t.S1 = S1.value();
    t.S2 = S2.value();
    t.S5 = S5.value();
    t.S6 = S6.value();
    t.S7 = S7.value();
    t.S8 = S8.value();
    t.split2_error = std::abs(t.S - t.S1 - t.S2);
    t.split4_error = std::abs(t.S - t.S5 - t.S6 - t.S7 - t.S8);
    return t;
}

// =============================================================================
// Zero-sum sides
// =============================================================================

struct SideValue {
    cplx value;
    double budget = 0.0;
    std::size_t zeros_used = 0;
};

/**
 * m int_0^inf f(u) du - sum_{|gamma| <= T} int f(u) u^rho du/u for the zeros
 * of `label` (pole order m), with tail and quadrature budget.
 */
inline SideValue zero_side(const SupportedFn& f, int m, const ZeroStore& store, const std::string& label,
                           const GammaFactor& g, double T) {
    auto zs = zero_sum(f, store, label, T, g);
    SideValue s;
    s.value = -zs.value;
    s.budget = zs.budget();
    s.zeros_used = zs.zeros_used;
    if (m > 0) {
        auto one = mellin(f, 1.0);
        s.value += static_cast<double>(m) * one.value;
        s.budget += m * one.err;
    }
    return s;
}

/// Height needed for zeta sums of h(xu) w(u) u^rho: oscillation of w moves the stationary ordinates.
inline double weighted_height(const TestFunction& h, double x, double bandwidth, double base) {
    return bandwidth * h.support().hi / x + base;
}

struct RelationOptions {
    double base_height = 600.0;  // height where plain bump transforms are negligible
    double slack = 0.15;
};

/**
 * m_phi int h(xu) du - sum_{L_phi} int h(xu) u^rho du/u against
 * int h(xu) phi(u) du - sum_zeta int h(xu) phi(u) u^rho du/u.
 * `predicted` is the same difference from the prime side, with no zeros.
 */
inline RelationReport theorem1_compare(const SelbergLFunction& Lphi, const InterpolationFn& phi,
                                       const TestFunction& h, const std::vector<double>& xs, const ZeroStore& store,
                                       const RelationOptions& opt = {}) {
    RelationReport rep;
    rep.name = "thm1";
    rep.slack = opt.slack;
    rep.claimed_order = 0.0;
    const auto zeta = zeta_lfunction();
    for (double x : xs) {
        auto hx = dilated(h.as_fn(), x);
        auto hxphi = weighted(hx, phi.eval, phi.bandwidth);
        const double TL = std::min(store.entry(Lphi.label).complete_to, opt.base_height);
        const double TZ = weighted_height(h, x, phi.bandwidth, opt.base_height);
        auto lhs = zero_side(hx, Lphi.pole_order, store, Lphi.label, Lphi.gamma, TL);
        auto rhs = zero_side(hxphi, 1, store, "zeta", zeta.gamma, TZ);
        RelationRow row;
        row.x = x;
        row.lhs = lhs.value;
        row.rhs = rhs.value;
        row.residual = std::abs(lhs.value - rhs.value);
        row.budget = lhs.budget + rhs.budget;
        const auto aL = arithmetic_side(Lphi, hx), aZ = arithmetic_side(zeta, hxphi);
        row.predicted = (aL.value - static_cast<double>(Lphi.pole_order) * mellin(hx, 0.0).value) -
                        (aZ.value - mellin(hxphi, 0.0).value);
        rep.rows.push_back(row);
    }
    rep.finalize();
    return rep;
}

/// S~_2(x) = sum_{p not in S} c_2(p) h(x p^2) log p.
inline cplx j_term_direct(const EulerProductSpec& spec, const TestFunction& h, double x) {
    const double top = std::sqrt(h.support().hi / x);
    if (static_cast<double>(spec.prime_limit) < top)
        throw MissingDataError("j_term_direct: spec '" + spec.label + "' needs primes up to " + fmt(top));
    ComplexKahanSum s;
    for (const auto& [p, f] : spec.factors) {
        const double P = static_cast<double>(p);
        if (P > top) break;
        if (spec.exceptional.count(p) || f.degree() < 2) continue;
        const double h2 = h(x * P * P);
        if (h2 != 0.0) s += f.c[1] * h2 * std::log(P);
    }
    return s.value();
}

/// mu A int h(x u^2) u^mu du/u.
inline cplx j_term_asymptotic(const TestFunction& h, double x, cplx A, cplx mu) {
    return mu * A * j_integral(h, x, mu).value;
}

/**
 * Degree-2 relation: zero sides as in theorem1_compare plus the J-term. The
 * zero-side comparison needs stored zeros of `Lphi`; without them the J-term
 * comparison (S~_2 against mu A int h(xu^2) u^mu du/u) is reported and the
 * zero side is marked SKIPPED.
 */
inline RelationReport theorem2_compare(const SelbergLFunction& Lphi, const InterpolationFn& phi,
                                       const TestFunction& h, const std::vector<double>& xs, const ZeroStore& store,
                                       cplx A, cplx mu, double nu, const RelationOptions& opt = {}) {
    if (!Lphi.euler) throw MissingDataError("theorem2_compare: '" + Lphi.label + "' carries no Euler product data");
    RelationReport rep;
    rep.name = "thm2";
    rep.slack = opt.slack;
    const bool zeros = store.has(Lphi.label);
    rep.extra["split_error"] = 0.0;
    double split_err = 0.0;
    for (double x : xs) {
        RelationRow row;
        row.x = x;
        const cplx J = j_term_direct(*Lphi.euler, h, x);
        // the full split needs primes up to hi/x; check it where the table reaches
        if (static_cast<double>(Lphi.euler->prime_limit) >= h.support().hi / x) {
            const auto split = s_tilde_split(*Lphi.euler, h, x);
            split_err = std::max(split_err, split.split_error() + std::abs(split.S2 - J));
        }
        if (zeros) {
            const auto zeta = zeta_lfunction();
            auto hx = dilated(h.as_fn(), x);
            auto hxphi = weighted(hx, phi.eval, phi.bandwidth);
            auto lhs = zero_side(hx, Lphi.pole_order, store, Lphi.label, Lphi.gamma,
                                 std::min(store.entry(Lphi.label).complete_to, opt.base_height));
            auto rhs = zero_side(hxphi, 1, store, "zeta", zeta.gamma,
                                 weighted_height(h, x, phi.bandwidth, opt.base_height));
            row.lhs = lhs.value;
            row.rhs = rhs.value + J;
            row.budget = lhs.budget + rhs.budget;
        } else {
            row.lhs = J;
            row.rhs = j_term_asymptotic(h, x, A, mu);
        }
        row.residual = std::abs(row.lhs - row.rhs);
        rep.rows.push_back(row);
    }
    rep.extra["split_error"] = split_err;
    // remainder O(x^{-1/3}) with the J-term included; O(x^{-nu/2}) for the J-term alone
    rep.claimed_order = zeros ? 1.0 / 3.0 : nu / 2.0;
    rep.finalize();
    if (!zeros) {
        rep.extra["j_term_status"] = to_string(rep.status);
        rep.status = Status::skipped;
        rep.note = "no zeros stored for '" + Lphi.label + "'; rows compare the J-term with its asymptotic form";
    }
    return rep;
}

/**
 * Level-1 cusp form check: S~_2(x) (c_2 = -1) against -C(h) x^{-1/2} with
 * C(h) = hhat(1/2)/2; the remainder is claimed O(x^{-max(sigma/2, 1/3)}).
 */
inline RelationReport theorem5_check(const EulerProductSpec& delta_spec, const TestFunction& h,
                                     const std::vector<double>& xs, double sigma = 1.0, double slack = 0.15) {
    RelationReport rep;
    rep.name = "thm5";
    rep.slack = slack;
    rep.claimed_order = std::max(sigma / 2.0, 1.0 / 3.0);
    const cplx C = 0.5 * mellin(h, 0.5).value;
    rep.extra["C_h"] = C.real();
    nlohmann::ordered_json ratios = nlohmann::ordered_json::array();
    for (double x : xs) {
        RelationRow row;
        row.x = x;
        row.lhs = j_term_direct(delta_spec, h, x);
        row.rhs = -C / std::sqrt(x);
        row.residual = std::abs(row.lhs - row.rhs);
        ratios.push_back({{"x", x}, {"ratio", (row.lhs / row.rhs).real()}});
        rep.rows.push_back(row);
    }
    rep.extra["j_ratio"] = ratios;
    rep.finalize();
    return rep;
}

/**
 * Rankin-Selberg comparison for f = g = Delta:
 * int h(xu) du - sum_{f x f} int h(xu) u^rho du/u against
 * -sum_zeta int h(xu) phi_f(u)^2 u^rho du/u - C(h) x^{-1/2}, and (when zeros
 * of L(s,f) are stored) -sum_{L(s,f)} int h(xu) phi_f(u) u^rho du/u - C(h) x^{-1/2}.
 * SKIPPED without zeros of the tensor L-function; the exact prime-sum splits
 * it rests on are still reported in `extra`.
 */
inline RelationReport theorem6_compare(const SelbergLFunction& Ltensor, const SelbergLFunction& Lf,
                                       const InterpolationFn& phi_f, const TestFunction& h,
                                       const std::vector<double>& xs, const ZeroStore& store, double sigma = 1.0,
                                       const RelationOptions& opt = {}) {
    RelationReport rep;
    rep.name = "thm6";
    rep.slack = opt.slack;
    rep.claimed_order = std::max(sigma / 2.0, 1.0 / 3.0);
    if (Lf.euler) {
        nlohmann::ordered_json splits = nlohmann::ordered_json::array();
        for (double x : xs) {
            const double top = h.support().hi / x;
            if (static_cast<double>(Lf.euler->prime_limit) < top) continue;
            const auto t = tensor_decompositions(*Lf.euler, *Lf.euler, h, x);
            splits.push_back({{"x", x}, {"split2_error", t.split2_error}, {"split4_error", t.split4_error}});
        }
        rep.extra["splits"] = splits;
    }
    if (!store.has(Ltensor.label)) {
        rep.status = Status::skipped;
        rep.note = "no zeros stored for '" + Ltensor.label + "'";
        return rep;
    }
    const auto zeta = zeta_lfunction();
    const auto sq = product_interp(phi_f, phi_f);
    const cplx C = 0.5 * mellin(h, 0.5).value;
    const bool with_f = store.has(Lf.label);
    nlohmann::ordered_json mid = nlohmann::ordered_json::array();
    for (double x : xs) {
        auto hx = dilated(h.as_fn(), x);
        const double TT = std::min(store.entry(Ltensor.label).complete_to, opt.base_height);
        auto lhs = zero_side(hx, Ltensor.pole_order, store, Ltensor.label, Ltensor.gamma, TT);
        auto hsq = weighted(hx, sq.eval, sq.bandwidth);
        auto zs = zero_sum(hsq, store, "zeta", weighted_height(h, x, sq.bandwidth, opt.base_height), zeta.gamma);
        RelationRow row;
        row.x = x;
        row.lhs = lhs.value;
        row.rhs = -zs.value - C / std::sqrt(x);
        row.residual = std::abs(row.lhs - row.rhs);
        row.budget = lhs.budget + zs.budget();
        if (with_f) {
            auto hf = weighted(hx, phi_f.eval, phi_f.bandwidth);
            const double TF = std::min(store.entry(Lf.label).complete_to, opt.base_height);
            auto fs = zero_sum(hf, store, Lf.label, TF, Lf.gamma);
            const cplx r1 = -fs.value - C / std::sqrt(x);
            mid.push_back({{"x", x}, {"rhs_re", r1.real()}, {"rhs_im", r1.imag()}, {"budget", fs.budget()}});
        }
        rep.rows.push_back(row);
    }
    if (with_f) rep.extra["rhs_via_" + Lf.label] = mid;
    rep.finalize();
    return rep;
}

/**
 * int h(xu) phi_i(u) du - sum_zeta int h(xu) phi_i(u) u^rho du/u for two
 * interpolants of one sequence. Their integer agreement is checked first.
 */
inline RelationReport symmetry_experiment(const InterpolationFn& phi1, const InterpolationFn& phi2,
                                          const TestFunction& h, const std::vector<double>& xs,
                                          const ZeroStore& store, double claimed_order = 0.0,
                                          std::uint64_t check_up_to = 50, const RelationOptions& opt = {}) {
    for (std::uint64_t n = 1; n <= check_up_to; ++n) {
        const double u = static_cast<double>(n);
        const cplx a = phi1(u), b = phi2(u);
        if (std::abs(a - b) > 1e-9 * std::max(1.0, std::abs(a)))
            throw DomainError("symmetry_experiment: interpolants differ at n=" + std::to_string(n));
    }
    RelationReport rep;
    rep.name = "symmetry";
    rep.slack = opt.slack;
    rep.claimed_order = claimed_order;
    const auto zeta = zeta_lfunction();
    for (double x : xs) {
        auto hx = dilated(h.as_fn(), x);
        auto f1 = weighted(hx, phi1.eval, phi1.bandwidth);
        auto f2 = weighted(hx, phi2.eval, phi2.bandwidth);
        const double T = weighted_height(h, x, std::max(phi1.bandwidth, phi2.bandwidth), opt.base_height);
        auto a = zero_side(f1, 1, store, "zeta", zeta.gamma, T);
        auto b = zero_side(f2, 1, store, "zeta", zeta.gamma, T);
        RelationRow row;
        row.x = x;
        row.lhs = a.value;
        row.rhs = b.value;
        row.residual = std::abs(a.value - b.value);
        row.budget = a.budget + b.budget;
        const auto A1 = arithmetic_side(zeta, f1), A2 = arithmetic_side(zeta, f2);
        row.predicted = (A1.value - mellin(f1, 0.0).value) - (A2.value - mellin(f2, 0.0).value);
        rep.rows.push_back(row);
    }
    rep.finalize();
    return rep;
}

/**
 * Zeros of zeta(2s) against zeta zeros weighted by an interpolant of the
 * squares indicator: hhat_x(1/2) - sum_rho hhat_x(rho/2) against
 * 2 (int h(xu) phi(u) du - sum_rho int h(xu) phi(u) u^rho du/u).
 */
inline RelationReport theta_experiment(const InterpolationFn& phi_theta, const TestFunction& h,
                                       const std::vector<double>& xs, const ZeroStore& store,
                                       const RelationOptions& opt = {}) {
    RelationReport rep;
    rep.name = "theta";
    rep.slack = opt.slack;
    rep.claimed_order = 0.0;
    const auto zeta = zeta_lfunction();
    for (double x : xs) {
        auto hx = dilated(h.as_fn(), x);
        // zeros of zeta(2s) are rho/2: evaluate through g(u) = hx(u^2), since int g u^rho du/u = hhat_x(rho/2)/2
        const SupportedFn g{[hx](double u) { return hx(u * u); },
                            {std::sqrt(hx.support.lo), std::sqrt(hx.support.hi)}, 0.0};
        auto half = mellin(hx, 0.5);
        auto zs = zero_sum(g, store, "zeta", 2.0 * opt.base_height, zeta.gamma);
        auto hxphi = weighted(hx, phi_theta.eval, phi_theta.bandwidth);
        auto rhs = zero_side(hxphi, 1, store, "zeta", zeta.gamma,
                             weighted_height(h, x, phi_theta.bandwidth, opt.base_height));
        RelationRow row;
        row.x = x;
        row.lhs = half.value - 2.0 * zs.value;
        row.rhs = 2.0 * rhs.value;
        row.residual = std::abs(row.lhs - row.rhs);
        row.budget = half.err + 2.0 * zs.budget() + 2.0 * rhs.budget;
        const auto Ag = arithmetic_side(zeta, g), Aw = arithmetic_side(zeta, hxphi);
        row.predicted = 2.0 * (Ag.value - mellin(g, 0.0).value) - 2.0 * (Aw.value - mellin(hxphi, 0.0).value);
        rep.rows.push_back(row);
    }
    rep.finalize();
    return rep;
}

// =============================================================================
// Gamma-weighted relation for a Dirichlet character
// =============================================================================

namespace detail {

// sum over zeros of Gamma(rho) z^{-rho} (principal branch), with the envelope
// of the omitted zeros integrated against the zero density beyond T.
inline SideValue gamma_power_sum(const ZeroStore& store, const std::string& label, const GammaFactor& g, double T,
                                 cplx z) {
    const auto pts = store.points(label, T);
    const cplx logz = std::log(z);
    SideValue s;
    s.value = block_sum(pts.size(), [&](std::size_t i) {
        const cplx rho = pts[i].first;
        return static_cast<double>(pts[i].second) * std::exp(log_gamma(rho) - rho * logz);
    });
    s.zeros_used = pts.size();
    double tail = 0.0;
    for (double t = T; t < T + 5e6; t += 1.0) {
        double cell = 0.0;
        for (double sgn : {1.0, -1.0}) {
            const cplx rho(0.5, sgn * (t + 0.5));
            cell += std::exp((log_gamma(rho) - rho * logz).real());
        }
        cell *= zero_density(g, t);
        tail += cell;
        if (cell < 1e-18 || (cell < 1e-9 * tail && t > T + 50.0)) break;
    }
    s.budget = tail;
    return s;
}

}  // namespace detail

/**
 * sum_{L(rho,chi)=0} Gamma(rho) x^{-rho} against
 * (1/tau(conj chi)) sum_a conj(chi)(a) sum_{zeta(rho)=0} Gamma(rho) (x - 2 pi i a/q)^{-rho}.
 * The remainder is claimed O(log^2 x): PASS when residual / log^2 x never
 * grows past `bound` times its value at the first (largest) x, and each
 * truncation budget stays below 10% of its residual. `extra` carries the
 * normalized rows, the growth ratio and the max/min spread.
 * For q = 1 the single shift is taken as a = 0, so both sides coincide.
 */
inline RelationReport linnik_classic(const DirichletCharacter& chi, const std::vector<double>& xs,
                                     const ZeroStore& store, double T_L, double T_zeta, double bound = 5.0) {
    RelationReport rep;
    rep.name = "linnik";
    rep.claimed_order = 0.0;
    const auto zeta = zeta_lfunction();
    const auto L = dirichlet_lfunction(chi);
    const auto q = chi.modulus;
    const auto cc = chi.conj();
    const cplx tau = q == 1 ? cplx(1.0) : gauss_sum(cc);
    nlohmann::ordered_json norm = nlohmann::ordered_json::array();
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0, first = 0.0;
    bool budget_ok = true;
    for (double x : xs) {
        auto lhs = detail::gamma_power_sum(store, L.label, L.gamma, T_L, x);
        SideValue rhs;
        ComplexKahanSum acc;
        for (std::uint64_t a = (q == 1 ? 0 : 1); a <= (q == 1 ? 0 : q); ++a) {
            const cplx w = q == 1 ? cplx(1.0) : cc(static_cast<std::int64_t>(a));
            if (w == 0.0) continue;
            const cplx z(x, -two_pi * static_cast<double>(a) / static_cast<double>(q));
            auto part = detail::gamma_power_sum(store, "zeta", zeta.gamma, T_zeta, z);
            acc += w * part.value;
            rhs.budget += std::abs(w / tau) * part.budget;
            rhs.zeros_used = part.zeros_used;
        }
        rhs.value = acc.value() / tau;
        RelationRow row;
        row.x = x;
        row.lhs = lhs.value;
        row.rhs = rhs.value;
        row.residual = std::abs(lhs.value - rhs.value);
        row.budget = lhs.budget + rhs.budget;
        const double l2 = std::pow(std::log(x), 2);
        const double r = row.residual / l2;
        if (rep.rows.empty()) first = r;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
        if (row.budget > 0.1 * row.residual && row.residual > 0.0) budget_ok = false;
        norm.push_back({{"x", x}, {"residual_over_log2", r}, {"budget_over_log2", row.budget / l2}});
        rep.rows.push_back(row);
    }
    rep.extra["normalized"] = norm;
    const double growth = first > 0.0 ? hi / first : 0.0;
    rep.extra["max_normalized"] = hi;
    rep.extra["growth"] = growth;
    rep.extra["bound"] = bound;
    rep.extra["spread"] = lo > 0.0 ? hi / lo : 0.0;
    rep.fitted_order = RelationReport::log_log_slope(rep.rows);
    rep.status = growth <= bound && budget_ok ? Status::pass : Status::fail;
    if (!budget_ok) rep.note = "truncation budget exceeds 10% of the residual on part of the grid";
    return rep;
}

}  // namespace zerosum
