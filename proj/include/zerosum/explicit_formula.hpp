#pragma once

/**
 * @file explicit_formula.hpp
 * @brief Both sides of the Weil explicit formula for a Selberg-class
 *        L-function, its local (per-prime and archimedean) versions, and the
 *        two- and three-way explicit identities through interpolated weights.
 */

#include <zerosum/euler.hpp>
#include <zerosum/lfunctions.hpp>
#include <zerosum/testfn.hpp>
#include <zerosum/zeros.hpp>

#include <json.hpp>

#include <numeric>

namespace zerosum {

/// Value with an error budget.
struct Budgeted {
    cplx value;
    double err = 0.0;
};

/**
 * Coefficient of h(1) on the prime side: -2 log Q + d * C_E. For zeta
 * (Q = pi^{-1/2}, d = 1) this is log(pi) + C_E.
 */
inline double ef_constant(const GammaFactor& g) { return -2.0 * std::log(g.Q) + g.degree() * euler_gamma; }

/// Zero-counting density dN/dt at height t (one sign of gamma).
inline double zero_density(const GammaFactor& g, double t) {
    t = std::max(t, 1.0);
    double d = std::log(g.Q);
    for (const auto& p : g.pairs) d += p.lambda * std::log(p.lambda * t);
    return std::max(d, 0.1) / pi;
}

/// Relative accuracy assumed for stored zero ordinates.
inline constexpr double ordinate_tolerance = 1e-11;

namespace detail {

// Roundoff level of a computed fhat(sigma + it): transforms below it are noise.
inline double noise_floor(const SupportedFn& f, double sigma) {
    const SupportedFn mag{[f, sigma](double u) { return cplx(std::abs(f(u)) * std::pow(u, sigma)); }, f.support, 0.0};
    return 1e-14 * std::abs(mellin(mag, 0.0, 1e-6).value);
}

}  // namespace detail

/**
 * Unit-cell contributions 2 max|fhat(1/2 + it)| dN(t), t = t0, t0 + 1, ...,
 * until a cell drops below `floor` or below `rel` times the running total.
 * Entry k covers [t0 + k, t0 + k + 1].
 */
inline std::vector<double> tail_profile(const SupportedFn& f, const GammaFactor& g, double t0, double floor = 1e-25,
                                        double rel = 1e-6) {
    constexpr double window = 250.0;
    floor = std::max(floor, detail::noise_floor(f, 0.5));
    std::vector<double> cells;
    double total = 0.0;
    for (double w0 = t0; w0 < t0 + 1e5; w0 += window) {
        MellinBatch batch = mellin_batch(f, w0 + window + 2.0);
        auto env = [&](double t) {
            return std::max(std::abs(batch(cplx(0.5, t)).value), std::abs(batch(cplx(0.5, -t)).value));
        };
        double left = env(w0);
        for (double t = w0; t < w0 + window; t += 1.0) {
            const double mid = env(t + 0.5), right = env(t + 1.0);
            const double cell = 2.0 * std::max({left, mid, right}) * zero_density(g, t + 1.0);
            left = right;
            cells.push_back(cell);
            total += cell;
            if (cell < floor || (cell < rel * total && t > t0 + 20.0)) return cells;
        }
    }
    return cells;
}

/// Estimated contribution of zeros with |gamma| > T.
inline double spectral_tail(const SupportedFn& f, const GammaFactor& g, double T) {
    const auto cells = tail_profile(f, g, T);
    return std::accumulate(cells.begin(), cells.end(), 0.0);
}

struct SpectralResult {
    cplx value;
    double tail = 0.0;
    double quad_err = 0.0;
    double ordinate_err = 0.0;
    std::size_t zeros_used = 0;
    double T = 0.0;

    double budget() const { return tail + quad_err + ordinate_err; }
};

/// Sum of fhat over stored zeros with |gamma| <= T (multiplicity counted).
inline SpectralResult zero_sum(const SupportedFn& f, const ZeroStore& store, const std::string& label, double T,
                               const GammaFactor& g, bool with_tail = true) {
    const auto pts = store.points(label, T);
    double max_abs_im = 0.0;
    for (const auto& [rho, mult] : pts) max_abs_im = std::max(max_abs_im, std::abs(rho.imag()));
    MellinBatch batch = mellin_batch(f, max_abs_im + 50.0);
    // derivative in gamma: i * int f(u) log(u) u^rho du/u
    const SupportedFn flog{[f](double u) { return f(u) * std::log(u); }, f.support, f.bandwidth};
    MellinBatch dbatch = mellin_batch(flog, max_abs_im + 50.0);
    std::vector<QuadResult> vals(pts.size());
    std::vector<double> slopes(pts.size());
    const cplx total = block_sum(pts.size(), [&](std::size_t i) {
        vals[i] = batch(pts[i].first);
        slopes[i] = std::abs(dbatch(pts[i].first).value);
        return static_cast<double>(pts[i].second) * vals[i].value;
    });
    SpectralResult r;
    r.value = total;
    r.zeros_used = pts.size();
    r.T = T;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        r.quad_err += pts[i].second * vals[i].err;
        r.ordinate_err += pts[i].second * slopes[i] * ordinate_tolerance * std::max(1.0, std::abs(pts[i].first.imag()));
    }
    if (with_tail) r.tail = spectral_tail(f, g, T);
    return r;
}

/// m fhat(0) + m fhat(1) - sum_rho fhat(rho).
inline SpectralResult spectral_side(const SelbergLFunction& L, const SupportedFn& f, const ZeroStore& store,
                                    double T) {
    auto r = zero_sum(f, store, L.label, T, L.gamma);
    r.value = -r.value;
    if (L.pole_order > 0) {
        const auto m0 = mellin(f, 0.0), m1 = mellin(f, 1.0);
        r.value += static_cast<double>(L.pole_order) * (m0.value + m1.value);
        r.quad_err += L.pole_order * (m0.err + m1.err);
    }
    return r;
}

/// sum_n Lambda(n) f(n) + conj(Lambda(n)) f*(n) over the (finite) support.
inline Budgeted prime_side_sum(const std::function<cplx(std::uint64_t)>& lambda, const SupportedFn& f) {
    ComplexKahanSum s;
    double scale = 0.0;
    const auto n_lo = static_cast<std::uint64_t>(std::max(1.0, std::ceil(f.support.lo)));
    const auto n_hi = static_cast<std::uint64_t>(std::floor(f.support.hi));
    for (std::uint64_t n = n_lo; n <= n_hi; ++n) {
        const cplx l = lambda(n);
        if (l == 0.0) continue;
        const cplx term = l * f(static_cast<double>(n));
        s += term;
        scale += std::abs(term);
    }
    // f*(n) = f(1/n)/n is nonzero for 1/hi <= n <= 1/lo
    const auto m_lo = static_cast<std::uint64_t>(std::max(1.0, std::ceil(1.0 / f.support.hi)));
    const double m_top = 1.0 / f.support.lo;
    const auto m_hi = static_cast<std::uint64_t>(std::floor(std::min(m_top, 1e12)));
    for (std::uint64_t n = m_lo; n <= m_hi; ++n) {
        const cplx l = lambda(n);
        if (l == 0.0) continue;
        const double x = static_cast<double>(n);
        const cplx term = std::conj(l) * f(1.0 / x) / x;
        s += term;
        scale += std::abs(term);
    }
    return {s.value(), 1e-15 * scale};
}

struct ArithmeticResult {
    cplx value;
    cplx primes;
    cplx constant_term;
    cplx archimedean;
    double err = 0.0;
};

/// Prime-power sums + (-2 log Q + d C_E) f(1) + sum_j W_{lambda_j, mu_j}(f).
inline ArithmeticResult arithmetic_side(const SelbergLFunction& L, const SupportedFn& f, double tol = 1e-11) {
    ArithmeticResult r;
    auto p = prime_side_sum(L.lambda, f);
    r.primes = p.value;
    r.err += p.err;
    r.constant_term = ef_constant(L.gamma) * f(1.0);
    for (const auto& g : L.gamma.pairs) {
        auto w = archimedean_W(g.lambda, g.mu, f, tol);
        r.archimedean += w.value;
        r.err += w.err;
    }
    r.value = r.primes + r.constant_term + r.archimedean;
    return r;
}

struct EFReport {
    std::string label;
    cplx spectral;
    cplx arithmetic;
    double discrepancy = 0.0;
    double budget = 0.0;
    std::size_t zeros_used = 0;
    double T = 0.0;
    bool pass = false;

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["label"] = label;
        j["spectral_re"] = spectral.real();
        j["spectral_im"] = spectral.imag();
        j["arithmetic_re"] = arithmetic.real();
        j["arithmetic_im"] = arithmetic.imag();
        j["discrepancy"] = discrepancy;
        j["budget"] = budget;
        j["zeros_used"] = zeros_used;
        j["T"] = T;
        j["pass"] = pass;
        return j;
    }
};

/**
 * Choose the smallest height (step 50, capped by the store) whose predicted
 * tail is below 0.1 * tolerance.
 */
inline double choose_height(const SupportedFn& f, const GammaFactor& g, double cap, double tolerance) {
    constexpr double start = 50.0;
    const auto cells = tail_profile(f, g, start, 1e-5 * tolerance, 0.0);
    std::vector<double> suffix(cells.size() + 1, 0.0);
    for (std::size_t k = cells.size(); k-- > 0;) suffix[k] = suffix[k + 1] + cells[k];
    for (double T = start; T < cap; T += 50.0) {
        const auto k = static_cast<std::size_t>(T - start);
        if (k >= cells.size() || suffix[k] < 0.1 * tolerance) return T;
    }
    return cap;
}

/**
 * Evaluate both sides. PASS iff the discrepancy meets `tolerance` and is
 * covered by the reported budget (floor 1e-12).
 */
inline EFReport verify(const SelbergLFunction& L, const SupportedFn& f, const ZeroStore& store, double tolerance,
                       std::optional<double> height = std::nullopt) {
    if (!(tolerance > 0.0)) throw DomainError("verify: tolerance must be positive");
    const double cap = store.entry(L.label).complete_to;
    const double T = height ? *height : choose_height(f, L.gamma, cap, tolerance);
    auto spec = spectral_side(L, f, store, T);
    auto arith = arithmetic_side(L, f, std::min(1e-11, 0.01 * tolerance));
    EFReport rep;
    rep.label = L.label;
    rep.spectral = spec.value;
    rep.arithmetic = arith.value;
    rep.discrepancy = std::abs(spec.value - arith.value);
    rep.budget = spec.budget() + arith.err;
    rep.zeros_used = spec.zeros_used;
    rep.T = T;
    rep.pass = rep.discrepancy <= tolerance && rep.discrepancy <= std::max(rep.budget, 1e-12);
    return rep;
}

// =============================================================================
// Local explicit formula
// =============================================================================

/// sum_{m >= 1} Lambda(p^m) f(p^m) + conj(Lambda(p^m)) p^{-m} f(p^{-m}).
inline cplx local_W(const EulerProductSpec& spec, const SupportedFn& f, std::uint64_t p) {
    const auto& fac = spec.factor(p);
    const double logp = std::log(static_cast<double>(p));
    const double P = static_cast<double>(p);
    const int m_up = static_cast<int>(std::floor(std::log(f.support.hi) / logp + 1e-12));
    const int m_down = static_cast<int>(std::floor(-std::log(f.support.lo) / logp + 1e-12));
    const auto r = power_sum_coeffs(fac, static_cast<std::size_t>(std::max({1, m_up, m_down})));
    ComplexKahanSum s;
    for (int m = 1; m <= m_up; ++m) s += r[static_cast<std::size_t>(m)] * logp * f(std::pow(P, m));
    for (int m = 1; m <= m_down; ++m)
        s += std::conj(r[static_cast<std::size_t>(m)]) * logp * std::pow(P, -m) * f(std::pow(P, -m));
    return s.value();
}

/**
 * Difference between the Poisson lattice sum and local_W at p, for roots
 * alpha on the unit circle:
 * log p * sum_i [ 2 f(1) + sum_{m>=1} alpha_i^m p^m f(p^m) + sum_{m>=1} conj(alpha_i)^m f(p^{-m}) ].
 */
inline cplx local_poisson_correction(const EulerProductSpec& spec, const SupportedFn& f, std::uint64_t p) {
    const auto& fac = spec.factor(p);
    if (!fac.roots) throw MissingDataError("local_poisson_correction: roots required");
    const double logp = std::log(static_cast<double>(p));
    const double P = static_cast<double>(p);
    ComplexKahanSum s;
    for (const auto& a : *fac.roots) {
        s += 2.0 * f(1.0);
        for (int m = 1; std::pow(P, m) <= f.support.hi; ++m) s += std::pow(a, m) * std::pow(P, m) * f(std::pow(P, m));
        for (int m = 1; std::pow(P, -m) >= f.support.lo; ++m) s += std::pow(std::conj(a), m) * f(std::pow(P, -m));
    }
    return logp * s.value();
}

/**
 * sum over zeros rho_{i,k} = i(theta_i + 2 pi k)/log p, |k| <= K, of
 * fhat(rho) + fhat(1 - conj rho). Roots must lie on the unit circle.
 */
inline Budgeted local_zero_sum(const EulerProductSpec& spec, const SupportedFn& f, std::uint64_t p, int K) {
    const auto& fac = spec.factor(p);
    if (!fac.roots) throw MissingDataError("local_zero_sum: roots required at p=" + std::to_string(p));
    for (const auto& a : *fac.roots)
        if (std::abs(std::abs(a) - 1.0) > 1e-10)
            throw DomainError("local_zero_sum: roots must lie on the unit circle");
    const double logp = std::log(static_cast<double>(p));
    const double top = (two_pi * (K + 1) + pi) / logp;
    MellinBatch batch = mellin_batch(f, top + 100.0);
    const double noise = 4.0 * detail::noise_floor(f, 1.0);
    ComplexKahanSum s;
    double err = 0.0;
    for (const auto& a : *fac.roots) {
        const double theta = std::arg(a);
        for (int k = -K; k <= K; ++k) {
            const cplx rho(0.0, (theta + two_pi * k) / logp);
            auto v1 = batch(rho);
            auto v2 = batch(1.0 - std::conj(rho));
            s += v1.value + v2.value;
            err += v1.err + v2.err;
        }
        // tail |k| > K: the next lattice terms until they fall below the running tail or the noise floor
        double tail = 0.0;
        for (int k0 = K + 1; k0 < K + 100000; k0 += 250) {
            MellinBatch far = mellin_batch(f, (std::abs(theta) + two_pi * (k0 + 251)) / logp + 10.0);
            bool done = false;
            for (int k = k0; k < k0 + 250 && !done; ++k) {
                double cell = 0.0;
                for (int sgn : {1, -1}) {
                    const cplx rho(0.0, (theta + two_pi * sgn * k) / logp);
                    cell += std::abs(far(rho).value) + std::abs(far(1.0 - std::conj(rho)).value);
                }
                tail += cell;
                done = cell < noise || (cell < 1e-6 * tail && k > K + 20);
            }
            if (done) break;
        }
        err += tail;
    }
    return {s.value(), err};
}

/**
 * sum_j sum_{n >= 0} fhat(-(n + mu_j)/lambda_j): zeros of the reciprocal
 * Gamma factor. Requires support in (1, inf), where the series converges
 * geometrically and equals sum_j W_{lambda_j, mu_j}(f).
 */
inline Budgeted gamma_local_sum(const GammaFactor& g, const SupportedFn& f, double tol = 1e-13) {
    if (!(f.support.lo > 1.0)) throw DomainError("gamma_local_sum: support must lie in (1, inf)");
    ComplexKahanSum s;
    double err = 0.0;
    const auto mag = mellin(SupportedFn{[f](double u) { return cplx(std::abs(f(u))); }, f.support, 0.0}, 0.0);
    for (const auto& pr : g.pairs) {
        const double ratio = std::pow(f.support.lo, -1.0 / pr.lambda);
        for (int n = 0;; ++n) {
            const cplx z = -(static_cast<double>(n) + pr.mu) / pr.lambda;
            auto v = mellin(f, z, tol);
            s += v.value;
            err += v.err;
            // remaining terms are bounded by |f|^(0) a^{-(n+1+Re mu)/lambda} / (1 - ratio)
            const double rest = mag.value.real() * std::pow(f.support.lo, -(n + 1 + pr.mu.real()) / pr.lambda) /
                                (1.0 - ratio);
            if (rest < tol || n > 100000) {
                err += rest;
                break;
            }
        }
    }
    return {s.value(), err};
}

// =============================================================================
// Explicit identities through interpolated weights
// =============================================================================

/// One side of an explicit identity, evaluated for L and the (possibly weighted) function f.
struct IdentitySide {
    std::string label;
    cplx value;
    double budget = 0.0;
    std::size_t zeros_used = 0;
};

/**
 * m fhat(0) - sum_rho fhat(rho) + m fhat(1) - sum_n conj(Lambda(n)) f*(n)
 *  - (-2 log Q + d C_E) f(1) - sum_j W_j(f),
 * which equals sum_n Lambda(n) f(n) by the explicit formula.
 */
inline IdentitySide identity_side(const SelbergLFunction& L, const SupportedFn& f, const ZeroStore& store, double T) {
    auto spec = spectral_side(L, f, store, T);
    auto full = arithmetic_side(L, f, 1e-12);
    // only the f* part of the prime side moves to this side
    ComplexKahanSum star;
    if (f.support.lo < 1.0) {
        const auto m_lo = static_cast<std::uint64_t>(std::max(1.0, std::ceil(1.0 / f.support.hi)));
        const auto m_hi = static_cast<std::uint64_t>(std::floor(1.0 / f.support.lo));
        for (std::uint64_t n = m_lo; n <= m_hi; ++n) {
            const double x = static_cast<double>(n);
            star += std::conj(L.lambda(n)) * f(1.0 / x) / x;
        }
    }
    const cplx star_sum = star.value();
    IdentitySide side;
    side.label = L.label;
    side.value = spec.value - star_sum - full.constant_term - full.archimedean;
    side.budget = spec.budget() + full.err;
    side.zeros_used = spec.zeros_used;
    return side;
}

struct IdentityReport {
    std::vector<IdentitySide> sides;
    double discrepancy = 0.0;  // largest pairwise difference
    double budget = 0.0;       // largest pairwise combined budget
    bool pass = false;

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["sides"] = nlohmann::ordered_json::array();
        for (const auto& s : sides)
            j["sides"].push_back({{"label", s.label},
                                  {"value_re", s.value.real()},
                                  {"value_im", s.value.imag()},
                                  {"budget", s.budget},
                                  {"zeros_used", s.zeros_used}});
        j["discrepancy"] = discrepancy;
        j["budget"] = budget;
        j["pass"] = pass;
        return j;
    }
};

inline IdentityReport compare_sides(std::vector<IdentitySide> sides, double tolerance) {
    IdentityReport rep;
    rep.sides = std::move(sides);
    for (std::size_t i = 0; i < rep.sides.size(); ++i)
        for (std::size_t j = i + 1; j < rep.sides.size(); ++j) {
            rep.discrepancy = std::max(rep.discrepancy, std::abs(rep.sides[i].value - rep.sides[j].value));
            rep.budget = std::max(rep.budget, rep.sides[i].budget + rep.sides[j].budget);
        }
    rep.pass = rep.discrepancy <= tolerance && rep.discrepancy <= std::max(rep.budget, 1e-12);
    return rep;
}

/**
 * L_phi side with h against the zeta side with h * Omega, where Omega
 * interpolates omega_phi on the integers.
 */
inline IdentityReport theorem7_identity(const SelbergLFunction& Lphi, const std::function<cplx(double)>& Omega,
                                        double omega_bandwidth, const TestFunction& h, const ZeroStore& store,
                                        double T, double tolerance = 1e-5) {
    const auto zeta = zeta_lfunction();
    auto f = h.as_fn();
    auto fo = weighted(f, Omega, omega_bandwidth);
    return compare_sides({identity_side(Lphi, f, store, T), identity_side(zeta, fo, store, T)}, tolerance);
}

/// Three-way version: L_{phi x psi} with h, L_phi with h Omega_psi, zeta with h Omega_phi Omega_psi.
inline IdentityReport theorem8_identity(const SelbergLFunction& Ltensor, const SelbergLFunction& Lphi,
                                        const std::function<cplx(double)>& Omega_phi,
                                        const std::function<cplx(double)>& Omega_psi, double bandwidth,
                                        const TestFunction& h, const ZeroStore& store, double T,
                                        double tolerance = 1e-5) {
    if (!store.has(Ltensor.label))
        throw MissingDataError("theorem8_identity: no zeros for '" + Ltensor.label + "'");
    const auto zeta = zeta_lfunction();
    auto f = h.as_fn();
    auto f1 = weighted(f, Omega_psi, bandwidth);
    auto f2 = weighted(f, [Omega_phi, Omega_psi](double u) { return Omega_phi(u) * Omega_psi(u); }, 2 * bandwidth);
    return compare_sides({identity_side(Ltensor, f, store, T), identity_side(Lphi, f1, store, T),
                          identity_side(zeta, f2, store, T)},
                         tolerance);
}

}  // namespace zerosum
