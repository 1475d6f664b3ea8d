#pragma once

/**
 * @file euler.hpp
 * @brief Local Euler factors P_p(X) = 1 - c_1 X - ... - c_n X^n and the
 *        conversions between their coefficients, roots, Dirichlet
 *        coefficients phi(p^m), power sums r_m(p) and von Mangoldt values.
 */

#include <zerosum/arithmetic.hpp>
#include <zerosum/core.hpp>

#include <map>
#include <optional>
#include <set>

namespace zerosum {

/// Roots of z^n + a_{n-1} z^{n-1} + ... + a_0 (monic, a given low to high).
inline std::vector<cplx> polynomial_roots(const std::vector<cplx>& a, double tol = 1e-14) {
    const std::size_t n = a.size();
    if (n == 0) return {};
    auto eval = [&](cplx z) {
        cplx v = 1.0;
        for (std::size_t k = n; k-- > 0;) v = v * z + a[k];
        return v;
    };
    double radius = 0.0;
    for (const auto& c : a) radius = std::max(radius, std::abs(c));
    radius = 1.0 + radius;
    std::vector<cplx> z(n);
    const cplx seed(0.4, 0.9);
    for (std::size_t i = 0; i < n; ++i) z[i] = radius * std::pow(seed, static_cast<double>(i));
    // Durand-Kerner
    for (int it = 0; it < 2000; ++it) {
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            cplx denom = 1.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) denom *= z[i] - z[j];
            if (denom == 0.0) denom = 1e-300;
            const cplx step = eval(z[i]) / denom;
            z[i] -= step;
            change = std::max(change, std::abs(step));
        }
        if (change < tol * radius) break;
    }
    // one Newton polish per root
    for (auto& r : z) {
        cplx d = 0.0, v = 1.0;
        for (std::size_t k = n; k-- > 0;) {
            d = d * r + v;
            v = v * r + a[k];
        }
        if (d != 0.0) r -= v / d;
    }
    return z;
}

/// Elementary symmetric polynomials e_0..e_n of the given values.
inline std::vector<cplx> elementary_symmetric(const std::vector<cplx>& x) {
    std::vector<cplx> e(x.size() + 1, 0.0);
    e[0] = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t k = i + 1; k >= 1; --k) e[k] += e[k - 1] * x[i];
    return e;
}

/**
 * P_p(X) = 1 - c_1 X - ... - c_n X^n = prod (1 - alpha_i X). `c[l-1]`
 * holds c_l; degree n = c.size() with c_n != 0 (n may be 0).
 */
struct LocalFactor {
    std::uint64_t p = 2;
    std::vector<cplx> c;
    std::optional<std::vector<cplx>> roots;

    std::size_t degree() const { return c.size(); }

    /// c_l = (-1)^{l+1} e_l(alpha).
    static LocalFactor from_roots(std::uint64_t p, std::vector<cplx> alpha) {
        LocalFactor f;
        f.p = p;
        auto e = elementary_symmetric(alpha);
        for (std::size_t l = 1; l < e.size(); ++l) f.c.push_back((l % 2 ? 1.0 : -1.0) * e[l]);
        while (!f.c.empty() && f.c.back() == 0.0) f.c.pop_back();
        alpha.erase(std::remove(alpha.begin(), alpha.end(), cplx(0.0)), alpha.end());
        f.roots = std::move(alpha);
        return f;
    }

    static LocalFactor from_coefficients(std::uint64_t p, std::vector<cplx> c, bool find_roots = true) {
        LocalFactor f;
        f.p = p;
        while (!c.empty() && std::abs(c.back()) == 0.0) c.pop_back();
        f.c = std::move(c);
        if (find_roots) f.compute_roots();
        return f;
    }

    /// Roots of P_p: alpha^n - c_1 alpha^{n-1} - ... - c_n = 0.
    void compute_roots() {
        const std::size_t n = c.size();
        std::vector<cplx> a(n);
        for (std::size_t k = 0; k < n; ++k) a[k] = -c[n - 1 - k];
        roots = polynomial_roots(a);
    }

    /// Coefficients of P_p(X), index = power of X.
    std::vector<cplx> polynomial() const {
        std::vector<cplx> poly(c.size() + 1);
        poly[0] = 1.0;
        for (std::size_t l = 0; l < c.size(); ++l) poly[l + 1] = -c[l];
        return poly;
    }
};

/// phi(p^m) for 0 <= m <= m_max from the recurrence phi(p^m) = sum_{j <= min(m,n)} c_j phi(p^{m-j}).
inline std::vector<cplx> dirichlet_from_local(const LocalFactor& f, std::size_t m_max) {
    std::vector<cplx> phi(m_max + 1, 0.0);
    phi[0] = 1.0;
    for (std::size_t m = 1; m <= m_max; ++m) {
        ComplexKahanSum s;
        for (std::size_t j = 1; j <= std::min(m, f.degree()); ++j) s += f.c[j - 1] * phi[m - j];
        phi[m] = s.value();
    }
    return phi;
}

/**
 * Recover c_1..c_{n_p} from phi(p), ..., phi(p^j) (phi_pm[i] = phi(p^{i+1})),
 * via c_j = sum_l (-1)^{l+1} [X^j] F(X)^l with F = sum_{i>=1} phi(p^i) X^i.
 * Supplied values beyond the degree must satisfy the recurrence.
 */
inline LocalFactor local_from_dirichlet(std::uint64_t p, const std::vector<cplx>& phi_pm,
                                        std::size_t n_p, double tol = 1e-9) {
    if (phi_pm.size() < n_p) throw DomainError("local_from_dirichlet: need phi(p^m) for m <= degree");
    const std::size_t J = n_p;
    std::vector<cplx> F(J + 1, 0.0);
    for (std::size_t i = 1; i <= J; ++i) F[i] = phi_pm[i - 1];
    std::vector<cplx> c(J, 0.0);
    std::vector<cplx> power = F;  // F^l truncated at degree J
    for (std::size_t l = 1; l <= J; ++l) {
        const double sign = l % 2 ? 1.0 : -1.0;
        for (std::size_t j = 1; j <= J; ++j) c[j - 1] += sign * power[j];
        std::vector<cplx> next(J + 1, 0.0);
        for (std::size_t a = 1; a <= J; ++a)
            for (std::size_t b = 1; a + b <= J; ++b) next[a + b] += power[a] * F[b];
        power = std::move(next);
    }
    LocalFactor f;
    f.p = p;
    f.c = c;
    while (!f.c.empty() && std::abs(f.c.back()) == 0.0) f.c.pop_back();
    // consistency of the remaining supplied values
    auto predicted = dirichlet_from_local(f, phi_pm.size());
    double worst = 0.0;
    std::size_t at = 0;
    for (std::size_t m = n_p + 1; m <= phi_pm.size(); ++m) {
        const double r = std::abs(predicted[m] - phi_pm[m - 1]) / std::max(1.0, std::abs(phi_pm[m - 1]));
        if (r > worst) {
            worst = r;
            at = m;
        }
    }
    if (worst > tol)
        throw DomainError("local_from_dirichlet: supplied phi(p^" + std::to_string(at) +
                          ") violates the degree-" + std::to_string(n_p) +
                          " recurrence, relative residual " + std::to_string(worst));
    if (f.degree() > 0) f.compute_roots();
    return f;
}

/// r_m(p) = sum_{j=1}^{min(m,n)} j c_j phi(p^{m-j}), 1 <= m <= m_max; index 0 unused.
inline std::vector<cplx> power_sum_coeffs(const LocalFactor& f, std::size_t m_max) {
    auto phi = dirichlet_from_local(f, m_max);
    std::vector<cplx> r(m_max + 1, 0.0);
    for (std::size_t m = 1; m <= m_max; ++m) {
        ComplexKahanSum s;
        for (std::size_t j = 1; j <= std::min(m, f.degree()); ++j)
            s += static_cast<double>(j) * f.c[j - 1] * phi[m - j];
        r[m] = s.value();
    }
    return r;
}

/// Pairwise products of roots.
inline LocalFactor tensor_local(const LocalFactor& f, const LocalFactor& g) {
    if (f.p != g.p) throw DomainError("tensor_local: factors belong to different primes");
    if (!f.roots || !g.roots)
        throw MissingDataError("tensor_local: root data (or an explicit local factor) required at p=" +
                               std::to_string(f.p));
    std::vector<cplx> prod;
    for (auto a : *f.roots)
        for (auto b : *g.roots) prod.push_back(a * b);
    return LocalFactor::from_roots(f.p, prod);
}

// =============================================================================
// Euler products
// =============================================================================

/// Local factors at all primes up to `prime_limit`, plus the exceptional set.
struct EulerProductSpec {
    std::string label;
    std::size_t rank = 1;
    std::uint64_t prime_limit = 0;
    std::map<std::uint64_t, LocalFactor> factors;
    std::set<std::uint64_t> exceptional;

    const LocalFactor& factor(std::uint64_t p) const {
        auto it = factors.find(p);
        if (it == factors.end())
            throw MissingDataError("Euler product '" + label + "' has no local factor at p=" + std::to_string(p));
        return it->second;
    }

    void add(LocalFactor f) {
        if (f.degree() != rank) exceptional.insert(f.p);
        factors.insert_or_assign(f.p, std::move(f));
    }
};

inline EulerProductSpec zeta_spec(std::uint64_t prime_limit) {
    EulerProductSpec s;
    s.label = "zeta";
    s.rank = 1;
    s.prime_limit = prime_limit;
    for (auto p : PrimeTable(prime_limit).primes()) s.add(LocalFactor::from_roots(p, {1.0}));
    return s;
}

inline EulerProductSpec character_spec(const DirichletCharacter& chi, std::uint64_t prime_limit) {
    EulerProductSpec s;
    s.label = "chi:" + chi.label();
    s.rank = 1;
    s.prime_limit = prime_limit;
    for (auto p : PrimeTable(prime_limit).primes()) {
        const cplx v = chi(static_cast<std::int64_t>(p));
        s.add(v == 0.0 ? LocalFactor::from_roots(p, {}) : LocalFactor::from_roots(p, {v}));
    }
    return s;
}

/// Level-1 form with normalized coefficients a(p): P_p = 1 - a(p) X + X^2 (c_2 = -1).
inline EulerProductSpec modular_spec(const CoefficientStream& shifted, std::uint64_t prime_limit,
                                     std::string label = "modular") {
    EulerProductSpec s;
    s.label = std::move(label);
    s.rank = 2;
    s.prime_limit = prime_limit;
    for (auto p : PrimeTable(prime_limit).primes()) {
        const cplx a = shifted(p);
        const cplx disc = std::sqrt(a * a - 4.0);
        s.add(LocalFactor::from_roots(p, {(a + disc) / 2.0, (a - disc) / 2.0}));
        s.factors.at(p).c = {a, -1.0};  // exact coefficients rather than re-expanded ones
    }
    return s;
}

/// Random-access view of r_m(p) across a spec, cached per prime.
class PowerSums {
public:
    PowerSums(const EulerProductSpec& spec, std::size_t m_max) : m_max_(m_max) {
        for (const auto& [p, f] : spec.factors) table_.emplace(p, power_sum_coeffs(f, m_max));
        label_ = spec.label;
    }
    cplx operator()(std::uint64_t p, std::size_t m) const {
        auto it = table_.find(p);
        if (it == table_.end())
            throw MissingDataError("Euler product '" + label_ + "' has no local factor at p=" + std::to_string(p));
        if (m > m_max_) throw DomainError("PowerSums: exponent beyond cached range");
        return it->second[m];
    }

private:
    std::size_t m_max_;
    std::string label_;
    std::map<std::uint64_t, std::vector<cplx>> table_;
};

/// r_m(p) log p for n = p^m, else 0.
inline cplx lambda_phi(const EulerProductSpec& spec, std::uint64_t n) {
    if (n == 0) throw DomainError("lambda_phi: n must be positive");
    auto pp = prime_power(n);
    if (!pp) return 0.0;
    const auto& f = spec.factor(pp->first);
    return power_sum_coeffs(f, static_cast<std::size_t>(pp->second))[static_cast<std::size_t>(pp->second)] *
           std::log(static_cast<double>(pp->first));
}

/// sum_i alpha(p,i)^m for n = p^m, else 0.
inline cplx omega_phi(const EulerProductSpec& spec, std::uint64_t n) {
    if (n == 0) throw DomainError("omega_phi: n must be positive");
    auto pp = prime_power(n);
    if (!pp) return 0.0;
    const auto m = static_cast<std::size_t>(pp->second);
    return power_sum_coeffs(spec.factor(pp->first), m)[m];
}

/// n -> omega_phi(n) as a coefficient stream (bounded by rank on unit-circle specs).
inline CoefficientStream omega_stream(const EulerProductSpec& spec) {
    auto shared = std::make_shared<EulerProductSpec>(spec);
    CoefficientStream s;
    s.eval = [shared](std::uint64_t n) { return omega_phi(*shared, n); };
    s.bound_constant = static_cast<double>(spec.rank);
    s.label = "omega:" + spec.label;
    s.limit = spec.prime_limit;
    return s;
}

/// Lambda_{phi (x) psi}(n). Exceptional primes need an entry in `overrides`.
inline cplx lambda_tensor(const EulerProductSpec& phi, const EulerProductSpec& psi, std::uint64_t n,
                          const std::map<std::uint64_t, LocalFactor>& overrides = {}) {
    if (n == 0) throw DomainError("lambda_tensor: n must be positive");
    auto pp = prime_power(n);
    if (!pp) return 0.0;
    const auto [p, e] = *pp;
    const auto m = static_cast<std::size_t>(e);
    const double logp = std::log(static_cast<double>(p));
    if (phi.exceptional.count(p) || psi.exceptional.count(p)) {
        auto it = overrides.find(p);
        if (it == overrides.end())
            throw MissingDataError("lambda_tensor: p=" + std::to_string(p) +
                                   " is exceptional and no local factor override was supplied");
        return power_sum_coeffs(it->second, m)[m] * logp;
    }
    return power_sum_coeffs(phi.factor(p), m)[m] * power_sum_coeffs(psi.factor(p), m)[m] * logp;
}

/// Local factors of the tensor product at non-exceptional primes.
inline EulerProductSpec tensor_spec(const EulerProductSpec& phi, const EulerProductSpec& psi,
                                    const std::map<std::uint64_t, LocalFactor>& overrides = {}) {
    EulerProductSpec s;
    s.label = phi.label + "(x)" + psi.label;
    s.rank = phi.rank * psi.rank;
    s.prime_limit = std::min(phi.prime_limit, psi.prime_limit);
    for (const auto& [p, f] : phi.factors) {
        if (p > s.prime_limit) continue;
        if (phi.exceptional.count(p) || psi.exceptional.count(p)) {
            auto it = overrides.find(p);
            if (it == overrides.end()) {
                s.exceptional.insert(p);
                continue;
            }
            s.factors.insert_or_assign(p, it->second);
            s.exceptional.insert(p);
            continue;
        }
        s.factors.insert_or_assign(p, tensor_local(f, psi.factor(p)));
    }
    return s;
}

}  // namespace zerosum
