#pragma once

/**
 * @file lfunctions.hpp
 * @brief Selberg-class L-function records: Gamma-factor data, completed
 *        L-values, functional-equation residuals, the archimedean functional
 *        W_{lambda,mu}, and an INI-backed registry.
 */

#include <zerosum/arithmetic.hpp>
#include <zerosum/euler.hpp>
#include <zerosum/quadrature.hpp>
#include <zerosum/special.hpp>
#include <zerosum/testfn.hpp>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <map>
#include <optional>

namespace zerosum {

struct GammaPair {
    double lambda;
    cplx mu;
};

/// Q^s prod_j Gamma(lambda_j s + mu_j) and the root number omega.
struct GammaFactor {
    double Q = 1.0;
    std::vector<GammaPair> pairs;
    cplx omega = 1.0;

    double degree() const {
        double d = 0.0;
        for (const auto& p : pairs) d += 2.0 * p.lambda;
        return d;
    }

    void validate() const {
        if (!(Q > 0.0)) throw DomainError("GammaFactor: Q must be positive");
        if (std::abs(std::abs(omega) - 1.0) > 1e-12) throw DomainError("GammaFactor: |omega| must be 1");
        for (const auto& p : pairs) {
            if (!(p.lambda > 0.0)) throw DomainError("GammaFactor: lambda must be positive");
            if (p.mu.real() < 0.0) throw DomainError("GammaFactor: Re(mu) must be nonnegative");
        }
    }

    /// log of Q^s prod Gamma(lambda s + mu) (imaginary part mod 2 pi).
    cplx log_factor(cplx s) const {
        cplx v = s * std::log(Q);
        for (const auto& p : pairs) v += log_gamma(p.lambda * s + p.mu);
        return v;
    }

    /// Distance from s to the nearest pole of the Gamma product.
    double pole_distance(cplx s) const {
        double d = std::numeric_limits<double>::infinity();
        for (const auto& p : pairs) {
            // poles at lambda s + mu = -n
            const cplx z = p.lambda * s + p.mu;
            if (z.real() > 0.5) continue;
            const double n = std::max(0.0, std::round(-z.real()));
            d = std::min(d, std::abs(z + n) / p.lambda);
        }
        return d;
    }
};

/// Which analytic continuation is available for direct evaluation.
enum class EvalRoute { none, dirichlet };

struct SelbergLFunction {
    std::string label;
    CoefficientStream a;
    std::function<cplx(std::uint64_t)> lambda;  // Lambda_L(n)
    GammaFactor gamma;
    int pole_order = 0;
    double theta = 0.0;
    bool real_coefficients = true;
    EvalRoute route = EvalRoute::none;
    std::optional<DirichletCharacter> chi;
    std::optional<EulerProductSpec> euler;

    cplx operator()(cplx s) const {
        if (route == EvalRoute::dirichlet) return dirichlet_L(*chi, s);
        throw MissingDataError("no evaluation route for L-function '" + label + "'");
    }

    bool evaluable() const { return route != EvalRoute::none; }
};

/// Conjugate-coefficient L-function, i.e. L(s, chi-bar) for characters.
inline SelbergLFunction dual(const SelbergLFunction& L);

inline SelbergLFunction dirichlet_lfunction(const DirichletCharacter& chi) {
    if (!chi.primitive) throw DomainError("dirichlet_lfunction: character must be primitive");
    SelbergLFunction L;
    L.label = chi.modulus == 1 ? "zeta" : "chi:" + chi.label();
    L.a = character_stream(chi);
    L.lambda = [chi](std::uint64_t n) { return von_mangoldt(n) * chi(static_cast<std::int64_t>(n)); };
    const double q = static_cast<double>(chi.modulus);
    const double a = chi.parity == Parity::odd ? 1.0 : 0.0;
    L.gamma.Q = std::sqrt(q / pi);
    L.gamma.pairs = {{0.5, a / 2.0}};
    L.gamma.omega = root_number(chi);
    L.pole_order = chi.modulus == 1 ? 1 : 0;
    L.real_coefficients = chi.is_real();
    L.route = EvalRoute::dirichlet;
    L.chi = chi;
    return L;
}

inline SelbergLFunction zeta_lfunction() { return dirichlet_lfunction(conrey_character(1, 1)); }

/// L(s, Delta) in the analytic normalization: Q = 1/(2 pi), Gamma(s + 11/2), omega = +1.
inline SelbergLFunction delta_lfunction(std::size_t coefficient_limit = 20000, std::uint64_t prime_limit = 20000) {
    SelbergLFunction L;
    L.label = "delta";
    L.a = shifted_coefficients(ramanujan_tau(coefficient_limit), 12);
    L.euler = modular_spec(L.a, std::min<std::uint64_t>(prime_limit, coefficient_limit), "delta");
    auto spec = std::make_shared<EulerProductSpec>(*L.euler);
    L.lambda = [spec](std::uint64_t n) { return lambda_phi(*spec, n); };
    L.gamma.Q = 1.0 / two_pi;
    L.gamma.pairs = {{1.0, 5.5}};
    L.gamma.omega = 1.0;
    return L;
}

/// L(s, Delta x Delta): Q = 1/(4 pi), Gamma(s + 11) Gamma(s), simple pole at s = 1.
inline SelbergLFunction delta_squared_lfunction(std::size_t coefficient_limit = 20000) {
    auto d = delta_lfunction(coefficient_limit, coefficient_limit);
    SelbergLFunction L;
    L.label = "delta(x)delta";
    L.euler = tensor_spec(*d.euler, *d.euler);
    auto spec = std::make_shared<EulerProductSpec>(*L.euler);
    L.lambda = [spec](std::uint64_t n) {
        auto pp = prime_power(n);
        if (!pp) return cplx(0.0);
        const auto m = static_cast<std::size_t>(pp->second);
        return power_sum_coeffs(spec->factor(pp->first), m)[m] * std::log(static_cast<double>(pp->first));
    };
    L.gamma.Q = 1.0 / (2.0 * two_pi);
    L.gamma.pairs = {{1.0, 11.0}, {1.0, 0.0}};
    L.gamma.omega = 1.0;
    L.pole_order = 1;
    return L;
}

inline SelbergLFunction dual(const SelbergLFunction& L) {
    if (L.chi) return dirichlet_lfunction(L.chi->conj());
    if (L.real_coefficients) return L;
    throw MissingDataError("dual of '" + L.label + "' is not available");
}

/// L*(s) = Q^s prod Gamma(lambda_j s + mu_j) L(s).
inline cplx complete(const SelbergLFunction& L, cplx s) {
    if (L.gamma.pole_distance(s) < 1e-6) throw DomainError("complete: s is too close to a Gamma pole");
    if (L.pole_order > 0 && std::abs(s - 1.0) < 1e-6) throw DomainError("complete: s is too close to s = 1");
    return std::exp(L.gamma.log_factor(s)) * L(s);
}

/// |L*(s) - omega conj(L*(1 - conj s))| / max(|L*(s)|, 1).
inline double functional_equation_residual(const SelbergLFunction& L, cplx s) {
    const cplx lhs = complete(L, s);
    const cplx rhs = L.gamma.omega * std::conj(complete(L, 1.0 - std::conj(s)));
    return std::abs(lhs - rhs) / std::max(std::abs(lhs), 1.0);
}

// =============================================================================
// Archimedean functional
// =============================================================================

/**
 * W_{lambda,mu}(h) = int_1^inf [h_{lm}(u) + (h_{lm})*(u) - 2 h(1) u^{(Re mu - 1)/lambda}]
 *                    u^{(1 - Re mu)/lambda} / (u^{1/lambda} - 1) du/u,
 * evaluated in v = log u. Past the supports only the h(1) term survives and is
 * integrated in closed form. Gauss nodes never touch v = 0, and the
 * cancellation error of the removable singularity there is O(eps / v), which
 * integrates to a negligible amount.
 */
inline QuadResult archimedean_W(double lambda, cplx mu, const SupportedFn& h, double tol = default_tol) {
    if (!(lambda > 0.0)) throw DomainError("archimedean_W: lambda must be positive");
    if (mu.real() < 0.0) throw DomainError("archimedean_W: Re(mu) must be nonnegative");
    const double re = mu.real(), k = mu.imag() / lambda;
    const cplx h1 = h(1.0);
    const double vmax = std::max({0.0, std::log(h.support.hi), -std::log(h.support.lo)});
    auto integrand = [&](double v) -> cplx {
        const cplx twist = std::polar(1.0, -k * v);
        const cplx direct = h(std::exp(v)) * twist;
        const cplx star = std::exp(-v) * h(std::exp(-v)) / twist;
        const cplx bracket = direct + star - 2.0 * h1 * std::exp(v * (re - 1.0) / lambda);
        // u^{(1-re)/lambda} / (u^{1/lambda} - 1) with u = e^v
        return bracket * std::exp(v * (1.0 - re) / lambda) / std::expm1(v / lambda);
    };
    QuadResult r{};
    if (vmax > 0.0) {
        const double freq = std::abs(k) + h.bandwidth * std::exp(vmax);
        r = integrate(integrand, 0.0, vmax, tol, detail::oscillation_panels(freq, vmax));
    }
    if (h1 != 0.0) {
        // -2 h(1) int_{vmax}^inf dv / (e^{v/lambda} - 1) = 2 h(1) lambda log(1 - e^{-vmax/lambda})
        const double tail = std::log(-std::expm1(-vmax / lambda));
        r.value += 2.0 * h1 * lambda * tail;
    }
    return r;
}

inline QuadResult archimedean_W(double lambda, cplx mu, const TestFunction& h, double tol = default_tol) {
    return archimedean_W(lambda, mu, h.as_fn(), tol);
}

/**
 * W_{lambda,mu}(u -> h(x u)) through the substitution v = x u:
 * x^{mu/lambda} int h(v) v^{(1-mu)/lambda} / (v^{1/lambda} - x^{1/lambda}) dv/v.
 * Requires the support of u -> h(x u) to lie in (1, inf).
 */
inline QuadResult scaled_archimedean_W(double lambda, cplx mu, const SupportedFn& h, double x,
                                       double tol = default_tol) {
    if (!(x > 0.0) || !(h.support.lo / x > 1.0))
        throw DomainError("scaled_archimedean_W: support of u -> h(xu) must lie in (1, inf)");
    const double xl = std::pow(x, 1.0 / lambda);
    auto integrand = [&](double w) -> cplx {
        const double v = std::exp(w);
        return h(v) * std::exp((1.0 - mu) / lambda * w) / (std::pow(v, 1.0 / lambda) - xl);
    };
    const double wa = std::log(h.support.lo), wb = std::log(h.support.hi);
    const double freq = std::abs(mu.imag()) / lambda + h.bandwidth * h.support.hi;
    auto r = integrate(integrand, wa, wb, tol / std::max(1.0, std::abs(std::pow(x, mu / lambda))),
                       detail::oscillation_panels(freq, wb - wa));
    const cplx scale = std::exp(mu / lambda * std::log(x));
    return {scale * r.value, std::abs(scale) * r.err, r.evals};
}

inline QuadResult scaled_archimedean_W(double lambda, cplx mu, const TestFunction& h, double x,
                                       double tol = default_tol) {
    return scaled_archimedean_W(lambda, mu, h.as_fn(), x, tol);
}

// =============================================================================
// Registry
// =============================================================================

/**
 * Named L-functions. Built-ins: "zeta", "delta", "delta(x)delta" and any
 * primitive character label "q.n". An INI file may add entries:
 *
 *   [name]
 *   character = 5.2          ; or
 *   coefficients = path.csv  ; n,re,im records of a(n)
 *   Q = 0.159154943
 *   lambda = 1 1             ; one entry per Gamma pair
 *   mu = 11 0
 *   omega_re = 1
 *   omega_im = 0
 *   pole_order = 1
 */
class Registry {
public:
    Registry() = default;

    static Registry from_ini(const std::string& path) {
        boost::property_tree::ptree tree;
        try {
            boost::property_tree::read_ini(path, tree);
        } catch (const boost::property_tree::ini_parser_error& e) {
            throw ParseError(std::string("registry: ") + e.message(), e.line());
        }
        Registry reg;
        for (const auto& [name, sec] : tree) {
            if (auto ch = sec.get_optional<std::string>("character")) {
                auto L = dirichlet_lfunction(character_from_label(*ch));
                L.label = name;
                reg.entries_.insert_or_assign(name, L);
                continue;
            }
            SelbergLFunction L;
            L.label = name;
            if (auto file = sec.get_optional<std::string>("coefficients"))
                L.a = coefficient_file_stream(*file, name);
            L.gamma.Q = sec.get<double>("Q", 1.0);
            std::istringstream ls(sec.get<std::string>("lambda", "")), ms(sec.get<std::string>("mu", ""));
            double lam, mu;
            while (ls >> lam && ms >> mu) L.gamma.pairs.push_back({lam, mu});
            L.gamma.omega = {sec.get<double>("omega_re", 1.0), sec.get<double>("omega_im", 0.0)};
            L.pole_order = sec.get<int>("pole_order", 0);
            L.gamma.validate();
            reg.entries_.insert_or_assign(name, L);
        }
        return reg;
    }

    void add(SelbergLFunction L) { entries_.insert_or_assign(L.label, std::move(L)); }

    bool contains(const std::string& label) const {
        try {
            (void)get(label);
            return true;
        } catch (const Error&) {
            return false;
        }
    }

    SelbergLFunction get(const std::string& label) const {
        if (auto it = entries_.find(label); it != entries_.end()) return it->second;
        if (label == "zeta") return zeta_lfunction();
        if (label == "delta") return delta_lfunction();
        if (label == "delta(x)delta") return delta_squared_lfunction();
        if (label.find('.') != std::string::npos) {
            std::uint64_t q = 0, n = 0;
            char dot = 0;
            std::istringstream is(label);
            if (is >> q >> dot >> n && dot == '.' && is.peek() == EOF && q >= 1) {
                if (std::gcd(n % q, q) != 1 && q > 1) throw DomainError("unknown character label " + label);
                auto chi = conrey_character(q, n);
                if (!chi.primitive) throw DomainError("character " + label + " is not primitive");
                return dirichlet_lfunction(chi);
            }
        }
        throw DomainError("unknown L-function label '" + label + "'");
    }

private:
    std::map<std::string, SelbergLFunction> entries_;
};

}  // namespace zerosum
