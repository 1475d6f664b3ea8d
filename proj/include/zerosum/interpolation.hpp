#pragma once

/**
 * @file interpolation.hpp
 * @brief Smooth functions on (0, inf) agreeing with a coefficient sequence at
 *        the positive integers: character interpolants, Fourier-series
 *        interpolants of q-expansions, modular interpolants and products.
 */

#include <zerosum/arithmetic.hpp>
#include <zerosum/quadrature.hpp>
#include <zerosum/testfn.hpp>

namespace zerosum {

struct InterpolationFn {
    std::function<cplx(double)> eval;
    std::optional<CoefficientStream> target;
    /// |phi(u)| <= growth_constant * u^growth_exponent on the declared range.
    double growth_exponent = 0.0;
    double growth_constant = 1.0;
    /// Largest angular frequency in u (for quadrature panel sizing).
    double bandwidth = 0.0;
    std::string label;

    cplx operator()(double u) const {
        if (!(u > 0.0)) throw DomainError("interpolation function evaluated at u <= 0");
        return eval(u);
    }

    /// max_n |phi(n) - target(n)| / max(1, |target(n)|) for n <= n_max.
    double integer_error(std::uint64_t n_max) const {
        if (!target) throw MissingDataError("interpolation '" + label + "' has no target stream");
        double e = 0.0;
        for (std::uint64_t n = 1; n <= n_max; ++n) {
            const cplx t = (*target)(n);
            e = std::max(e, std::abs(eval(static_cast<double>(n)) - t) / std::max(1.0, std::abs(t)));
        }
        return e;
    }

    /// max |phi(u)| / u^growth_exponent over a log grid on [u_min, u_max].
    double growth_ratio(double u_min, double u_max, int points = 400) const {
        double r = 0.0;
        const double a = std::log(u_min), b = std::log(u_max);
        for (int i = 0; i <= points; ++i) {
            const double u = std::exp(a + (b - a) * i / points);
            r = std::max(r, std::abs(eval(u)) / std::pow(u, growth_exponent));
        }
        return r;
    }
};

namespace detail {

/**
 * int_eta^{eta+1} e^{2 pi i d X} dX. The integer part of d is removed before
 * taking the sine so that the value is exactly zero at integer d != 0.
 */
inline cplx unit_interval_integral(double d, double eta) {
    const double k = std::nearbyint(d);
    const double frac = d - k;
    if (std::abs(d) < 1e-6) {
        // e^{2 pi i d eta} (1 + i pi d - (2/3) pi^2 d^2 + ...)
        const double t = pi * d;
        return std::polar(1.0, two_pi * d * eta) * std::polar(1.0, t) * (1.0 - t * t / 6.0);
    }
    // (e^{2 pi i d} - 1) / (2 pi i d) = e^{i pi d} sin(pi d) / (pi d)
    const double sgn = (static_cast<std::int64_t>(k) % 2 == 0) ? 1.0 : -1.0;
    const double s = sgn * std::sin(pi * frac);
    return std::polar(1.0, two_pi * d * eta + pi * d) * (s / (pi * d));
}

// sum_n a(n) e^{-2 pi n y} I(n - u): truncated once the remaining bound is negligible.
inline cplx q_expansion_sum(const CoefficientStream& a, double u, double y, double eta, double shift = 0.0) {
    ComplexKahanSum s;
    double running = 0.0;
    const double decay = std::exp(-two_pi * y);
    for (std::uint64_t n = 1;; ++n) {
        const double x = static_cast<double>(n);
        const double w = std::exp(-two_pi * y * x + shift);
        // geometric tail bound from the coefficient growth class
        const double tail = a.bound(n) * w / (1.0 - decay);
        if (x > u + 1.0 && tail < 1e-16 * std::max(running, 1e-300)) break;
        if (n >= a.limit || n > 50000000)
            throw PrecisionError("fourier interpolation: q-expansion tail not negligible at n=" + std::to_string(n) +
                                     "; increase y",
                                 0.0, tail);
        const cplx term = a(n) * w * unit_interval_integral(x - u, eta);
        s += term;
        running = std::max(running, std::abs(term));
    }
    return s.value();
}

}  // namespace detail

/// (1/tau(conj chi)) sum_a conj(chi)(a) e^{2 pi i a u / q}.
inline InterpolationFn phi_chi(const DirichletCharacter& chi) {
    InterpolationFn f;
    f.target = character_stream(chi);
    f.label = "phi:" + chi.label();
    if (chi.modulus == 1) {
        f.eval = [](double) { return cplx(1.0); };
        return f;
    }
    if (!chi.primitive) throw DomainError("phi_chi: character " + chi.label() + " is not primitive");
    const auto cc = chi.conj();
    const cplx tau = gauss_sum(cc);
    const auto q = chi.modulus;
    std::vector<std::pair<double, cplx>> terms;
    double mass = 0.0;
    for (std::uint64_t a = 1; a <= q; ++a) {
        const cplx v = cc(static_cast<std::int64_t>(a));
        if (v == 0.0) continue;
        terms.emplace_back(two_pi * static_cast<double>(a) / static_cast<double>(q), v / tau);
        mass += std::abs(v);
    }
    f.eval = [terms](double u) {
        cplx s = 0.0;
        for (const auto& [w, c] : terms) s += c * std::polar(1.0, w * u);
        return s;
    };
    f.growth_constant = mass / std::abs(tau);
    f.bandwidth = two_pi;
    return f;
}

/**
 * A(u) = e^{2 pi u y} int_eta^{eta+1} f_a(x + iy) e^{-2 pi i u x} dx with
 * f_a(z) = sum a(n) e^{2 pi i n z}, integrated termwise.
 */
inline InterpolationFn fourier_interp(const CoefficientStream& a, double y, double eta = 0.0) {
    if (!(y >= 0.05)) throw DomainError("fourier_interp: y must be at least 0.05");
    InterpolationFn f;
    f.target = a;
    f.label = "A:" + a.label;
    f.eval = [a, y, eta](double u) { return detail::q_expansion_sum(a, u, y, eta, two_pi * u * y); };
    // grows like e^{2 pi u y}: no polynomial class
    f.growth_exponent = std::numeric_limits<double>::infinity();
    f.growth_constant = std::numeric_limits<double>::infinity();
    f.bandwidth = two_pi * (std::abs(eta) + 1.0);
    return f;
}

/// The y = 1/u specialization: prefactor e^{2 pi}, bounded growth off the integers.
inline InterpolationFn fourier_interp_u(const CoefficientStream& a, double eta = 0.0) {
    InterpolationFn f;
    f.target = a;
    f.label = "Au:" + a.label;
    f.eval = [a, eta](double u) { return detail::q_expansion_sum(a, u, 1.0 / u, eta, two_pi); };
    f.growth_exponent = a.bound_exponent;
    f.growth_constant = std::exp(two_pi) * a.bound_constant;
    f.bandwidth = two_pi * (std::abs(eta) + 1.0);
    return f;
}

/**
 * phi_f(u) = u^{-(k-1)/2} e^{2 pi} sum_n a_f(n) e^{-2 pi n / u} int_1^2 e^{2 pi i (n-u) X} dX,
 * from the shifted stream a_f(n) n^{-(k-1)/2}.
 */
inline InterpolationFn phi_f(const CoefficientStream& shifted, int k) {
    if (k < 12 || k % 2 != 0) throw DomainError("phi_f: weight must be even and at least 12");
    const double half = 0.5 * (k - 1);
    CoefficientStream raw = shifted;
    raw.eval = [shifted, half](std::uint64_t n) { return shifted(n) * std::pow(static_cast<double>(n), half); };
    raw.bound_exponent = shifted.bound_exponent + half;
    InterpolationFn f;
    f.target = shifted;
    f.label = "phi_f:" + shifted.label;
    f.eval = [raw, half](double u) { return std::pow(u, -half) * detail::q_expansion_sum(raw, u, 1.0 / u, 1.0, two_pi); };
    f.growth_exponent = 0.5;
    f.growth_constant = std::exp(two_pi) * shifted.bound_constant;
    f.bandwidth = 2.0 * two_pi;
    return f;
}

inline InterpolationFn product_interp(const InterpolationFn& a, const InterpolationFn& b) {
    InterpolationFn f;
    f.eval = [a, b](double u) { return a.eval(u) * b.eval(u); };
    if (a.target && b.target) {
        CoefficientStream t;
        const auto ta = *a.target, tb = *b.target;
        t.eval = [ta, tb](std::uint64_t n) { return ta(n) * tb(n); };
        t.label = ta.label + "*" + tb.label;
        t.limit = std::min(ta.limit, tb.limit);
        t.bound_exponent = ta.bound_exponent + tb.bound_exponent;
        t.bound_constant = ta.bound_constant * tb.bound_constant;
        f.target = t;
    }
    f.growth_exponent = a.growth_exponent + b.growth_exponent;
    f.growth_constant = a.growth_constant * b.growth_constant;
    f.bandwidth = a.bandwidth + b.bandwidth;
    f.label = a.label + "*" + b.label;
    return f;
}

/// phi + c: breaks integer agreement (negative controls).
inline InterpolationFn offset_interp(const InterpolationFn& a, cplx c) {
    InterpolationFn f = a;
    f.eval = [a, c](double u) { return a.eval(u) + c; };
    f.label = a.label + "+offset";
    return f;
}

/// Two evaluations of int_0^inf h(xu) phi_chi(u) du.
struct OscillationResult {
    cplx direct;
    cplx by_parts;
    double err = 0.0;
};

/**
 * Directly, and after one integration by parts of each exponential:
 * int h(xu) e^{2 pi i a u/q} du = -(q / (2 pi i a)) int x h'(xu) e^{2 pi i a u/q} du.
 */
inline OscillationResult oscillation_integral(const DirichletCharacter& chi, const TestFunction& h, double x,
                                              double tol = 1e-10) {
    if (chi.modulus == 1 || !chi.primitive)
        throw DomainError("oscillation_integral: needs a primitive non-principal character");
    if (!(x > 0.0)) throw DomainError("oscillation_integral: x must be positive");
    const auto phi = phi_chi(chi);
    const double lo = h.support().lo / x, hi = h.support().hi / x;
    const auto panels = static_cast<std::size_t>(std::ceil((hi - lo) / 2.0)) + 1;
    OscillationResult r;
    const std::size_t budget = 4 * panels + 20000;
    // the oscillating integrals cancel down from int |h(xu)| du = |h|^(1) / x
    tol *= std::max(1.0, std::abs(mellin(h.as_fn(), 1.0).value) / x);
    auto d = integrate([&](double u) { return h(x * u) * phi(u); }, lo, hi, tol, panels, budget);
    r.direct = d.value;
    r.err = d.err;
    const auto cc = chi.conj();
    const cplx tau = gauss_sum(cc);
    const double q = static_cast<double>(chi.modulus);
    ComplexKahanSum s;
    for (std::uint64_t a = 1; a < chi.modulus; ++a) {
        const cplx v = cc(static_cast<std::int64_t>(a));
        if (v == 0.0) continue;
        const double w = two_pi * static_cast<double>(a) / q;
        auto part = integrate([&](double u) { return x * h.deriv(1, x * u) * std::polar(1.0, w * u); }, lo, hi, tol,
                              panels, budget);
        s += v * (-q / (two_pi * I * static_cast<double>(a))) * part.value;
        r.err += std::abs(q / (two_pi * static_cast<double>(a))) * part.err;
    }
    r.by_parts = s.value() / tau;
    return r;
}

}  // namespace zerosum
