#pragma once

/**
 * @file testfn.hpp
 * @brief Compactly supported smooth test functions, Mellin transforms, the
 *        involution h -> h*, twists, and the weighted integrals built on them.
 */

#include <zerosum/core.hpp>
#include <zerosum/quadrature.hpp>

#include <array>
#include <memory>

namespace zerosum {

inline constexpr double default_tol = 1e-10;

/// A complex function on (0, inf) that vanishes outside `support`.
struct SupportedFn {
    std::function<cplx(double)> eval;
    Interval support;
    /// Largest angular frequency (in u) of any oscillating factor; 0 if none.
    double bandwidth = 0.0;

    cplx operator()(double u) const { return support.contains(u) ? eval(u) : cplx(0.0); }
};

/**
 * Finite linear combination of classical bumps
 * b_{c,r}(u) = exp(-1 / (1 - ((u - c)/r)^2)) on (c - r, c + r).
 */
class TestFunction {
public:
    struct Piece {
        double weight, center, radius;
    };

    TestFunction() = default;
    explicit TestFunction(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
        if (pieces_.empty()) throw DomainError("TestFunction: no pieces");
        support_ = {pieces_.front().center - pieces_.front().radius,
                    pieces_.front().center + pieces_.front().radius};
        for (const auto& p : pieces_) {
            if (!(p.radius > 0.0) || p.center - p.radius <= 0.0)
                throw DomainError("bump: support must lie in (0, inf); need center > radius > 0");
            support_.lo = std::min(support_.lo, p.center - p.radius);
            support_.hi = std::max(support_.hi, p.center + p.radius);
        }
    }

    const Interval& support() const { return support_; }
    const std::vector<Piece>& pieces() const { return pieces_; }

    double operator()(double u) const { return deriv(0, u); }

    /// k-th derivative in u, 0 <= k <= 4.
    double deriv(int k, double u) const {
        if (k < 0 || k > 4) throw DomainError("TestFunction::deriv: order must be in [0, 4]");
        double s = 0.0;
        for (const auto& p : pieces_) s += p.weight * bump_deriv(k, (u - p.center) / p.radius) / std::pow(p.radius, k);
        return s;
    }

    TestFunction operator+(const TestFunction& o) const {
        auto v = pieces_;
        v.insert(v.end(), o.pieces_.begin(), o.pieces_.end());
        return TestFunction(v);
    }

    TestFunction scaled(double c) const {
        auto v = pieces_;
        for (auto& p : v) p.weight *= c;
        return TestFunction(v);
    }

    SupportedFn as_fn() const {
        auto self = std::make_shared<TestFunction>(*this);
        return {[self](double u) { return cplx((*self)(u)); }, support_, 0.0};
    }

    /// d^k/dt^k exp(-1/(1 - t^2)) on |t| < 1.
    static double bump_deriv(int k, double t) {
        if (!(t > -1.0 && t < 1.0)) return 0.0;
        const double am = 1.0 - t, ap = 1.0 + t;
        const double g0 = -1.0 / (am * ap);
        if (g0 < -700.0) return 0.0;
        const double e = std::exp(g0);
        if (k == 0) return e;
        // g^{(j)} = -(j!/2) [ (1-t)^{-j-1} + (-1)^j (1+t)^{-j-1} ]
        std::array<double, 5> g{};
        double fact = 1.0;
        for (int j = 1; j <= 4; ++j) {
            fact *= j;
            g[j] = -0.5 * fact * (std::pow(am, -j - 1) + (j % 2 ? -1.0 : 1.0) * std::pow(ap, -j - 1));
        }
        switch (k) {
            case 1: return g[1] * e;
            case 2: return (g[2] + g[1] * g[1]) * e;
            case 3: return (g[3] + 3 * g[1] * g[2] + g[1] * g[1] * g[1]) * e;
            default:
                return (g[4] + 4 * g[1] * g[3] + 3 * g[2] * g[2] + 6 * g[1] * g[1] * g[2] +
                        g[1] * g[1] * g[1] * g[1]) *
                       e;
        }
    }

private:
    std::vector<Piece> pieces_;
    Interval support_;
};

inline TestFunction bump(double center, double radius) {
    if (!(center > radius)) throw DomainError("bump: center must exceed radius");
    return TestFunction({{1.0, center, radius}});
}

/// h* (u) = u^{-1} h(1/u).
inline SupportedFn involution(const SupportedFn& h) {
    return {[h](double u) { return h(1.0 / u) / u; }, {1.0 / h.support.hi, 1.0 / h.support.lo},
            h.bandwidth};
}

inline SupportedFn involution(const TestFunction& h) { return involution(h.as_fn()); }

/// h_{lambda,mu}(u) = h(u) u^{-i Im(mu)/lambda}.
inline SupportedFn twisted(const SupportedFn& h, double lambda, cplx mu) {
    if (!(lambda > 0.0)) throw DomainError("twisted: lambda must be positive");
    const double k = mu.imag() / lambda;
    if (k == 0.0) return h;
    return {[h, k](double u) { return h(u) * std::polar(1.0, -k * std::log(u)); }, h.support,
            h.bandwidth};
}

inline SupportedFn twisted(const TestFunction& h, double lambda, cplx mu) {
    return twisted(h.as_fn(), lambda, mu);
}

/// u -> h(x u).
inline SupportedFn dilated(const SupportedFn& h, double x) {
    if (!(x > 0.0)) throw DomainError("dilated: x must be positive");
    return {[h, x](double u) { return h(x * u); }, {h.support.lo / x, h.support.hi / x}, h.bandwidth * x};
}

/// u -> h(u) w(u) restricted to the support of h.
inline SupportedFn weighted(const SupportedFn& h, std::function<cplx(double)> w, double w_bandwidth) {
    return {[h, w](double u) { return h(u) * w(u); }, h.support, h.bandwidth + w_bandwidth};
}

struct MellinValue {
    cplx s;
    cplx value;
    double err;
};

namespace detail {

// Panels needed to resolve phase of frequency `freq` (in log u) over `width`.
inline std::size_t oscillation_panels(double freq, double width) {
    return static_cast<std::size_t>(std::ceil(freq * width / 20.0)) + 1;
}

}  // namespace detail

/// int_0^inf f(u) u^s du/u, computed in v = log u.
inline MellinValue mellin(const SupportedFn& f, cplx s, double tol = default_tol) {
    const double va = std::log(f.support.lo), vb = std::log(f.support.hi);
    const double freq = std::abs(s.imag()) + f.bandwidth * f.support.hi;
    auto r = integrate([&](double v) { return f(std::exp(v)) * std::exp(s * v); }, va, vb, tol,
                       detail::oscillation_panels(freq, vb - va));
    return {s, r.value, r.err};
}

inline MellinValue mellin(const TestFunction& h, cplx s, double tol = default_tol) {
    return mellin(h.as_fn(), s, tol);
}

/// int h(x u) phi(u) u^rho du/u; phi defaults to 1.
inline MellinValue zero_sum_integral(const TestFunction& h, double x, cplx rho,
                                     const std::function<cplx(double)>& phi = {},
                                     double phi_bandwidth = 0.0, double tol = default_tol) {
    auto f = dilated(h.as_fn(), x);
    if (phi) f = weighted(f, phi, phi_bandwidth);
    return mellin(f, rho, tol);
}

/// int h(x u^2) u^mu du/u.
inline MellinValue j_integral(const TestFunction& h, double x, cplx mu, double tol = default_tol) {
    if (!(x > 0.0)) throw DomainError("j_integral: x must be positive");
    const SupportedFn f{[h, x](double u) { return cplx(h(x * u * u)); },
                        {std::sqrt(h.support().lo / x), std::sqrt(h.support().hi / x)}, 0.0};
    return mellin(f, mu, tol);
}

/// Fixed-grid Mellin evaluator for one function and many s with |Im s| <= max_freq.
inline MellinBatch mellin_batch(const SupportedFn& f, double max_freq) {
    const double va = std::log(f.support.lo), vb = std::log(f.support.hi);
    return MellinBatch([&](double v) { return f(std::exp(v)); }, va, vb,
                       max_freq + f.bandwidth * f.support.hi);
}

}  // namespace zerosum
