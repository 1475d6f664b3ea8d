#pragma once

/**
 * @file special.hpp
 * @brief Complex log-Gamma, Hurwitz zeta and Dirichlet L-values.
 */

#include <zerosum/arithmetic.hpp>
#include <zerosum/core.hpp>

#include <array>

namespace zerosum {

namespace detail {

/// B_{2k}/(2k)! for k = 0..30, from B_{2k}/(2k)! = (-1)^{k+1} 2 zeta(2k) / (2 pi)^{2k}.
inline const std::array<double, 31>& bernoulli_over_factorial() {
    static const std::array<double, 31> table = [] {
        std::array<double, 31> t{};
        t[0] = 1.0;
        for (int k = 1; k <= 30; ++k) {
            double z = 0.0;  // zeta(2k) by direct summation; converges fast for k >= 1
            for (int n = 200; n >= 1; --n) z += std::pow(static_cast<double>(n), -2.0 * k);
            if (k == 1) z = pi * pi / 6.0;
            t[k] = (k % 2 ? 2.0 : -2.0) * z / std::pow(two_pi, 2.0 * k);
        }
        return t;
    }();
    return table;
}

/// Bernoulli numbers B_2..B_20 for the Stirling series.
inline constexpr std::array<double, 10> stirling_bernoulli = {
    1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66,
    -691.0 / 2730, 7.0 / 6, -3617.0 / 510, 43867.0 / 798, -174611.0 / 330};

}  // namespace detail

/// B_{2k} / (2k)!, 0 <= k <= 30.
inline double bernoulli_over_factorial(int k) {
    if (k < 0 || k > 30) throw DomainError("bernoulli_over_factorial: k out of range");
    return detail::bernoulli_over_factorial()[static_cast<std::size_t>(k)];
}

/**
 * A branch of log Gamma(z). The argument is shifted to Re >= 15 and the
 * Stirling series is applied there; accurate to about 1e-14 relative on
 * Re z > -1 away from the poles. The imaginary part is only determined
 * mod 2 pi.
 */
inline cplx log_gamma(cplx z) {
    for (int k = 0; k < 64; ++k) {
        if (std::abs(z + static_cast<double>(k)) < 1e-14 && z.real() <= 0.0 &&
            std::abs(z.imag()) < 1e-14)
            throw DomainError("log_gamma: pole");
    }
    cplx shift = 0.0;
    cplx w = z;
    while (w.real() < 15.0) {
        shift += std::log(w);
        w += 1.0;
    }
    const cplx inv = 1.0 / w;
    const cplx inv2 = inv * inv;
    cplx series = 0.0;
    cplx pw = inv;
    for (std::size_t k = 0; k < detail::stirling_bernoulli.size(); ++k) {
        const double n = 2.0 * static_cast<double>(k + 1);
        series += detail::stirling_bernoulli[k] / (n * (n - 1.0)) * pw;
        pw *= inv2;
    }
    return (w - 0.5) * std::log(w) - w + 0.5 * std::log(two_pi) + series - shift;
}

inline cplx gamma(cplx z) { return std::exp(log_gamma(z)); }

/// Result of a series evaluation with an estimate of its absolute error.
struct SeriesValue {
    cplx value;
    double err;
};

namespace detail {

// (e^z - 1) / z
inline cplx expm1_over(cplx z) {
    if (std::abs(z) < 1e-3) return 1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0;
    return (std::exp(z) - 1.0) / z;
}

}  // namespace detail

/**
 * Euler-Maclaurin tail sum_{k >= N} (k + a)^{-s} for Re s > -10.
 * The singular part 1/(s - 1) is omitted when `with_pole` is false, which
 * keeps character sums finite at s = 1. Up to 30 Bernoulli corrections;
 * `err` is the first omitted term.
 */
inline SeriesValue hurwitz_tail(cplx s, double a, std::uint64_t N, bool with_pole = true) {
    const double w = static_cast<double>(N) + a;
    const double logw = std::log(w);
    const cplx wms = std::exp(-s * logw);  // w^{-s}
    cplx value = -logw * detail::expm1_over(-(s - 1.0) * logw);  // w^{1-s}/(s-1) - 1/(s-1)
    if (with_pole) {
        if (s == 1.0) throw DomainError("hurwitz_tail: pole at s = 1");
        value += 1.0 / (s - 1.0);
    }
    value += 0.5 * wms;
    // term_j = B_{2j}/(2j)! * s(s+1)...(s+2j-2) * w^{-s-2j+1}
    cplx rising = s;  // s(s+1)...(s+2j-2)
    cplx wpow = wms / w;
    double last = 0.0;
    for (int j = 1; j <= 30; ++j) {
        const cplx term = bernoulli_over_factorial(j) * rising * wpow;
        value += term;
        last = std::abs(term);
        if (last <= 1e-17 * std::abs(value)) return {value, last};
        rising *= (s + static_cast<double>(2 * j - 1)) * (s + static_cast<double>(2 * j));
        wpow /= w * w;
    }
    return {value, last};
}

/// Number of direct terms so that the Euler-Maclaurin corrections converge geometrically.
inline std::uint64_t em_cutoff(cplx s) {
    return static_cast<std::uint64_t>(std::ceil((std::abs(s) + 60.0) / pi)) + 10;
}

/// Hurwitz zeta(s, a), 0 < a <= 1.
inline SeriesValue hurwitz_zeta(cplx s, double a) {
    if (!(a > 0.0 && a <= 1.0)) throw DomainError("hurwitz_zeta: a must lie in (0, 1]");
    const std::uint64_t N = em_cutoff(s);
    ComplexKahanSum direct;
    for (std::uint64_t k = 0; k < N; ++k) direct += std::exp(-s * std::log(static_cast<double>(k) + a));
    auto tail = hurwitz_tail(s, a, N);
    return {direct.value() + tail.value, tail.err + 1e-16 * static_cast<double>(N)};
}

/// L(s, chi) = q^{-s} sum_a chi(a) zeta(s, a/q), split as a direct sum plus tails.
inline SeriesValue dirichlet_L_checked(const DirichletCharacter& chi, cplx s) {
    const std::uint64_t q = chi.modulus;
    if (chi.is_principal() && std::abs(s - 1.0) < 1e-14)
        throw DomainError("dirichlet_L: pole at s = 1 for the principal character");
    const std::uint64_t N = em_cutoff(s);
    ComplexKahanSum direct;
    for (std::uint64_t m = 1; m < q * N; ++m) {
        const cplx c = chi(static_cast<std::int64_t>(m));
        if (c == 0.0) continue;
        direct += c * std::exp(-s * std::log(static_cast<double>(m)));
    }
    const cplx qs = std::exp(-s * std::log(static_cast<double>(q)));
    ComplexKahanSum tails;
    double err = 0.0;
    for (std::uint64_t a = 1; a <= q; ++a) {
        const cplx c = chi(static_cast<std::int64_t>(a));
        if (c == 0.0) continue;
        auto t = hurwitz_tail(s, static_cast<double>(a) / q, a == q ? N - 1 : N, false);
        tails += c * t.value;
        err += t.err;
    }
    cplx value = direct.value() + qs * tails.value();
    if (chi.is_principal()) value += qs * static_cast<double>(euler_phi(q)) / (s - 1.0);
    err = std::abs(qs) * err + 1e-16 * static_cast<double>(q * N);
    return {value, err};
}

/**
 * L(s, chi); throws PrecisionError if the error exceeds rel_tol * max(|L|, 1)
 * (relative error, switching to absolute near zeros of L).
 */
inline cplx dirichlet_L(const DirichletCharacter& chi, cplx s, double rel_tol = 1e-10) {
    auto r = dirichlet_L_checked(chi, s);
    if (r.err > rel_tol * std::max(1.0, std::abs(r.value)))
        throw PrecisionError("dirichlet_L: relative error target not met", r.value, r.err);
    return r.value;
}

inline cplx riemann_zeta(cplx s) { return dirichlet_L(conrey_character(1, 1), s, 1.0); }

}  // namespace zerosum
