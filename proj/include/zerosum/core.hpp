#pragma once

/**
 * @file core.hpp
 * @brief Shared vocabulary: complex type, error hierarchy, compensated sums,
 *        deterministic block reduction.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace zerosum {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double euler_gamma = std::numbers::egamma;
inline constexpr cplx I{0.0, 1.0};

// =============================================================================
// Errors
// =============================================================================

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input violates an operation's precondition.
struct DomainError : Error {
    using Error::Error;
};

/// A numerical target could not be met. Carries the best value found.
struct PrecisionError : Error {
    cplx best;
    double achieved;
    PrecisionError(const std::string& what, cplx best_estimate, double achieved_err)
        : Error(what), best(best_estimate), achieved(achieved_err) {}
};

/// Required data (zeros, coefficients, local factors) is not available.
struct MissingDataError : Error {
    using Error::Error;
};

struct ParseError : Error {
    std::size_t line;
    ParseError(const std::string& what, std::size_t line_no)
        : Error(what + " (line " + std::to_string(line_no) + ")"), line(line_no) {}
};

struct OverflowError : Error {
    using Error::Error;
};

// =============================================================================
// Compensated summation (Neumaier variant of Kahan)
// =============================================================================

class KahanSum {
public:
    KahanSum& operator+=(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
        return *this;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

class ComplexKahanSum {
public:
    ComplexKahanSum& operator+=(cplx z) {
        re_ += z.real();
        im_ += z.imag();
        return *this;
    }
    ComplexKahanSum& operator-=(cplx z) { return *this += -z; }
    cplx value() const { return {re_.value(), im_.value()}; }

private:
    KahanSum re_;
    KahanSum im_;
};

// =============================================================================
// Deterministic parallel reduction
// =============================================================================

/// Worker count used by block reductions. Results never depend on it.
inline unsigned& worker_count() {
    static unsigned n = std::max(1u, std::thread::hardware_concurrency());
    return n;
}

/**
 * Sum term(i) for i in [0, n) with fixed block boundaries of size `block`.
 * Each block is reduced with compensated summation, then block totals are
 * combined in index order, so the result is bit-identical for any worker
 * count.
 */
template <class Term>
cplx block_sum(std::size_t n, Term&& term, std::size_t block = 256) {
    if (n == 0) return {};
    const std::size_t nblocks = (n + block - 1) / block;
    std::vector<cplx> partial(nblocks);
    auto run = [&](std::size_t b) {
        ComplexKahanSum acc;
        const std::size_t hi = std::min(n, (b + 1) * block);
        for (std::size_t i = b * block; i < hi; ++i) acc += term(i);
        partial[b] = acc.value();
    };
    const unsigned workers = std::min<std::size_t>(worker_count(), nblocks);
    if (workers <= 1) {
        for (std::size_t b = 0; b < nblocks; ++b) run(b);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t b = w; b < nblocks; b += workers) run(b);
            });
        for (auto& t : pool) t.join();
    }
    ComplexKahanSum total;
    for (const auto& p : partial) total += p;
    return total.value();
}

/// Closed interval on the positive half-line.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double u) const { return u >= lo && u <= hi; }
    double width() const { return hi - lo; }
};

}  // namespace zerosum
