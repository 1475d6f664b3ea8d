#pragma once

/**
 * @file quadrature.hpp
 * @brief Adaptive Gauss-Kronrod (30/61) integration of complex integrands and
 *        a fixed-grid batch rule for many Mellin evaluations of one function.
 */

#include <zerosum/core.hpp>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <queue>

namespace zerosum {

struct QuadResult {
    cplx value;
    double err = 0.0;
    std::size_t evals = 0;
};

namespace detail {

struct KronrodRule {
    std::vector<double> x;   // 61 nodes on [-1, 1], ascending
    std::vector<double> wk;  // Kronrod weights
    std::vector<double> wg;  // Gauss weights (0 at non-Gauss nodes)
};

inline const KronrodRule& kronrod61() {
    static const KronrodRule rule = [] {
        using boost::math::quadrature::gauss;
        using boost::math::quadrature::gauss_kronrod;
        const auto& ax = gauss_kronrod<double, 61>::abscissa();
        const auto& aw = gauss_kronrod<double, 61>::weights();
        const auto& gw = gauss<double, 30>::weights();
        KronrodRule r;
        // Gauss nodes sit at odd Kronrod indices.
        for (std::size_t i = ax.size(); i-- > 1;) {
            r.x.push_back(-ax[i]);
            r.wk.push_back(aw[i]);
            r.wg.push_back(i % 2 ? gw[i / 2] : 0.0);
        }
        for (std::size_t i = 0; i < ax.size(); ++i) {
            r.x.push_back(ax[i]);
            r.wk.push_back(aw[i]);
            r.wg.push_back(i % 2 ? gw[i / 2] : 0.0);
        }
        return r;
    }();
    return rule;
}

struct Panel {
    double a, b;
    cplx value;
    double err;
    bool operator<(const Panel& o) const { return err < o.err; }
};

template <class F>
Panel kronrod_panel(F& f, double a, double b) {
    const auto& r = kronrod61();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    cplx k = 0.0, g = 0.0;
    for (std::size_t i = 0; i < r.x.size(); ++i) {
        const cplx v = f(c + h * r.x[i]);
        k += r.wk[i] * v;
        g += r.wg[i] * v;
    }
    return {a, b, k * h, std::abs((k - g) * h)};
}

}  // namespace detail

/**
 * Integrate f over [a, b] to absolute tolerance `tol`. The interval is first
 * cut into `initial_panels` equal pieces, then the panel with the largest
 * error estimate is bisected until the summed estimate meets `tol`.
 * Throws PrecisionError (with the best estimate) when `max_panels` is hit.
 */
template <class F>
QuadResult integrate(F&& f, double a, double b, double tol, std::size_t initial_panels = 1,
                     std::size_t max_panels = 20000) {
    if (!(tol > 0.0)) throw DomainError("integrate: tolerance must be positive");
    if (b <= a) return {};
    initial_panels = std::max<std::size_t>(1, initial_panels);
    std::priority_queue<detail::Panel> heap;
    double err = 0.0;
    std::size_t evals = 0;
    const double step = (b - a) / static_cast<double>(initial_panels);
    for (std::size_t i = 0; i < initial_panels; ++i) {
        const double lo = a + step * static_cast<double>(i);
        const double hi = i + 1 == initial_panels ? b : lo + step;
        auto p = detail::kronrod_panel(f, lo, hi);
        err += p.err;
        evals += 61;
        heap.push(p);
    }
    while (err > tol && heap.size() < max_panels) {
        auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        auto left = detail::kronrod_panel(f, worst.a, mid);
        auto right = detail::kronrod_panel(f, mid, worst.b);
        evals += 122;
        err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
    }
    // Sum in position order so the result does not depend on refinement history.
    std::vector<detail::Panel> panels;
    panels.reserve(heap.size());
    while (!heap.empty()) {
        panels.push_back(heap.top());
        heap.pop();
    }
    std::sort(panels.begin(), panels.end(), [](const auto& l, const auto& r) { return l.a < r.a; });
    ComplexKahanSum total;
    KahanSum total_err;
    for (const auto& p : panels) {
        total += p.value;
        total_err += p.err;
    }
    QuadResult res{total.value(), total_err.value(), evals};
    if (res.err > tol)
        throw PrecisionError("integrate: tolerance not reached within panel budget", res.value, res.err);
    return res;
}

/**
 * Fixed composite Kronrod grid on [va, vb] holding weighted samples of a
 * function g, so that sum_j w_j g(v_j) e^{s v_j} approximates
 * int g(v) e^{s v} dv for many s with |Im s| up to `max_freq`.
 */
class MellinBatch {
public:
    MellinBatch() = default;

    template <class G>
    MellinBatch(G&& g, double va, double vb, double max_freq, double min_panels = 4) : va_(va), vb_(vb) {
        const auto& r = detail::kronrod61();
        // keep the per-panel phase excursion |Im s| * h at most 20 radians
        const double width = vb - va;
        std::size_t n = static_cast<std::size_t>(std::ceil(std::max(min_panels, max_freq * width / 40.0)));
        max_freq_ = 40.0 * static_cast<double>(n) / width;
        const double step = width / static_cast<double>(n);
        for (std::size_t p = 0; p < n; ++p) {
            const double c = va + step * (static_cast<double>(p) + 0.5), h = 0.5 * step;
            for (std::size_t i = 0; i < r.x.size(); ++i) {
                const double v = c + h * r.x[i];
                const cplx gv = g(v);
                nodes_.push_back(v);
                wk_.push_back(r.wk[i] * h * gv);
                wg_.push_back(r.wg[i] * h * gv);
                panel_.push_back(static_cast<std::uint32_t>(p));
            }
        }
        panels_ = n;
    }

    /// Value and a Kronrod-minus-Gauss error estimate.
    QuadResult operator()(cplx s) const {
        ComplexKahanSum k;
        cplx panel_k = 0.0, panel_g = 0.0;
        double err = 0.0;
        std::uint32_t current = 0;
        for (std::size_t j = 0; j < nodes_.size(); ++j) {
            if (panel_[j] != current) {
                err += std::abs(panel_k - panel_g);
                k += panel_k;
                panel_k = panel_g = 0.0;
                current = panel_[j];
            }
            const cplx e = std::exp(s * nodes_[j]);
            panel_k += wk_[j] * e;
            panel_g += wg_[j] * e;
        }
        err += std::abs(panel_k - panel_g);
        k += panel_k;
        return {k.value(), err + 1e-16 * static_cast<double>(nodes_.size()), nodes_.size()};
    }

    double max_freq() const { return max_freq_; }
    std::size_t size() const { return nodes_.size(); }

private:
    double va_ = 0.0, vb_ = 0.0, max_freq_ = 0.0;
    std::size_t panels_ = 0;
    std::vector<double> nodes_;
    std::vector<cplx> wk_, wg_;
    std::vector<std::uint32_t> panel_;
};

}  // namespace zerosum
