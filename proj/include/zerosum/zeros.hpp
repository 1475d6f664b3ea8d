#pragma once

/**
 * @file zeros.hpp
 * @brief Zero storage, zero-file ingestion/export, a critical-line finder for
 *        zeta and Dirichlet L-functions, and argument-principle counts.
 */

#include <charconv>
#include <zerosum/lfunctions.hpp>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <array>

#include <iomanip>
#include <mutex>
#include <shared_mutex>

namespace zerosum {

enum class ZeroSource { ingested, found };

struct ZeroRecord {
    double gamma = 0.0;                 // zero at 1/2 + i gamma
    std::optional<cplx> rho;            // off-line placement for ingested data
    int multiplicity = 1;
    ZeroSource source = ZeroSource::found;
    std::string label;

    cplx point() const { return rho ? *rho : cplx(0.5, gamma); }
};

/**
 * Per-label zero lists. For a `symmetric` label (real coefficients) only
 * gamma > 0 is stored and sums expand each record to the pair 1/2 +- i gamma.
 */
class ZeroStore {
public:
    struct Entry {
        std::vector<ZeroRecord> zeros;
        double complete_to = 0.0;  // all zeros with |gamma| <= complete_to are present
        bool symmetric = true;
    };

    /// Merge records (dedup at 1e-9 in gamma); returns the number of new records.
    std::size_t merge(const std::string& label, std::vector<ZeroRecord> recs, bool symmetric) {
        std::unique_lock lock(mutex_);
        auto& e = entries_[label];
        if (e.zeros.empty()) e.symmetric = symmetric;
        const std::size_t before = e.zeros.size();
        for (auto& r : recs) {
            r.label = label;
            auto it = std::lower_bound(e.zeros.begin(), e.zeros.end(), r.gamma - 1e-9,
                                       [](const ZeroRecord& z, double g) { return z.gamma < g; });
            if (it != e.zeros.end() && std::abs(it->gamma - r.gamma) <= 1e-9) continue;
            e.zeros.insert(it, r);
        }
        return e.zeros.size() - before;
    }

    void set_complete(const std::string& label, double T) {
        std::unique_lock lock(mutex_);
        entries_[label].complete_to = T;
    }

    bool has(const std::string& label) const {
        std::shared_lock lock(mutex_);
        return entries_.count(label) > 0;
    }

    Entry entry(const std::string& label) const {
        std::shared_lock lock(mutex_);
        auto it = entries_.find(label);
        if (it == entries_.end()) throw MissingDataError("no zeros stored for '" + label + "'");
        return it->second;
    }

    /// Records with lo <= gamma <= hi.
    std::vector<ZeroRecord> query(const std::string& label, double lo, double hi) const {
        auto e = entry(label);
        std::vector<ZeroRecord> out;
        for (const auto& z : e.zeros)
            if (z.gamma >= lo && z.gamma <= hi) out.push_back(z);
        return out;
    }

    /// Zeros as points rho with |Im rho| <= T, symmetric labels expanded.
    std::vector<std::pair<cplx, int>> points(const std::string& label, double T) const {
        auto e = entry(label);
        if (e.complete_to < T)
            throw MissingDataError("zeros of '" + label + "' are complete only to height " +
                                   std::to_string(e.complete_to) + ", need " + std::to_string(T));
        std::vector<std::pair<cplx, int>> out;
        for (const auto& z : e.zeros) {
            if (std::abs(z.gamma) > T) continue;
            out.emplace_back(z.point(), z.multiplicity);
            if (e.symmetric) out.emplace_back(std::conj(z.point()), z.multiplicity);
        }
        return out;
    }

    std::size_t ingest(const std::string& path, const std::string& label, bool symmetric = true);
    void export_file(const std::string& label, std::ostream& out) const;

private:
    mutable std::shared_mutex mutex_;
    std::map<std::string, Entry> entries_;
};

/**
 * Zero file: one ordinate per line (or "re im" for an off-line point),
 * optional "# label: x" and "# complete_to: T" headers, other '#' lines
 * ignored. Ordinates must not decrease.
 */
inline std::vector<ZeroRecord> parse_zero_file(std::istream& in, std::string* label = nullptr,
                                               double* complete_to = nullptr) {
    std::vector<ZeroRecord> out;
    std::string line;
    std::size_t line_no = 0;
    double prev = -std::numeric_limits<double>::infinity();
    while (std::getline(in, line)) {
        ++line_no;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line[first] == '#') {
            auto pos = line.find("label:");
            if (label && pos != std::string::npos) {
                std::istringstream ls(line.substr(pos + 6));
                ls >> *label;
            }
            auto cpos = line.find("complete_to:");
            if (complete_to && cpos != std::string::npos) {
                std::istringstream ls(line.substr(cpos + 12));
                if (!(ls >> *complete_to)) throw ParseError("malformed complete_to header", line_no);
            }
            continue;
        }
        std::istringstream ls(line);
        std::vector<double> v;
        std::string tok;
        while (ls >> tok) {
            double d = 0.0;
            const auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), d);
            if (ec != std::errc() || end != tok.data() + tok.size())
                throw ParseError("malformed zero record '" + tok + "'", line_no);
            v.push_back(d);
        }
        if (v.size() > 2) throw ParseError("trailing text in zero record", line_no);
        ZeroRecord r;
        r.source = ZeroSource::ingested;
        if (v.size() == 2) {
            r.rho = cplx(v[0], v[1]);
            r.gamma = v[1];
        } else {
            r.gamma = v[0];
        }
        if (!std::isfinite(r.gamma)) throw ParseError("non-finite ordinate", line_no);
        if (r.gamma < prev) throw ParseError("ordinates must be non-decreasing", line_no);
        prev = r.gamma;
        out.push_back(r);
    }
    return out;
}

inline std::size_t ZeroStore::ingest(const std::string& path, const std::string& label, bool symmetric) {
    std::ifstream in(path);
    if (!in) throw MissingDataError("cannot open zero file " + path);
    double complete = -1.0;
    auto recs = parse_zero_file(in, nullptr, &complete);
    // without a header the list is taken as complete up to its last ordinate
    if (complete < 0.0)
        complete = recs.empty() ? 0.0
                   : symmetric  ? std::abs(recs.back().gamma)
                                : std::min(std::abs(recs.front().gamma), std::abs(recs.back().gamma));
    merge(label, std::move(recs), symmetric);
    auto e = entry(label);
    if (complete > e.complete_to) set_complete(label, complete);
    return e.zeros.size();
}

inline void ZeroStore::export_file(const std::string& label, std::ostream& out) const {
    auto e = entry(label);
    out << "# label: " << label << "\n";
    out << "# complete_to: " << std::setprecision(15) << e.complete_to << "\n";
    for (const auto& z : e.zeros) {
        char buf[64];
        if (z.rho)
            std::snprintf(buf, sizeof buf, "%.15g %.15g\n", z.rho->real(), z.rho->imag());
        else
            std::snprintf(buf, sizeof buf, "%.15g\n", z.gamma);
        for (int k = 0; k < z.multiplicity; ++k) out << buf;
    }
}

// =============================================================================
// Critical-line evaluation
// =============================================================================

/// theta(t) = arg of Q^s prod Gamma(lambda s + mu) at s = 1/2 + i t, minus arg(omega)/2.
inline double rotation_phase(const SelbergLFunction& L, double t) {
    return L.gamma.log_factor(cplx(0.5, t)).imag() - 0.5 * std::arg(L.gamma.omega);
}

/// Real-valued Z(t) = e^{i theta(t)} L(1/2 + i t); sign changes mark critical zeros.
inline double hardy_Z(const SelbergLFunction& L, double t) {
    return (std::polar(1.0, rotation_phase(L, t)) * L(cplx(0.5, t))).real();
}

/**
 * Number of zeros of F(s) = (s(s-1))^m L*(s) in [-0.1, 1.1] x [t0, t1] by
 * tracking arg F along the boundary. Steps halve while the phase moves by
 * more than pi/3 between samples; a jump above pi at the minimum step is an
 * error.
 */
inline int count_by_argument_principle(const SelbergLFunction& L, double t0, double t1) {
    if (!L.evaluable()) throw MissingDataError("count_by_argument_principle: '" + L.label + "' cannot be evaluated");
    if (t1 <= t0) return 0;
    const double m = L.pole_order;
    auto phase = [&](cplx s) {
        double a = L.gamma.log_factor(s).imag() + std::arg(L(s));
        if (m > 0) a += m * std::arg(s * (s - 1.0));
        return a;
    };
    auto wrap = [](double d) { return d - two_pi * std::floor((d + pi) / two_pi); };
    double total = 0.0;
    auto edge = [&](cplx from, cplx to, double base_step) {
        const double len = std::abs(to - from);
        const cplx dir = (to - from) / len;
        double pos = 0.0;
        double prev = phase(from);
        double step = base_step;
        while (pos < len) {
            const double next = std::min(len, pos + step);
            const double cur = phase(from + dir * next);
            const double d = wrap(cur - prev);
            if (std::abs(d) > pi / 3 && step > 1e-9) {
                step *= 0.5;
                continue;
            }
            if (std::abs(d) > pi / 3)
                throw PrecisionError("argument principle: phase jump too large near " +
                                         std::to_string((from + dir * next).imag()),
                                     from + dir * next, std::abs(d));
            total += d;
            prev = cur;
            pos = next;
            step = std::min(base_step, step * 2.0);
        }
    };
    const cplx a(-0.1, t0), b(1.1, t0), c(1.1, t1), d(-0.1, t1);
    edge(a, b, 0.05);
    edge(b, c, 0.25);
    edge(c, d, 0.05);
    edge(d, a, 0.25);
    return static_cast<int>(std::lround(total / two_pi));
}

struct FinderOptions {
    double grid = 0.05;
    double block = 40.0;
    int max_refine = 3;
    double bottom = 1e-7;  // lower edge for real-coefficient labels
};

namespace detail {

template <class F>
double refine_root(F&& f, double a, double b, double fa, double fb) {
    boost::uintmax_t iters = 200;
    auto tol = [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(x)); };
    auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iters);
    return 0.5 * (r.first + r.second);
}

template <class F>
std::vector<double> scan(F&& f, double lo, double hi, double step) {
    std::vector<double> out;
    const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / step));
    double ta = lo, fa = f(ta);
    for (std::size_t i = 1; i <= n; ++i) {
        const double tb = i == n ? hi : lo + step * static_cast<double>(i);
        const double fb = f(tb);
        if (fa == 0.0) {
            out.push_back(ta);
        } else if (fa * fb < 0.0) {
            out.push_back(refine_root(f, ta, tb, fa, fb));
        }
        ta = tb;
        fa = fb;
    }
    return out;
}

// Move a block boundary away from the nearest found zero.
inline double safe_cut(double t, const std::vector<double>& zeros) {
    auto it = std::lower_bound(zeros.begin(), zeros.end(), t);
    double lo = it == zeros.begin() ? -1e300 : *(it - 1);
    double hi = it == zeros.end() ? 1e300 : *it;
    if (t - lo > 0.02 && hi - t > 0.02) return t;
    if (lo > -1e299 && hi < 1e299) return 0.5 * (lo + hi);
    return t;
}

}  // namespace detail

/**
 * All critical-line zeros with t in [lo, hi], validated block by block
 * against argument-principle counts. Blocks that disagree are rescanned on a
 * finer grid; persistent disagreement throws with the offending interval.
 */
inline std::vector<double> find_critical_zeros(const SelbergLFunction& L, double lo, double hi,
                                               const FinderOptions& opt = {}) {
    auto Z = [&L](double t) { return hardy_Z(L, t); };
    std::vector<double> zeros = detail::scan(Z, lo, hi, opt.grid);
    std::vector<double> cuts{lo};
    for (double t = lo + opt.block; t < hi - 0.5 * opt.block; t += opt.block) cuts.push_back(t);
    cuts.push_back(hi);
    for (std::size_t i = 1; i + 1 < cuts.size(); ++i) cuts[i] = detail::safe_cut(cuts[i], zeros);
    std::vector<double> result;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        const int expected = count_by_argument_principle(L, a, b);
        std::vector<double> found;
        for (double z : zeros)
            if (z >= a && z < b) found.push_back(z);
        double step = opt.grid;
        for (int r = 0; r < opt.max_refine && static_cast<int>(found.size()) != expected; ++r) {
            step /= 5.0;
            found.clear();
            for (double z : detail::scan(Z, a, b, step))
                if (z >= a && z < b) found.push_back(z);
        }
        if (static_cast<int>(found.size()) != expected)
            throw PrecisionError("zero finder: " + std::to_string(found.size()) + " sign changes but " +
                                     std::to_string(expected) + " zeros in t in [" + std::to_string(a) + ", " +
                                     std::to_string(b) + "] for " + L.label,
                                 cplx(a, b), std::abs(static_cast<double>(expected) - static_cast<double>(found.size())));
        result.insert(result.end(), found.begin(), found.end());
    }
    return result;
}

namespace detail {

// Taylor coefficients Psi^{(k)}(p) / k!, k <= 12, of Psi(p) = cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p),
// by the Cauchy formula on a circle kept away from the removable points 1/4 + k/2.
inline std::array<double, 13> rs_psi_taylor(double p) {
    double r = 0.5, best = -1.0;
    for (double c : {0.35, 0.4, 0.45, 0.5, 0.55, 0.6}) {
        double d = 1e9;
        for (double e : {p - c, p + c}) {
            const double f = e - 0.25;
            d = std::min(d, std::abs(f - 0.5 * std::nearbyint(2.0 * f)));
        }
        if (d > best) best = d, r = c;
    }
    constexpr int M = 32;
    std::array<cplx, M> v;
    for (int j = 0; j < M; ++j) {
        const cplx z = p + r * std::polar(1.0, two_pi * j / M);
        v[j] = std::cos(two_pi * (z * z - z - 1.0 / 16.0)) / std::cos(two_pi * z);
    }
    std::array<double, 13> c{};
    double rk = 1.0;
    for (int k = 0; k <= 12; ++k) {
        cplx acc = 0.0;
        for (int j = 0; j < M; ++j) acc += v[j] * std::polar(1.0, -two_pi * j * k / M);
        c[k] = acc.real() / M / rk;
        rk *= r;
    }
    return c;
}

}  // namespace detail

/// Hardy Z(t) of zeta by the Riemann-Siegel formula with corrections C_0..C_4 (t >= 1000).
inline double riemann_siegel_Z(double t) {
    if (t < 1000.0) throw DomainError("riemann_siegel_Z: t must be at least 1000");
    static const auto zeta = zeta_lfunction();
    const double th = rotation_phase(zeta, t);
    const double w = std::sqrt(t / two_pi);
    const auto N = static_cast<std::uint64_t>(std::floor(w));
    const double p = w - static_cast<double>(N);
    KahanSum main;
    for (std::uint64_t n = 1; n <= N; ++n) {
        const double x = static_cast<double>(n);
        main += std::cos(th - t * std::log(x)) / std::sqrt(x);
    }
    const auto c = detail::rs_psi_taylor(p);
    // Psi^{(k)}(p) = k! c_k
    std::array<double, 13> d{};
    double f = 1.0;
    for (int k = 0; k <= 12; ++k) {
        if (k > 1) f *= k;
        d[k] = c[k] * f;
    }
    const double p2 = pi * pi, p4 = p2 * p2, p6 = p4 * p2, p8 = p4 * p4;
    const double C0 = d[0];
    const double C1 = -d[3] / (96.0 * p2);
    const double C2 = d[2] / (64.0 * p2) + d[6] / (18432.0 * p4);
    const double C3 = -d[1] / (64.0 * p2) - d[5] / (3840.0 * p4) - d[9] / (5308416.0 * p6);
    const double C4 = d[0] / (128.0 * p2) + 19.0 * d[4] / (24576.0 * p4) + 11.0 * d[8] / (5898240.0 * p6) +
                      d[12] / (2038431744.0 * p8);
    const double a = 1.0 / w;
    const double R = C0 + a * (C1 + a * (C2 + a * (C3 + a * C4)));
    return 2.0 * main.value() + (N % 2 == 1 ? 1.0 : -1.0) * R / std::sqrt(w);
}

namespace detail {

// (1/(b-a)) int_a^b (N(t) - theta(t)/pi - 1) dt from a zero list, i.e. the mean of S(t) on [a, b].
inline double mean_S(const std::vector<double>& zeros, double a, double b) {
    static const auto zeta = zeta_lfunction();
    const auto first = std::upper_bound(zeros.begin(), zeros.end(), a);
    double IN = static_cast<double>(first - zeros.begin()) * (b - a);
    for (auto it = first; it != zeros.end() && *it <= b; ++it) IN += b - *it;
    const double Ith = boost::math::quadrature::gauss<double, 20>::integrate(
        [](double t) { return rotation_phase(zeta, t); }, a, b);
    return (IN - Ith / pi - (b - a)) / (b - a);
}

}  // namespace detail

/**
 * Critical zeros of zeta in (lo, hi] with lo >= 2000 by Riemann-Siegel sign
 * changes. `below` holds every zero up to lo. Completeness is checked block
 * by block with Turing's bound |int_a^b S(t) dt| <= 2.067 + 0.059 log b:
 * a missed pair moves the mean of S by -2 from the point where it was lost.
 * Failing blocks are rescanned finer together with their predecessor.
 */
inline std::vector<double> find_zeta_zeros_rs(std::vector<double> below, double lo, double hi,
                                              const FinderOptions& opt = {}) {
    if (lo < 2000.0) throw DomainError("find_zeta_zeros_rs: lower edge must be at least 2000");
    auto Z = [](double t) { return riemann_siegel_Z(t); };
    auto spacing = [](double t) { return two_pi / std::log(t / two_pi); };
    std::vector<double> cuts{lo};
    while (cuts.back() < hi) cuts.push_back(std::min(hi, cuts.back() + opt.block));
    std::vector<double> zeros = std::move(below);
    const std::size_t base = zeros.size();
    std::vector<double> steps(cuts.size() - 1);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        steps[i] = 0.15 * spacing(cuts[i + 1]);
        for (double z : detail::scan(Z, cuts[i], cuts[i + 1], steps[i]))
            if (z > cuts[i]) zeros.push_back(z);
    }
    auto replace = [&](double a, double b, double step) {
        std::vector<double> keep;
        for (std::size_t k = 0; k < zeros.size(); ++k)
            if (k < base || zeros[k] <= a || zeros[k] > b) keep.push_back(zeros[k]);
        for (double z : detail::scan(Z, a, b, step))
            if (z > a) keep.push_back(z);
        std::sort(keep.begin(), keep.end());
        zeros = std::move(keep);
    };
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        const double bound = (2.067 + 0.059 * std::log(b)) / (b - a);
        int r = 0;
        while (std::abs(detail::mean_S(zeros, a, b)) > bound) {
            if (r++ >= opt.max_refine)
                throw PrecisionError("zero finder: Turing check fails on t in [" + std::to_string(a) + ", " +
                                         std::to_string(b) + "] for zeta",
                                     cplx(a, b), detail::mean_S(zeros, a, b));
            const std::size_t j = i > 0 ? i - 1 : i;
            steps[j] /= 5.0;
            steps[i] = std::min(steps[i], steps[j]);
            replace(cuts[j], b, steps[i]);
        }
    }
    return {zeros.begin() + static_cast<std::ptrdiff_t>(base), zeros.end()};
}

inline std::vector<ZeroRecord> to_records(const std::vector<double>& g, const std::string& label) {
    std::vector<ZeroRecord> out;
    for (double t : g) out.push_back({t, std::nullopt, 1, ZeroSource::found, label});
    return out;
}

/// Zeros of zeta with 0 < gamma <= T (T <= 2e5); Riemann-Siegel with Turing checks above t = 2000.
inline std::vector<ZeroRecord> find_zeros_zeta(double T, const FinderOptions& opt = {}) {
    if (T > 2e5) throw DomainError("find_zeros_zeta: T beyond the desk-scale limit 2e5");
    constexpr double switch_height = 2000.0;
    auto L = zeta_lfunction();
    if (T <= switch_height) return to_records(find_critical_zeros(L, opt.bottom, T, opt), L.label);
    auto low = find_critical_zeros(L, opt.bottom, switch_height, opt);
    // scan one block past T so that the last Turing check sees a full window
    auto high = find_zeta_zeros_rs(low, switch_height, T + opt.block, opt);
    while (!high.empty() && high.back() > T) high.pop_back();
    low.insert(low.end(), high.begin(), high.end());
    return to_records(low, L.label);
}

/// Zeros of L(s, chi), 0 < |gamma| <= T. Real chi returns gamma > 0 only.
inline std::vector<ZeroRecord> find_zeros_dirichlet(const DirichletCharacter& chi, double T,
                                                    const FinderOptions& opt = {}) {
    if (chi.is_principal()) throw DomainError("find_zeros_dirichlet: principal character");
    if (!chi.primitive) throw DomainError("find_zeros_dirichlet: character must be primitive");
    if (chi.modulus > 100 || T > 1e3) throw DomainError("find_zeros_dirichlet: q <= 100 and T <= 1000 required");
    auto L = dirichlet_lfunction(chi);
    const double lo = chi.is_real() ? opt.bottom : -T;
    return to_records(find_critical_zeros(L, lo, T, opt), L.label);
}

/// Find and store zeros of an evaluable L-function up to height T.
inline void populate(ZeroStore& store, const SelbergLFunction& L, double T, const FinderOptions& opt = {}) {
    std::vector<ZeroRecord> recs;
    if (L.chi && L.chi->modulus > 1)
        recs = find_zeros_dirichlet(*L.chi, T, opt);
    else if (L.chi)
        recs = find_zeros_zeta(T, opt);
    else
        throw MissingDataError("no zero finder for '" + L.label + "'; ingest a zero file instead");
    store.merge(L.label, std::move(recs), L.real_coefficients);
    store.set_complete(L.label, T);
}

}  // namespace zerosum
