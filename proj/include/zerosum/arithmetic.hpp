#pragma once

/**
 * @file arithmetic.hpp
 * @brief Primes, von Mangoldt function, Dirichlet characters (Conrey
 *        labelling), Gauss sums and coefficient streams.
 */

#include <zerosum/core.hpp>

#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace zerosum {

// =============================================================================
// Primes
// =============================================================================

/// Sieve of Eratosthenes up to `limit`.
class PrimeTable {
public:
    explicit PrimeTable(std::uint64_t limit) : limit_(limit) {
        std::vector<bool> composite(limit + 1, false);
        for (std::uint64_t i = 2; i <= limit; ++i) {
            if (composite[i]) continue;
            primes_.push_back(i);
            for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
        }
    }

    std::uint64_t limit() const { return limit_; }
    const std::vector<std::uint64_t>& primes() const& { return primes_; }
    // by value on temporaries, so range-for over PrimeTable(n).primes() is safe
    std::vector<std::uint64_t> primes() && { return std::move(primes_); }

    bool is_prime(std::uint64_t n) const {
        if (n > limit_) throw DomainError("is_prime: n exceeds sieve limit");
        return std::binary_search(primes_.begin(), primes_.end(), n);
    }

private:
    std::uint64_t limit_;
    std::vector<std::uint64_t> primes_;
};

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

/// Prime factorisation as (prime, exponent) pairs, ascending.
inline std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n) {
    std::vector<std::pair<std::uint64_t, int>> out;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

/// If n = p^m with m >= 1, returns (p, m).
inline std::optional<std::pair<std::uint64_t, int>> prime_power(std::uint64_t n) {
    if (n < 2) return std::nullopt;
    auto f = factorize(n);
    if (f.size() != 1) return std::nullopt;
    return f.front();
}

inline double von_mangoldt(std::uint64_t n) {
    if (n == 0) throw DomainError("von_mangoldt: n must be positive");
    auto pp = prime_power(n);
    return pp ? std::log(static_cast<double>(pp->first)) : 0.0;
}

inline std::uint64_t euler_phi(std::uint64_t n) {
    std::uint64_t r = n;
    for (auto [p, e] : factorize(n)) r = r / p * (p - 1);
    return r;
}

inline std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = r * b % m;
        b = b * b % m;
        e >>= 1;
    }
    return r;
}

// =============================================================================
// Dirichlet characters
// =============================================================================

enum class Parity { even, odd };

/// A Dirichlet character stored as an explicit value table over residues.
struct DirichletCharacter {
    std::uint64_t modulus = 1;
    std::uint64_t conrey_index = 1;
    std::vector<cplx> values;  // values[a] = chi(a), a in [0, modulus)
    bool primitive = true;
    std::uint64_t conductor = 1;
    Parity parity = Parity::even;

    cplx operator()(std::int64_t n) const {
        auto q = static_cast<std::int64_t>(modulus);
        auto r = ((n % q) + q) % q;
        return values[static_cast<std::size_t>(r)];
    }

    bool is_principal() const {
        for (std::size_t a = 0; a < values.size(); ++a)
            if (std::gcd<std::uint64_t>(a, modulus) == 1 && std::abs(values[a] - 1.0) > 1e-12)
                return false;
        return true;
    }

    bool is_real() const {
        for (const auto& v : values)
            if (std::abs(v.imag()) > 1e-12) return false;
        return true;
    }

    DirichletCharacter conj() const {
        DirichletCharacter c = *this;
        for (auto& v : c.values) v = std::conj(v);
        // Conrey index of the conjugate is the inverse residue.
        for (std::uint64_t m = 1; m <= modulus; ++m)
            if ((m * conrey_index) % modulus == 1 % modulus) {
                c.conrey_index = m;
                break;
            }
        return c;
    }

    std::string label() const {
        return std::to_string(modulus) + "." + std::to_string(conrey_index);
    }
};

namespace detail {

// Conrey's character on a prime power, chi_{p^e}(n, m).
inline cplx conrey_prime_power(std::uint64_t p, int e, std::uint64_t n, std::uint64_t m) {
    std::uint64_t pe = 1;
    for (int i = 0; i < e; ++i) pe *= p;
    n %= pe;
    m %= pe;
    if (std::gcd(m, pe) != 1) return 0.0;
    if (p == 2) {
        if (e == 1) return 1.0;
        auto eps = [](std::uint64_t a) { return a % 4 == 1 ? 1 : -1; };
        double phase = (1 - eps(n)) * (1 - eps(m)) / 8.0;
        if (e >= 3) {
            // a = eps(a) * 5^k mod 2^e; brute-force k.
            auto log5 = [&](std::uint64_t a) {
                std::uint64_t target = eps(a) == 1 ? a : (pe - a) % pe;
                std::uint64_t x = 1;
                for (std::uint64_t k = 0; k < pe / 4; ++k) {
                    if (x == target) return k;
                    x = x * 5 % pe;
                }
                throw DomainError("conrey: discrete log failed");
            };
            phase += static_cast<double>(log5(n) * log5(m)) / static_cast<double>(pe / 4);
        }
        return std::polar(1.0, two_pi * phase);
    }
    // smallest primitive root mod p^2 generates (Z/p^e)^*
    const std::uint64_t p2 = p * p;
    const std::uint64_t ord = pe / p * (p - 1);
    std::uint64_t g = 2;
    for (;; ++g) {
        if (std::gcd(g, p) != 1) continue;
        std::uint64_t order2 = p * (p - 1);
        bool prim = true;
        for (auto [f, ex] : factorize(order2))
            if (powmod(g, order2 / f, p2) == 1) {
                prim = false;
                break;
            }
        if (prim) break;
    }
    auto dlog = [&](std::uint64_t a) {
        std::uint64_t x = 1;
        for (std::uint64_t k = 0; k < ord; ++k) {
            if (x == a) return k;
            x = x * g % pe;
        }
        throw DomainError("conrey: discrete log failed");
    };
    const double phase = static_cast<double>((dlog(n) * dlog(m)) % ord) / static_cast<double>(ord);
    return std::polar(1.0, two_pi * phase);
}

inline void classify(DirichletCharacter& chi) {
    const auto q = chi.modulus;
    chi.parity = (std::abs((chi(static_cast<std::int64_t>(q) - 1)) - 1.0) < 1e-9 || q <= 2)
                     ? Parity::even
                     : Parity::odd;
    // conductor: least d | q with chi trivial on units congruent to 1 mod d
    chi.conductor = q;
    for (std::uint64_t d = 1; d <= q; ++d) {
        if (q % d) continue;
        bool trivial = true;
        for (std::uint64_t a = 1; a < q && trivial; ++a)
            if (std::gcd(a, q) == 1 && a % d == 1 % d && std::abs(chi.values[a] - 1.0) > 1e-9)
                trivial = false;
        if (trivial) {
            chi.conductor = d;
            break;
        }
    }
    chi.primitive = chi.conductor == q;
}

}  // namespace detail

/// Conrey character chi_q(n, .). Requires gcd(n, q) = 1.
inline DirichletCharacter conrey_character(std::uint64_t q, std::uint64_t n) {
    if (q == 0) throw DomainError("character modulus must be positive");
    if (std::gcd(n % q, q) != 1 && q > 1) throw DomainError("conrey index must be a unit mod q");
    DirichletCharacter chi;
    chi.modulus = q;
    chi.conrey_index = q == 1 ? 1 : n % q;
    chi.values.assign(q, 0.0);
    const auto fac = factorize(q);
    for (std::uint64_t a = 0; a < q; ++a) {
        if (std::gcd(a, q) != 1 && q > 1) continue;
        cplx v = 1.0;
        for (auto [p, e] : fac) v *= detail::conrey_prime_power(p, e, n, a);
        chi.values[a] = v;
    }
    if (q == 1) chi.values[0] = 1.0;
    detail::classify(chi);
    return chi;
}

/// Parses "q.n" labels.
inline DirichletCharacter character_from_label(const std::string& label) {
    auto dot = label.find('.');
    if (dot == std::string::npos) throw DomainError("character label must look like q.n: " + label);
    std::uint64_t q = std::stoull(label.substr(0, dot));
    std::uint64_t n = std::stoull(label.substr(dot + 1));
    return conrey_character(q, n);
}

/// All phi(q) characters mod q, ordered by Conrey index.
inline std::vector<DirichletCharacter> characters_mod(std::uint64_t q) {
    if (q == 0) throw DomainError("characters_mod: q must be positive");
    std::vector<DirichletCharacter> out;
    if (q == 1) {
        out.push_back(conrey_character(1, 1));
        return out;
    }
    for (std::uint64_t n = 1; n < q; ++n)
        if (std::gcd(n, q) == 1) out.push_back(conrey_character(q, n));
    return out;
}

inline cplx gauss_sum(const DirichletCharacter& chi) {
    ComplexKahanSum s;
    const auto q = chi.modulus;
    for (std::uint64_t a = 1; a <= q; ++a)
        s += chi(static_cast<std::int64_t>(a)) * std::polar(1.0, two_pi * static_cast<double>(a) / q);
    return s.value();
}

/// Root number omega with L*(s) = omega * conj(L*(1 - conj(s))) for primitive chi.
inline cplx root_number(const DirichletCharacter& chi) {
    if (chi.modulus == 1) return 1.0;
    const cplx ia = chi.parity == Parity::odd ? I : cplx(1.0);
    return gauss_sum(chi) / (ia * std::sqrt(static_cast<double>(chi.modulus)));
}

// =============================================================================
// Coefficient streams
// =============================================================================

/// Growth class of a coefficient sequence. `epsilon` means a(n) << n^eps.
enum class GrowthClass { epsilon, polynomial };

/**
 * A sequence a(1), a(2), ... with a declared bound |a(n)| <= bound_constant *
 * n^bound_exponent used for tail estimates.
 */
struct CoefficientStream {
    std::function<cplx(std::uint64_t)> eval;
    GrowthClass growth = GrowthClass::epsilon;
    double bound_exponent = 0.0;
    double bound_constant = 1.0;
    std::string label;
    std::uint64_t limit = std::numeric_limits<std::uint64_t>::max();

    cplx operator()(std::uint64_t n) const {
        if (n == 0) throw DomainError("coefficient index must be positive");
        if (n > limit)
            throw MissingDataError("coefficient " + std::to_string(n) + " of " + label +
                                   " beyond available limit " + std::to_string(limit));
        return eval(n);
    }

    double bound(std::uint64_t n) const {
        return bound_constant * std::pow(static_cast<double>(n), bound_exponent);
    }
};

inline CoefficientStream character_stream(const DirichletCharacter& chi) {
    CoefficientStream s;
    s.eval = [chi](std::uint64_t n) { return chi(static_cast<std::int64_t>(n % chi.modulus)); };
    s.label = "chi:" + chi.label();
    return s;
}

inline CoefficientStream constant_stream(cplx c, std::string label) {
    CoefficientStream s;
    s.eval = [c](std::uint64_t) { return c; };
    s.bound_constant = std::abs(c);
    s.label = std::move(label);
    return s;
}

/// Characteristic function of the positive squares (theta-series coefficients).
inline CoefficientStream squares_stream() {
    CoefficientStream s;
    s.eval = [](std::uint64_t n) {
        auto r = static_cast<std::uint64_t>(std::llround(std::sqrt(static_cast<double>(n))));
        return cplx(r * r == n ? 1.0 : 0.0);
    };
    s.label = "squares";
    return s;
}

using int128 = __int128;

inline std::string to_string(int128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
    std::string s;
    while (u) {
        s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    if (neg) s.push_back('-');
    return {s.rbegin(), s.rend()};
}

/**
 * Exact tau(n), n = 1..N, from Delta = q * prod (1 - q^m)^24. The product is
 * built as (sum (-1)^k (2k+1) q^{k(k+1)/2})^8 using Jacobi's identity for the
 * cube, with overflow-checked 128-bit arithmetic.
 */
inline std::vector<int128> ramanujan_tau_exact(std::size_t N) {
    if (N == 0) throw DomainError("ramanujan_tau: N must be positive");
    const std::size_t M = N;  // need coefficients of q^0..q^{N-1}
    std::vector<std::pair<std::size_t, int128>> cube;
    for (std::size_t k = 0;; ++k) {
        std::size_t e = k * (k + 1) / 2;
        if (e >= M) break;
        cube.emplace_back(e, (k % 2 ? -1 : 1) * static_cast<int128>(2 * k + 1));
    }
    std::vector<int128> acc(M, 0);
    for (auto [e, c] : cube) acc[e] = c;
    for (int pass = 1; pass < 8; ++pass) {
        std::vector<int128> next(M, 0);
        for (std::size_t i = 0; i < M; ++i) {
            if (acc[i] == 0) continue;
            for (auto [e, c] : cube) {
                if (i + e >= M) break;
                int128 prod;
                if (__builtin_mul_overflow(acc[i], c, &prod) ||
                    __builtin_add_overflow(next[i + e], prod, &next[i + e]))
                    throw OverflowError("ramanujan_tau: 128-bit overflow at n=" + std::to_string(i + e + 1));
            }
        }
        acc = std::move(next);
    }
    return acc;  // acc[n-1] = tau(n)
}

inline CoefficientStream ramanujan_tau(std::size_t N) {
    auto table = std::make_shared<std::vector<int128>>(ramanujan_tau_exact(N));
    CoefficientStream s;
    s.eval = [table](std::uint64_t n) { return cplx(static_cast<double>((*table)[n - 1])); };
    s.growth = GrowthClass::polynomial;
    // |tau(n)| <= d(n) n^{11/2} <= 2 n^6
    s.bound_exponent = 6.0;
    s.bound_constant = 2.0;
    s.label = "tau";
    s.limit = N;
    return s;
}

/// n -> a(n) n^{-(k-1)/2}.
inline CoefficientStream shifted_coefficients(const CoefficientStream& a, int k) {
    if (k <= 0 || k % 2) throw DomainError("shifted_coefficients: weight must be even and positive");
    CoefficientStream s;
    const double shift = (k - 1) / 2.0;
    s.eval = [a, shift](std::uint64_t n) { return a(n) * std::pow(static_cast<double>(n), -shift); };
    s.growth = GrowthClass::epsilon;  // Deligne
    s.bound_exponent = std::max(0.0, a.bound_exponent - shift);
    s.bound_constant = a.bound_constant;
    s.label = a.label + "/shift" + std::to_string(k);
    s.limit = a.limit;
    return s;
}

// ---- file-backed streams: "n,re,im" per line, '#' comments ------------------

inline std::vector<cplx> parse_coefficients(std::istream& in) {
    std::vector<cplx> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        std::string fn, fre, fim;
        if (!std::getline(ls, fn, ',') || !std::getline(ls, fre, ',') || !std::getline(ls, fim))
            throw ParseError("coefficient record must be n,re,im", line_no);
        try {
            std::size_t pos = 0;
            auto n = std::stoull(fn, &pos);
            if (n != out.size() + 1)
                throw ParseError("coefficient indices must run 1,2,3,...", line_no);
            out.emplace_back(std::stod(fre), std::stod(fim));
        } catch (const std::logic_error&) {
            throw ParseError("malformed number in coefficient record", line_no);
        }
    }
    return out;
}

inline CoefficientStream coefficient_file_stream(const std::string& path, std::string label) {
    std::ifstream in(path);
    if (!in) throw MissingDataError("cannot open coefficient file " + path);
    auto table = std::make_shared<std::vector<cplx>>(parse_coefficients(in));
    CoefficientStream s;
    double maxabs = 0.0;
    for (auto v : *table) maxabs = std::max(maxabs, std::abs(v));
    s.eval = [table](std::uint64_t n) { return (*table)[n - 1]; };
    s.bound_constant = std::max(1.0, maxabs);
    s.label = std::move(label);
    s.limit = table->size();
    return s;
}

}  // namespace zerosum
