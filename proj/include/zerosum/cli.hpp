#pragma once

/**
 * @file cli.hpp
 * @brief Run configuration and the batch commands behind the zerosum tool:
 *        zero acquisition, ingestion, explicit-formula verification,
 *        relation runs and report collection. Commands return exit codes.
 */

#include <charconv>
#include <zerosum/zerosum.hpp>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

namespace zerosum {

enum ExitCode : int { exit_pass = 0, exit_fail = 1, exit_usage = 2, exit_skipped = 3 };

inline int exit_code(Status s) {
    switch (s) {
        case Status::pass: return exit_pass;
        case Status::fail: return exit_fail;
        default: return exit_skipped;
    }
}

struct ConfigError : Error {
    explicit ConfigError(const std::string& m) : Error(m) {}
};

struct RunConfig {
    std::string registry_path;
    double center = 2.5;
    double radius = 1.0;
    double ef_tolerance = 1e-6;
    double ef_height = 500.0;
    double identity_tolerance = 1e-5;
    double identity_height = 300.0;
    double identity_center = 1.0;
    double identity_radius = 0.99;
    std::vector<double> grid;  // empty: per-relation default
    std::map<std::string, std::string> zero_files;
    double sigma = 1.0;
    double linnik_zeta_height = 7e4;
    double linnik_l_height = 200.0;
    std::filesystem::path out_dir = "zerosum-out";

    TestFunction test_function() const { return bump(center, radius); }

    void validate() const {
        if (!(ef_tolerance > 0.0 && identity_tolerance > 0.0)) throw ConfigError("tolerances must be positive");
        if (!(ef_height > 0.0 && identity_height > 0.0 && linnik_zeta_height > 0.0 && linnik_l_height > 0.0))
            throw ConfigError("zero heights must be positive");
        for (std::size_t i = 1; i < grid.size(); ++i)
            if (!(grid[i] < grid[i - 1])) throw ConfigError("x-grid must be strictly decreasing");
        for (double x : grid)
            if (!(x > 0.0)) throw ConfigError("x-grid values must be positive");
        for (const auto& [label, path] : zero_files)
            if (!std::filesystem::exists(path)) throw ConfigError("zero file for '" + label + "' not found: " + path);
        if (!registry_path.empty() && !std::filesystem::exists(registry_path))
            throw ConfigError("registry not found: " + registry_path);
        if (!(sigma >= 0.5 && sigma <= 1.0)) throw ConfigError("sigma must lie in [1/2, 1]");
        try {
            (void)test_function();
        } catch (const DomainError& e) {
            throw ConfigError(e.what());
        }
    }
};

inline std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    std::string t = text;
    std::replace(t.begin(), t.end(), ',', ' ');
    std::istringstream is(t);
    std::string tok;
    while (is >> tok) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ConfigError("bad x-grid entry '" + tok + "'");
        }
    }
    return out;
}

/**
 * INI layout (every key optional):
 *   [registry]  path
 *   [testfn]    center, radius
 *   [ef]        tolerance, height
 *   [identity]  tolerance, height, center, radius
 *   [grid]      x = 0.1 0.05 0.02
 *   [zeros]     <label> = <zero file>
 *   [mode]      sigma
 *   [linnik]    zeta_height, l_height
 *   [output]    dir   (ZEROSUM_OUT overrides)
 */
inline RunConfig load_config(const std::string& path) {
    RunConfig c;
    if (!path.empty()) {
        boost::property_tree::ptree t;
        // get(key, default) falls back silently on a malformed value; this throws instead
        auto num = [&](const char* key, double def) {
            auto v = t.get_optional<std::string>(key);
            if (!v) return def;
            double d = 0.0;
            const auto [end, ec] = std::from_chars(v->data(), v->data() + v->size(), d);
            if (ec != std::errc() || end != v->data() + v->size())
                throw ConfigError("config " + path + ": bad number '" + *v + "' for " + key);
            return d;
        };
        try {
            boost::property_tree::read_ini(path, t);
        } catch (const boost::property_tree::ini_parser_error& e) {
            throw ConfigError("config " + path + ": " + e.message());
        }
        try {
            c.registry_path = t.get<std::string>("registry.path", "");
            c.center = num("testfn.center", c.center);
            c.radius = num("testfn.radius", c.radius);
            c.ef_tolerance = num("ef.tolerance", c.ef_tolerance);
            c.ef_height = num("ef.height", c.ef_height);
            c.identity_tolerance = num("identity.tolerance", c.identity_tolerance);
            c.identity_height = num("identity.height", c.identity_height);
            c.identity_center = num("identity.center", c.identity_center);
            c.identity_radius = num("identity.radius", c.identity_radius);
            if (auto g = t.get_optional<std::string>("grid.x")) c.grid = parse_grid(*g);
            if (auto z = t.get_child_optional("zeros"))
                for (const auto& [label, v] : *z) c.zero_files[label] = v.data();
            c.sigma = num("mode.sigma", c.sigma);
            c.linnik_zeta_height = num("linnik.zeta_height", c.linnik_zeta_height);
            c.linnik_l_height = num("linnik.l_height", c.linnik_l_height);
            c.out_dir = t.get<std::string>("output.dir", c.out_dir.string());
        } catch (const boost::property_tree::ptree_error& e) {
            throw ConfigError("config " + path + ": " + e.what());
        }
    }
    if (const char* env = std::getenv("ZEROSUM_OUT")) c.out_dir = env;
    c.validate();
    return c;
}

/// Shared state for one tool invocation.
class Session {
public:
    explicit Session(RunConfig cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr)
        : cfg_(std::move(cfg)), out_(out), err_(err) {
        if (!cfg_.registry_path.empty()) registry_ = Registry::from_ini(cfg_.registry_path);
    }

    const RunConfig& config() const { return cfg_; }
    RunConfig& config() { return cfg_; }
    const Registry& registry() const { return registry_; }
    ZeroStore& store() { return store_; }

    /// Zeros of L complete to height T: ingest a configured file first, then search if L can be evaluated.
    void ensure_zeros(const SelbergLFunction& L, double T) {
        if (auto it = cfg_.zero_files.find(L.label); it != cfg_.zero_files.end() && !store_.has(L.label))
            store_.ingest(it->second, L.label, L.real_coefficients);
        if (store_.has(L.label) && store_.entry(L.label).complete_to >= T) return;
        if (!L.evaluable()) {
            if (store_.has(L.label)) return;  // ingested data short of T: sums carry a tail budget
            throw MissingDataError("no zeros available for '" + L.label + "'; ingest a zero file");
        }
        populate(store_, L, T);
    }

    /// Ingest configured zeros without searching (for labels that cannot be evaluated).
    bool try_ingest(const std::string& label, bool symmetric) {
        if (store_.has(label)) return true;
        auto it = cfg_.zero_files.find(label);
        if (it == cfg_.zero_files.end()) return false;
        store_.ingest(it->second, label, symmetric);
        return true;
    }

    std::filesystem::path output(const std::string& name) const {
        std::filesystem::create_directories(cfg_.out_dir);
        return cfg_.out_dir / name;
    }

    void write(const std::string& name, const std::string& text) const {
        std::ofstream f(output(name), std::ios::binary);
        if (!f) throw Error("cannot write " + output(name).string());
        f << text;
    }

    std::ostream& out() { return out_; }
    std::ostream& err() { return err_; }

private:
    RunConfig cfg_;
    std::ostream& out_;
    std::ostream& err_;
    Registry registry_;
    ZeroStore store_;
};

inline std::string file_label(std::string label) {
    for (auto& ch : label)
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '.' && ch != '-' && ch != '_') ch = '_';
    return label;
}

// =============================================================================
// Commands
// =============================================================================

/// Find zeros of zeta or a Dirichlet L-function to height T and write the zero file.
inline int cmd_find_zeros(Session& s, const std::string& label, double T, const std::string& path = {}) {
    SelbergLFunction L;
    try {
        L = s.registry().get(label);
    } catch (const DomainError& e) {
        s.err() << "zeros: " << e.what() << "\n";
        return exit_usage;
    }
    if (!L.chi) {
        s.err() << "zeros: no finder for '" << label << "'; use ingest\n";
        return exit_usage;
    }
    if (!(T > 0.0)) {
        s.err() << "zeros: T must be positive\n";
        return exit_usage;
    }
    try {
        populate(s.store(), L, T);
    } catch (const PrecisionError& e) {
        s.err() << "zeros: " << e.what() << "\n";
        return exit_fail;
    } catch (const DomainError& e) {
        s.err() << "zeros: " << e.what() << "\n";
        return exit_usage;
    }
    const auto e = s.store().entry(L.label);
    const std::size_t count = s.store().points(L.label, T).size() / (e.symmetric ? 2 : 1);
    nlohmann::ordered_json j{{"label", L.label}, {"T", T}, {"count", count}};
    bool ok = true;
    // whole-range argument principle where it is cheap; higher ranges are checked block by block in the finder
    if (T <= 1000.0) {
        const double lo = e.symmetric ? FinderOptions{}.bottom : -T;
        const int ap = count_by_argument_principle(L, lo, T);
        j["argument_principle"] = ap;
        ok = ap == static_cast<int>(count);
    } else {
        j["argument_principle"] = nullptr;
        j["validation"] = "blockwise";
    }
    j["complete"] = ok;
    std::ostringstream file;
    s.store().export_file(L.label, file);
    if (path.empty())
        s.write("zeros_" + file_label(L.label) + ".txt", file.str());
    else {
        std::ofstream f(path, std::ios::binary);
        f << file.str();
    }
    s.out() << dump_json(j) << "\n";
    return ok ? exit_pass : exit_fail;
}

/// Validate a zero file, store it under `label` and write a normalized copy.
inline int cmd_ingest(Session& s, const std::string& label, const std::string& path, bool symmetric = true) {
    std::size_t n = 0;
    try {
        n = s.store().ingest(path, label, symmetric);
    } catch (const ParseError& e) {
        s.err() << "ingest: " << path << ": " << e.what() << "\n";
        return exit_usage;
    } catch (const MissingDataError& e) {
        s.err() << "ingest: " << e.what() << "\n";
        return exit_usage;
    }
    const auto e = s.store().entry(label);
    nlohmann::ordered_json j{{"label", label}, {"records", n}, {"complete_to", e.complete_to}};
    if (!e.zeros.empty()) {
        j["first"] = e.zeros.front().gamma;
        j["last"] = e.zeros.back().gamma;
    }
    std::ostringstream file;
    s.store().export_file(label, file);
    s.write("zeros_" + file_label(label) + ".txt", file.str());
    s.out() << dump_json(j) << "\n";
    return exit_pass;
}

inline int cmd_verify_ef(Session& s, const std::string& label, std::optional<double> tolerance = {},
                         std::optional<double> height = {}) {
    SelbergLFunction L;
    try {
        L = s.registry().get(label);
    } catch (const DomainError& e) {
        s.err() << "verify-ef: " << e.what() << "\n";
        return exit_usage;
    }
    const double tol = tolerance.value_or(s.config().ef_tolerance);
    const double T = height.value_or(s.config().ef_height);
    try {
        s.ensure_zeros(L, T);
        const auto rep = verify(L, s.config().test_function().as_fn(), s.store(), tol, T);
        const auto text = dump_json(rep.to_json());
        s.write("ef_" + file_label(L.label) + ".json", text + "\n");
        s.out() << text << "\n";
        return rep.pass ? exit_pass : exit_fail;
    } catch (const MissingDataError& e) {
        s.err() << "verify-ef: SKIPPED: " << e.what() << "\n";
        return exit_skipped;
    }
}

namespace detail {

inline int emit(Session& s, const RelationReport& rep, const std::string& name) {
    const auto text = dump_json(rep.to_json());
    s.write(name + ".json", text + "\n");
    s.write(name + ".csv", rep.to_csv());
    s.out() << name << ": " << to_string(rep.status) << "\n";
    return exit_code(rep.status);
}

inline int emit(Session& s, const IdentityReport& rep, const std::string& name) {
    auto j = rep.to_json();
    j["name"] = name;
    j["status"] = rep.pass ? "PASS" : "FAIL";
    s.write(name + ".json", dump_json(j) + "\n");
    s.out() << name << ": " << (rep.pass ? "PASS" : "FAIL") << "\n";
    return rep.pass ? exit_pass : exit_fail;
}

inline int emit_skipped(Session& s, const std::string& name, const std::string& why) {
    nlohmann::ordered_json j{{"name", name}, {"status", "SKIPPED"}, {"note", why}};
    s.write(name + ".json", dump_json(j) + "\n");
    s.out() << name << ": SKIPPED (" << why << ")\n";
    return exit_skipped;
}

// FAIL dominates SKIPPED, which dominates PASS.
inline int combine(int a, int b) {
    if (a == exit_fail || b == exit_fail) return exit_fail;
    if (a == exit_skipped || b == exit_skipped) return exit_skipped;
    return std::max(a, b);
}

inline std::vector<double> grid_or(const RunConfig& c, std::vector<double> fallback) {
    return c.grid.empty() ? fallback : c.grid;
}

}  // namespace detail

inline const std::vector<std::string>& relation_names() {
    static const std::vector<std::string> names{"thm1",    "thm2",         "thm5", "thm6", "linnik",
                                                "symmetry", "tensor-split", "thm7", "thm8"};
    return names;
}

/// Run one relation harness; `character` is a Conrey label "q.n".
inline int cmd_relation(Session& s, const std::string& name, const std::string& character = "4.3") {
    const auto& cfg = s.config();
    const auto h = cfg.test_function();
    auto primitive = [&](const std::string& lab) {
        auto L = s.registry().get(lab);
        if (!L.chi) throw DomainError("'" + lab + "' is not a Dirichlet character");
        return *L.chi;
    };
    try {
        if (name == "thm1") {
            const auto chi = primitive(character);
            const auto L = dirichlet_lfunction(chi);
            const auto phi = phi_chi(chi);
            const auto xs = detail::grid_or(cfg, {0.1, 0.05, 0.02, 0.01});
            const RelationOptions opt;
            s.ensure_zeros(zeta_lfunction(), weighted_height(h, xs.back(), phi.bandwidth, opt.base_height));
            s.ensure_zeros(L, opt.base_height);
            return detail::emit(s, theorem1_compare(L, phi, h, xs, s.store(), opt), name);
        }
        if (name == "thm2") {
            const auto D = delta_lfunction();
            const auto phi = phi_f(D.a, 12);
            const auto xs = detail::grid_or(cfg, {1e-2, 1e-3, 1e-4});
            if (s.try_ingest(D.label, true))
                s.ensure_zeros(zeta_lfunction(), weighted_height(h, xs.back(), phi.bandwidth, 600.0));
            return detail::emit(s, theorem2_compare(D, phi, h, xs, s.store(), -1.0, 1.0, cfg.sigma), name);
        }
        if (name == "thm5") {
            const auto D = delta_lfunction();
            auto rep = theorem5_check(*D.euler, h, detail::grid_or(cfg, {1e-2, 1e-3, 1e-4}), cfg.sigma);
            rep.extra["zero_side"] = s.try_ingest(D.label, true) ? "see thm2" : "SKIPPED";
            return detail::emit(s, rep, name);
        }
        if (name == "thm6") {
            const auto D = delta_lfunction();
            const auto DD = delta_squared_lfunction();
            const auto phi = phi_f(D.a, 12);
            const auto xs = detail::grid_or(cfg, {1e-2, 1e-3});
            s.try_ingest(D.label, true);
            if (s.try_ingest(DD.label, true))
                s.ensure_zeros(zeta_lfunction(), weighted_height(h, xs.back(), 2.0 * phi.bandwidth, 600.0));
            return detail::emit(s, theorem6_compare(DD, D, phi, h, xs, s.store(), cfg.sigma), name);
        }
        if (name == "linnik") {
            const auto chi = primitive(character);
            const auto xs = detail::grid_or(cfg, {0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001});
            s.ensure_zeros(zeta_lfunction(), cfg.linnik_zeta_height);
            if (chi.modulus > 1) s.ensure_zeros(dirichlet_lfunction(chi), cfg.linnik_l_height);
            const double TL = chi.modulus > 1 ? cfg.linnik_l_height : cfg.linnik_zeta_height;
            return detail::emit(s, linnik_classic(chi, xs, s.store(), TL, cfg.linnik_zeta_height), name);
        }
        if (name == "symmetry") {
            const auto chi = primitive(character == "4.3" ? "5.2" : character);
            const auto a = phi_chi(chi);
            const auto b = fourier_interp_u(character_stream(chi));
            const auto xs = detail::grid_or(cfg, {0.1, 0.05, 0.02});
            const RelationOptions opt;
            s.ensure_zeros(zeta_lfunction(), weighted_height(h, xs.back(), std::max(a.bandwidth, b.bandwidth),
                                                             opt.base_height));
            const int r1 = detail::emit(s, symmetry_experiment(a, b, h, xs, s.store()), name);
            const int r2 =
                detail::emit(s, theta_experiment(fourier_interp_u(squares_stream()), h, xs, s.store()), name + "_theta");
            return detail::combine(r1, r2);
        }
        if (name == "tensor-split") {
            const auto D = delta_lfunction();
            const auto xs = detail::grid_or(cfg, {1e-2, 1e-3});
            RelationReport rep;
            rep.name = name;
            rep.status = Status::pass;
            double worst = 0.0;
            nlohmann::ordered_json parts = nlohmann::ordered_json::array();
            for (double x : xs) {
                const auto t = tensor_decompositions(*D.euler, *D.euler, h, x);
                const auto l5 = s_tilde_split(*D.euler, h, x);
                RelationRow row;
                row.x = x;
                row.lhs = t.S;
                row.rhs = t.S5 + t.S6 + t.S7 + t.S8;
                row.residual = std::max({t.split2_error, t.split4_error, t.identity_error, l5.split_error()});
                worst = std::max(worst, row.residual);
                parts.push_back({{"x", x},
                                 {"split2_error", t.split2_error},
                                 {"split4_error", t.split4_error},
                                 {"identity_error", t.identity_error},
                                 {"lemma_split_error", l5.split_error()}});
                rep.rows.push_back(row);
            }
            rep.fitted_order = RelationReport::log_log_slope(rep.rows);
            rep.extra["errors"] = parts;
            rep.extra["tolerance"] = 1e-10;
            rep.status = worst <= 1e-10 ? Status::pass : Status::fail;
            return detail::emit(s, rep, name);
        }
        if (name == "thm7") {
            const auto chi = primitive(character);
            const auto L = dirichlet_lfunction(chi);
            const auto phi = phi_chi(chi);
            s.ensure_zeros(zeta_lfunction(), cfg.identity_height);
            s.ensure_zeros(L, cfg.identity_height);
            const auto hh = bump(cfg.identity_center, cfg.identity_radius);
            return detail::emit(s,
                                theorem7_identity(L, phi.eval, phi.bandwidth, hh, s.store(), cfg.identity_height,
                                                  cfg.identity_tolerance),
                                name);
        }
        if (name == "thm8") {
            const auto D = delta_lfunction();
            const auto DD = delta_squared_lfunction();
            if (!s.try_ingest(DD.label, true)) return detail::emit_skipped(s, name, "no zeros for " + DD.label);
            if (!s.try_ingest(D.label, true)) return detail::emit_skipped(s, name, "no zeros for " + D.label);
            const auto omega = fourier_interp_u(omega_stream(*D.euler));
            s.ensure_zeros(zeta_lfunction(), cfg.identity_height);
            const auto hh = bump(cfg.identity_center, cfg.identity_radius);
            return detail::emit(s,
                                theorem8_identity(DD, D, omega.eval, omega.eval, omega.bandwidth, hh, s.store(),
                                                  cfg.identity_height, cfg.identity_tolerance),
                                name);
        }
    } catch (const MissingDataError& e) {
        return detail::emit_skipped(s, name, e.what());
    } catch (const DomainError& e) {
        s.err() << "relation " << name << ": " << e.what() << "\n";
        return exit_usage;
    }
    s.err() << "relation: unknown name '" << name << "'\n";
    return exit_usage;
}

/// Collect every report in the output directory into summary.json.
inline int cmd_report(Session& s) {
    const auto dir = s.config().out_dir;
    if (!std::filesystem::is_directory(dir)) {
        s.err() << "report: no output directory " << dir << "\n";
        return exit_usage;
    }
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.path().extension() == ".json" && e.path().filename() != "summary.json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    bool failed = false;
    for (const auto& f : files) {
        std::ifstream in(f);
        nlohmann::ordered_json j;
        try {
            j = nlohmann::ordered_json::parse(in);
        } catch (const nlohmann::json::exception&) {
            s.err() << "report: unreadable " << f << "\n";
            return exit_usage;
        }
        std::string status = j.contains("status") ? j["status"].get<std::string>()
                             : j.contains("pass") ? (j["pass"].get<bool>() ? "PASS" : "FAIL")
                                                  : "UNKNOWN";
        failed |= status == "FAIL";
        rows.push_back({{"file", f.filename().string()}, {"status", status}});
        s.out() << std::left << std::setw(32) << f.filename().string() << status << "\n";
    }
    s.write("summary.json", dump_json(nlohmann::ordered_json{{"reports", rows}}) + "\n");
    return failed ? exit_fail : exit_pass;
}

}  // namespace zerosum
