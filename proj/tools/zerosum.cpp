#include <zerosum/cli.hpp>

#include <CLI11.hpp>

int main(int argc, char** argv) {
    using namespace zerosum;
    CLI::App app{"Zero sums of L-functions: explicit formulas and relations between zeros"};
    app.require_subcommand(1);
    std::string config_path;
    unsigned workers = 0;
    std::string out_dir;
    app.add_option("-c,--config", config_path, "INI run configuration")->check(CLI::ExistingFile);
    app.add_option("-j,--workers", workers, "worker threads (default: hardware concurrency)");
    app.add_option("-o,--out", out_dir, "output directory (overrides config and ZEROSUM_OUT)");

    auto* zeros = app.add_subcommand("zeros", "find zeros of zeta or a Dirichlet L-function");
    std::string z_label, z_file;
    double z_T = 0.0;
    zeros->add_option("label", z_label, "zeta or a Conrey label q.n")->required();
    zeros->add_option("-T,--T", z_T, "height")->required();
    zeros->add_option("-f,--file", z_file, "zero file to write (default: <out>/zeros_<label>.txt)");

    auto* ingest = app.add_subcommand("ingest", "validate and store an external zero file");
    std::string i_label, i_file;
    bool i_asym = false;
    ingest->add_option("label", i_label, "L-function label, e.g. delta")->required();
    ingest->add_option("file", i_file, "zero file")->required();
    ingest->add_flag("--asymmetric", i_asym, "file lists zeros of both signs (complex coefficients)");

    auto* ef = app.add_subcommand("verify-ef", "check the explicit formula for one L-function");
    std::string e_label;
    std::optional<double> e_tol, e_T;
    ef->add_option("label", e_label, "zeta, a Conrey label q.n, or a registry entry")->required();
    ef->add_option("--tolerance", e_tol, "largest acceptable discrepancy");
    ef->add_option("-T,--T", e_T, "zero height");

    auto* rel = app.add_subcommand("relation", "run a relation harness and write JSON + CSV");
    std::string r_name, r_char = "4.3", r_grid;
    rel->add_option("name", r_name, "relation name")->required()->check(CLI::IsMember(relation_names()));
    rel->add_option("--char", r_char, "Dirichlet character (Conrey label q.n)");
    rel->add_option("--x", r_grid, "x-grid, strictly decreasing, comma separated");

    auto* report = app.add_subcommand("report", "collect report statuses into summary.json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : static_cast<int>(exit_usage);
    }

    try {
        auto cfg = load_config(config_path);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (!r_grid.empty()) {
            cfg.grid = parse_grid(r_grid);
            cfg.validate();
        }
        if (workers > 0) worker_count() = workers;
        Session s(cfg);
        if (*zeros) return cmd_find_zeros(s, z_label, z_T, z_file);
        if (*ingest) return cmd_ingest(s, i_label, i_file, !i_asym);
        if (*ef) return cmd_verify_ef(s, e_label, e_tol, e_T);
        if (*rel) return cmd_relation(s, r_name, r_char);
        if (*report) return cmd_report(s);
    } catch (const ConfigError& e) {
        std::cerr << "config: " << e.what() << "\n";
        return exit_usage;
    } catch (const ParseError& e) {
        std::cerr << e.what() << "\n";
        return exit_usage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_fail;
    }
    return exit_usage;
}
