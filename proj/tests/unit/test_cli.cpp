#include <zerosum/cli.hpp>

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace zerosum;
namespace fs = std::filesystem;

namespace {

// Fresh scratch directory per test, removed on destruction.
struct Scratch {
    fs::path dir;
    Scratch() {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir = fs::temp_directory_path() / ("zerosum_cli_" + std::string(info->name()) + "_" +
                                           std::to_string(static_cast<long>(::getpid())));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
};

RunConfig config_in(const fs::path& dir) {
    RunConfig c;
    c.out_dir = dir / "out";
    return c;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST(Config, ParseGrid) {
    EXPECT_EQ(parse_grid("0.1, 0.05 0.02"), (std::vector<double>{0.1, 0.05, 0.02}));
    EXPECT_TRUE(parse_grid("").empty());
    EXPECT_THROW(parse_grid("0.1 abc"), ConfigError);
    EXPECT_THROW(parse_grid("0.1x"), ConfigError);
}

TEST(Config, ValidateRejectsBadValues) {
    RunConfig c;
    EXPECT_NO_THROW(c.validate());
    c.grid = {0.1, 0.2};
    EXPECT_THROW(c.validate(), ConfigError);
    c.grid = {0.1, 0.1};
    EXPECT_THROW(c.validate(), ConfigError);
    c.grid = {0.1, -0.1};
    EXPECT_THROW(c.validate(), ConfigError);
    c = RunConfig{};
    c.sigma = 0.3;
    EXPECT_THROW(c.validate(), ConfigError);
    c = RunConfig{};
    c.radius = 3.0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = RunConfig{};
    c.ef_tolerance = 0.0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = RunConfig{};
    c.zero_files["delta"] = "/nonexistent/zeros.txt";
    EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Config, LoadIniAndEnvOverride) {
    Scratch s;
    const auto ini = s.dir / "run.ini";
    std::ofstream(ini) << "[testfn]\ncenter = 3\nradius = 2\n[grid]\nx = 0.1 0.01\n[mode]\nsigma = 0.75\n"
                          "[output]\ndir = " << (s.dir / "from_ini").string() << "\n";
    ::unsetenv("ZEROSUM_OUT");
    auto c = load_config(ini.string());
    EXPECT_EQ(c.center, 3.0);
    EXPECT_EQ(c.radius, 2.0);
    EXPECT_EQ(c.grid, (std::vector<double>{0.1, 0.01}));
    EXPECT_EQ(c.sigma, 0.75);
    EXPECT_EQ(c.out_dir, s.dir / "from_ini");
    ::setenv("ZEROSUM_OUT", (s.dir / "from_env").c_str(), 1);
    c = load_config(ini.string());
    ::unsetenv("ZEROSUM_OUT");
    EXPECT_EQ(c.out_dir, s.dir / "from_env");

    std::ofstream(s.dir / "bad.ini") << "[testfn]\ncenter = notanumber\n";
    EXPECT_THROW(load_config((s.dir / "bad.ini").string()), ConfigError);
    std::ofstream(s.dir / "missing.ini") << "[registry]\npath = /nonexistent/registry.ini\n";
    EXPECT_THROW(load_config((s.dir / "missing.ini").string()), ConfigError);
}

TEST(Commands, ExitCodeMapping) {
    EXPECT_EQ(exit_code(Status::pass), 0);
    EXPECT_EQ(exit_code(Status::fail), 1);
    EXPECT_EQ(exit_code(Status::skipped), 3);
    EXPECT_EQ(detail::combine(exit_pass, exit_skipped), exit_skipped);
    EXPECT_EQ(detail::combine(exit_skipped, exit_fail), exit_fail);
}

TEST(Commands, FindZerosWritesDeterministicFile) {
    Scratch s;
    std::ostringstream out, err;
    Session a(config_in(s.dir / "a"), out, err);
    EXPECT_EQ(cmd_find_zeros(a, "nope", 50.0), exit_usage);
    EXPECT_EQ(cmd_find_zeros(a, "delta", 50.0), exit_usage);
    EXPECT_EQ(cmd_find_zeros(a, "zeta", -1.0), exit_usage);
    ASSERT_EQ(cmd_find_zeros(a, "zeta", 50.0), exit_pass) << err.str();
    const auto j = nlohmann::json::parse(out.str());
    EXPECT_EQ(j["count"], 10);
    EXPECT_EQ(j["argument_principle"], 10);

    Session b(config_in(s.dir / "b"), out, err);
    ASSERT_EQ(cmd_find_zeros(b, "zeta", 50.0), exit_pass);
    const auto fa = slurp(s.dir / "a" / "out" / "zeros_zeta.txt");
    EXPECT_FALSE(fa.empty());
    EXPECT_EQ(fa, slurp(s.dir / "b" / "out" / "zeros_zeta.txt"));

    // the written file ingests back into the same ordinates
    Session c(config_in(s.dir / "c"), out, err);
    EXPECT_EQ(cmd_ingest(c, "zeta", (s.dir / "a" / "out" / "zeros_zeta.txt").string()), exit_pass);
    EXPECT_EQ(c.store().entry("zeta").zeros.size(), 10u);
    EXPECT_EQ(cmd_ingest(c, "other", (s.dir / "absent.txt").string()), exit_usage);
}

TEST(Commands, VerifyUnreachableToleranceFails) {
    Scratch s;
    std::ostringstream out, err;
    Session sess(config_in(s.dir), out, err);
    EXPECT_EQ(cmd_verify_ef(sess, "zeta", 1e-15, 100.0), exit_fail);
    EXPECT_TRUE(fs::exists(s.dir / "out" / "ef_zeta.json"));
    EXPECT_EQ(cmd_verify_ef(sess, "nope"), exit_usage);
    // no zeros and no evaluation route
    EXPECT_EQ(cmd_verify_ef(sess, "delta", 1e-6, 50.0), exit_skipped);
}

TEST(Commands, RelationsAndReport) {
    Scratch s;
    std::ostringstream out, err;
    Session sess(config_in(s.dir), out, err);
    EXPECT_EQ(cmd_relation(sess, "no-such-relation"), exit_usage);
    EXPECT_EQ(cmd_relation(sess, "tensor-split"), exit_pass) << err.str();
    EXPECT_EQ(cmd_relation(sess, "thm6"), exit_skipped) << err.str();
    EXPECT_TRUE(fs::exists(s.dir / "out" / "tensor-split.json"));
    EXPECT_TRUE(fs::exists(s.dir / "out" / "thm6.json"));

    std::ostringstream rout;
    Session rep(config_in(s.dir), rout, err);
    EXPECT_EQ(cmd_report(rep), exit_pass);
    const auto summary = nlohmann::json::parse(slurp(s.dir / "out" / "summary.json"));
    ASSERT_EQ(summary["reports"].size(), 2u);
    EXPECT_EQ(summary["reports"][0]["file"], "tensor-split.json");
    EXPECT_EQ(summary["reports"][0]["status"], "PASS");
    EXPECT_EQ(summary["reports"][1]["status"], "SKIPPED");

    Session none(config_in(s.dir / "missing"), rout, err);
    EXPECT_EQ(cmd_report(none), exit_usage);
    EXPECT_FALSE(relation_names().empty());
}
