#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fspde/commands.hpp"
#include "fspde/config.hpp"
#include "fspde/io.hpp"

using namespace fspde;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("fspde_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.n_steps = 64;
    c.n_x = 64;
    c.noise_modes = 8;
    c.covariance = CovarianceSpec::power_law(1.0, 3.0, 8);
    c.kernel_modes = 32;
    c.ensemble = 3;
    return c;
}

}  // namespace

TEST(Io, DoubleFormattingRoundTrips) {
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(std::stod(format_double(M_PI)), M_PI);
    EXPECT_EQ(format_double(std::nan("")), "nan");
    EXPECT_EQ(format_double(-INFINITY), "-inf");
    Eigen::MatrixXd rows(1, 2);
    rows << 1.0, 0.5;
    EXPECT_EQ(to_csv({"a", "b"}, rows), "a,b\n1,0.5\n");
}

TEST(Config, JsonRoundTripAndHash) {
    const auto c = small_config();
    const auto d = ExperimentConfig::from_json(c.to_json());
    EXPECT_EQ(c.to_json(), d.to_json());
    EXPECT_EQ(c.hash(), d.hash());
    auto e = c;
    e.seed += 1;
    EXPECT_NE(c.hash(), e.hash());
}

TEST(Config, UnknownKeysAndBadValuesAreRejected) {
    EXPECT_THROW(ExperimentConfig::from_json({{"hurts", 0.7}}), ConfigError);
    const auto bad_alpha = ExperimentConfig::from_json({{"alpha", 0.2}});
    try {
        bad_alpha.validate();
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.hypothesis(), "alpha-range");
    }
    auto heavy = ExperimentConfig::from_json({{"spectrum", {{"c0", 1.0}, {"p", 1.5}}}});
    try {
        heavy.validate();
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.hypothesis(), "(C)");
    }
}

TEST(Config, CoarsenedProblemRestrictsNoise) {
    const auto c = small_config();
    const auto fine = c.problem(5);
    const auto coarse = c.coarsened_problem(*fine.noise, 1);
    EXPECT_EQ(coarse.grid().n_steps(), 32u);
    EXPECT_EQ(coarse.noise->n_modes(), 4u);
    EXPECT_EQ(coarse.noise->mode_path(2).values[7], fine.noise->mode_path(2).values[14]);
}

TEST(Commands, SimulateWritesOutputsAndManifest) {
    const auto dir = scratch("simulate");
    CommandOptions o;
    o.out = dir;
    std::ostringstream log;
    EXPECT_EQ(cmd_simulate(small_config(), o, log), kExitOk) << log.str();
    for (const char* f : {"noise.csv", "solution_mild.csv", "solution_galerkin.csv", "manifest.json"}) {
        EXPECT_TRUE(fs::exists(dir / f)) << f;
    }
    std::ifstream in(dir / "manifest.json");
    const auto m = nlohmann::json::parse(in);
    EXPECT_EQ(m.at("version"), kVersion);
    EXPECT_EQ(m.at("seed"), small_config().seed);
    fs::remove_all(dir);
}

TEST(Commands, ConfigErrorExitCode) {
    const auto dir = scratch("badcfg");
    std::ofstream(dir / "c.json") << R"({"alpha": 0.9})";
    std::ostringstream log, err;
    EXPECT_EQ(run_command("simulate", dir / "c.json", CommandOptions{}, log, err), kExitConfig);
    EXPECT_NE(err.str().find("alpha-range"), std::string::npos) << err.str();
    std::ofstream(dir / "d.json") << "{ not json";
    EXPECT_EQ(run_command("simulate", dir / "d.json", CommandOptions{}, log, err), kExitConfig);
    fs::remove_all(dir);
}

TEST(Commands, VerifyKernelPasses) {
    const auto dir = scratch("kernel");
    CommandOptions o;
    o.out = dir;
    o.which = "kernel";
    std::ostringstream log;
    auto c = small_config();
    c.sample_count = 2000;
    EXPECT_EQ(cmd_verify(c, o, log), kExitOk) << log.str();
    EXPECT_TRUE(fs::exists(dir / "kernel.json"));
    fs::remove_all(dir);
}
