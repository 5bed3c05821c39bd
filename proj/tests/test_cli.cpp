#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "app/commands.hpp"
#include "app/config.hpp"
#include "app/suites.hpp"

using namespace ricciglue;
using namespace ricciglue::app;

namespace {

RunConfig parse(const std::string& text) {
    std::istringstream is(text);
    return parse_config(is);
}

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorKind::InvalidInput;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("ricciglue_cli_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

int run(int (*cmd)(const RunConfig&, std::ostream&), const RunConfig& cfg) {
    std::ostringstream out, err;
    return run_command(cmd, cfg, out, err);
}

}  // namespace

TEST(Config, DefaultsRoundTrip) {
    const RunConfig d;
    const std::string text = serialize(d);
    EXPECT_EQ(serialize(parse(text)), text);
    EXPECT_EQ(config_hash(parse(text)), config_hash(d));
    EXPECT_EQ(config_hash(d).size(), 64u);
}

TEST(Config, EditedValuesRoundTripExactly) {
    RunConfig c;
    c.glue.theta = 0.1 + 0.2;
    c.search.fd_step = 1.0 / 3.0;
    c.ellipsoid.amplitude = 0.0625;
    c.family.parameters = {0.0, 1e-17, 2.5};
    c.output_dir = "results/run 1";
    const RunConfig back = parse(serialize(c));
    EXPECT_EQ(back.glue.theta, c.glue.theta);
    EXPECT_EQ(back.search.fd_step, c.search.fd_step);
    ASSERT_TRUE(back.ellipsoid.amplitude);
    EXPECT_EQ(*back.ellipsoid.amplitude, 0.0625);
    EXPECT_EQ(back.family.parameters, c.family.parameters);
    EXPECT_EQ(back.output_dir, c.output_dir);
    EXPECT_NE(config_hash(back), config_hash(RunConfig{}));
}

TEST(Config, PartialFileKeepsDefaults) {
    const RunConfig c = parse("[glue]\ntheta = 1.2\n");
    EXPECT_EQ(c.glue.theta, 1.2);
    EXPECT_EQ(c.search.grid, 400);
    EXPECT_FALSE(c.ellipsoid.amplitude);
}

TEST(Config, UnknownKeysSectionsAndBadValuesRejected) {
    EXPECT_EQ(kind_of([] { parse("[glue]\ntheta_typo = 1\n"); }), ErrorKind::InvalidConfig);
    EXPECT_EQ(kind_of([] { parse("[extras]\nx = 1\n"); }), ErrorKind::InvalidConfig);
    EXPECT_EQ(kind_of([] { parse("[search]\ngrid = many\n"); }), ErrorKind::InvalidConfig);
    EXPECT_EQ(kind_of([] { parse("[search]\ngrid = 4.5\n"); }), ErrorKind::InvalidConfig);
    EXPECT_EQ(kind_of([] { load_config("/nonexistent/ricciglue.ini"); }), ErrorKind::InvalidConfig);
}

TEST(Config, RangeChecks) {
    RunConfig c;
    c.search.grid = 0;
    EXPECT_EQ(kind_of([&] { validate(c); }), ErrorKind::InvalidConfig);
    c = {};
    c.glue.m = 1;
    EXPECT_EQ(kind_of([&] { validate(c); }), ErrorKind::InvalidConfig);
    c = {};
    c.glue.profile = "torus";
    EXPECT_EQ(kind_of([&] { validate(c); }), ErrorKind::InvalidConfig);
    EXPECT_NO_THROW(validate(RunConfig{}));
}

TEST(ExitCodes, Mapping) {
    EXPECT_EQ(exit_code(ErrorKind::InvalidConfig), kConfigError);
    EXPECT_EQ(exit_code(ErrorKind::InvalidInput), kConfigError);
    EXPECT_EQ(exit_code(ErrorKind::HypothesisViolated), kHypothesis);
    EXPECT_EQ(exit_code(ErrorKind::FiberHypothesisViolated), kHypothesis);
    EXPECT_EQ(exit_code(ErrorKind::SearchExhausted), kExhausted);
    EXPECT_EQ(exit_code(ErrorKind::SingularMetric), kInternal);
}

TEST(Commands, GlueWritesReportsAndIsDeterministic) {
    RunConfig c;
    c.search.grid = 200;
    c.output_dir = scratch("glue").string();
    ASSERT_EQ(run(cmd_glue, c), kOk);
    const std::string first = slurp(std::filesystem::path(c.output_dir) / "glue_report.json");
    EXPECT_NE(first.find("\"certified\": true"), std::string::npos);
    EXPECT_NE(first.find(config_hash(c)), std::string::npos);
    EXPECT_TRUE(std::filesystem::exists(std::filesystem::path(c.output_dir) / "glue_curve.csv"));
    ASSERT_EQ(run(cmd_glue, c), kOk);
    EXPECT_EQ(slurp(std::filesystem::path(c.output_dir) / "glue_report.json"), first);
}

TEST(Commands, GlueFailureCodes) {
    RunConfig c;
    c.search.grid = 200;
    c.output_dir = scratch("glue_fail").string();
    c.glue.theta = 1.5707963267948966;
    EXPECT_EQ(run(cmd_glue, c), kHypothesis);
    c.glue.theta = 1.0;
    c.glue.profile = "cylinder";
    EXPECT_EQ(run(cmd_glue, c), kHypothesis);
    c.glue.profile = "cap";
    c.glue.m = 1;
    EXPECT_EQ(run(cmd_glue, c), kConfigError);
    c.glue.m = 3;
    c.search.floor = 1e6;
    c.search.max_halvings = 6;
    EXPECT_EQ(run(cmd_glue, c), kExhausted);
}

TEST(Commands, FamilyWritesOrderedReport) {
    RunConfig c;
    c.search.grid = 200;
    c.family.parameters = {0.0, 0.5, 1.0};
    c.output_dir = scratch("family").string();
    ASSERT_EQ(run(cmd_family, c), kOk);
    const std::string json = slurp(std::filesystem::path(c.output_dir) / "family_report.json");
    EXPECT_LT(json.find("\"kind\""), json.find("\"epsilon\""));
    EXPECT_NE(json.find("\"fibers\""), std::string::npos);
    c.family.parameters.clear();
    EXPECT_EQ(run(cmd_family, c), kConfigError);
}

TEST(Commands, EllipsoidRejectsCentreOutsideRange) {
    RunConfig c;
    c.ellipsoid.s0 = 1.3;
    c.output_dir = scratch("ellipsoid").string();
    EXPECT_EQ(run(cmd_ellipsoid, c), kConfigError);
}

TEST(Selftest, SuitesPassAtDefaultStep) {
    for (const SuiteResult& s : run_selftest(1e-3, 8)) EXPECT_TRUE(s.pass) << s.name << ": " << s.detail;
}

TEST(Selftest, CoarseStepFailsTheOracle) {
    EXPECT_FALSE(oracle_suite(0.5, 6).pass);
    RunConfig c;
    c.search.fd_step = 0.5;
    c.search.grid = 6;
    EXPECT_EQ(run(cmd_selftest, c), kSelftestFailed);
}
