#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "qheat/config.hpp"

using namespace qheat;

namespace {

const char* kMinimal = R"([system]
dim = 2
hamiltonian = [0, 1, 1, 0]

[mode 1]
operator = [1, 0, 0, 0]

[reservoir hot]
temperature = 2.5
mode1 = [0.2, 2, 10]

[solver]
tier = 3
)";

ConfigError error_of(const std::string& text) {
    try {
        parse_config_string(text, "test.cfg");
    } catch (const ConfigError& e) {
        return e;
    }
    ADD_FAILURE() << "no ConfigError for:\n" << text;
    return ConfigError("", 0, "", "");
}

std::string replace_line(const std::string& text, const std::string& from, const std::string& to) {
    std::string out = text;
    out.replace(out.find(from), from.size(), to);
    return out;
}

}  // namespace

TEST(Config, ParsesMinimalFile) {
    const RunConfig c = parse_config_string(kMinimal);
    EXPECT_EQ(c.dim, 2u);
    ASSERT_EQ(c.modes.size(), 1u);
    ASSERT_EQ(c.reservoirs.size(), 1u);
    EXPECT_EQ(c.reservoirs[0].label, "hot");
    EXPECT_DOUBLE_EQ(c.reservoirs[0].temperature, 2.5);
    EXPECT_DOUBLE_EQ(c.reservoirs[0].couplings[0].kernel.zeta, 10.0);
    EXPECT_EQ(c.solver.tier, 3u);
    EXPECT_EQ(c.solver.n_pade, SolverConfig{}.n_pade);
    EXPECT_TRUE(c.sweep.ratios.empty());
}

TEST(Config, CommentsAndWhitespace) {
    const std::string text = replace_line(kMinimal, "tier = 3", "  tier   =   3   # deeper later\n# note");
    EXPECT_EQ(parse_config_string(text).solver.tier, 3u);
}

TEST(Config, PresetRoundTrip) {
    const RunConfig p = table1_preset();
    const std::string text = serialize(p);
    const RunConfig back = parse_config_string(text);
    EXPECT_EQ(back, p);
    EXPECT_EQ(serialize(back), text);
}

TEST(Config, RoundTripKeepsImaginaryParts) {
    RunConfig c = parse_config_string(kMinimal);
    c.hamiltonian(0, 1) = cplx(0.5, 0.25);
    c.hamiltonian(1, 0) = cplx(0.5, -0.25);
    c.solver.thermal_tier.reset();
    c.solver.terminator = true;
    c.grids.d_omega = 0.1 / 3.0;
    EXPECT_EQ(parse_config_string(serialize(c)), c);
}

TEST(Config, ErrorsCarryLineAndField) {
    {
        const auto e = error_of(replace_line(kMinimal, "temperature = 2.5", "temperature = -1"));
        EXPECT_EQ(e.line(), 9);
        EXPECT_NE(e.field().find("temperature"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("test.cfg:9"), std::string::npos);
    }
    {
        const auto e = error_of(replace_line(kMinimal, "mode1 = [0.2, 2, 10]", "mode1 = [0.2, 2"));
        EXPECT_EQ(e.line(), 10);
        EXPECT_NE(e.field().find("mode1"), std::string::npos);
    }
    {
        const auto e = error_of(replace_line(kMinimal, "tier = 3", "tier = three"));
        EXPECT_EQ(e.line(), 13);
        EXPECT_NE(e.field().find("tier"), std::string::npos);
    }
    {
        const auto e = error_of(replace_line(kMinimal, "mode1 = [0.2, 2, 10]", "mode1 = [-0.2, 2, 10]"));
        EXPECT_EQ(e.line(), 10);
    }
    {
        const auto e = error_of(replace_line(kMinimal, "tier = 3", "teir = 3"));
        EXPECT_EQ(e.line(), 13);
        EXPECT_EQ(e.message(), "unknown key");
    }
}

TEST(Config, StructuralErrors) {
    EXPECT_EQ(error_of(replace_line(kMinimal, "[solver]", "[solvr]")).line(), 12);
    EXPECT_EQ(error_of(replace_line(kMinimal, "hamiltonian = [0, 1, 1, 0]", "hamiltonian = [0, 1, 2, 0]")).line(), 3);
    EXPECT_EQ(error_of(replace_line(kMinimal, "hamiltonian = [0, 1, 1, 0]", "hamiltonian = [0, 1, 1]")).line(), 3);
    EXPECT_EQ(error_of(replace_line(kMinimal, "mode1 =", "mode2 =")).line(), 10);
    EXPECT_EQ(error_of(std::string(kMinimal) + "tier = 4\n").line(), 14);
    EXPECT_EQ(error_of(replace_line(kMinimal, "dim = 2", "dim 2")).line(), 2);
    EXPECT_THROW(parse_config_string("[solver]\ntier = 2\n"), ConfigError);
}

TEST(Config, SweepNeedsKnownReservoirs) {
    const std::string text = std::string(kMinimal) + "\n[sweep]\nreference = hot\nscaled = cold\nratios = [1]\n";
    const auto e = error_of(text);
    EXPECT_NE(e.field().find("sweep"), std::string::npos);
}

TEST(Config, ReservoirSpecsFollowSweep) {
    const RunConfig p = table1_preset();
    const auto specs = p.reservoir_specs(2.0);
    ASSERT_EQ(specs.size(), 2u);
    EXPECT_DOUBLE_EQ(specs[0].temperature(), 5.0);
    EXPECT_DOUBLE_EQ(specs[1].temperature(), 10.0);
    EXPECT_THROW(preset("nope"), std::invalid_argument);
}

TEST(Config, LoadMissingFile) { EXPECT_THROW(load_config("/nonexistent/qheat.cfg"), std::runtime_error); }
