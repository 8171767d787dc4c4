#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace qheat;

namespace {

RunConfig small_sweep() {
    RunConfig c = table1_preset();
    c.solver.tier = 2;
    c.solver.tier_sweep = false;
    c.sweep.ratios = {0.5, 1.0};
    return c;
}

}  // namespace

TEST(Experiment, OperatingPointsFollowSweep) {
    const auto pts = operating_points(small_sweep());
    ASSERT_EQ(pts.size(), 2u);
    EXPECT_FALSE(pts[0].equilibrium());
    EXPECT_TRUE(pts[1].equilibrium());
    EXPECT_DOUBLE_EQ(pts[0].reservoirs[1].temperature(), 2.5);
    EXPECT_EQ(operating_points(test::two_site(5.0, 1.0, 2)).size(), 1u);
}

TEST(Experiment, CurrentTableColumns) {
    RunConfig c = small_sweep();
    c.sweep.ratios = {0.5};
    const CsvTable t = run_current(c, {CurrentMethod::direct});
    const std::vector<std::string> head{"ratio[1]", "T_L[V]", "T_R[V]", "reservoir", "method",
                                        "tier", "current[V^2]", "imag_residue[1]", "refinement_change[1]",
                                        "kernel_tail[1]"};
    EXPECT_EQ(t.header(), head);
    ASSERT_EQ(t.size(), 2u);
    EXPECT_EQ(t.rows()[0][3], "L");
    EXPECT_EQ(t.rows()[0][4], "direct");
    EXPECT_THROW(run_current(c, {}), std::invalid_argument);
}

TEST(Experiment, SteadyTablesAreByteStable) {
    RunConfig c = small_sweep();
    c.solver.tier_sweep = true;
    auto text = [&] {
        const auto t = run_steady(c);
        std::ostringstream o;
        t.state.write(o);
        t.bath.write(o);
        t.tiers.write(o);
        return o.str();
    };
    const std::string a = text();
    EXPECT_EQ(a, text());
    EXPECT_NE(a.find("drift[1]"), std::string::npos);
}

TEST(Experiment, SpectraTablesAndSumRule) {
    RunConfig c = small_sweep();
    c.sweep.ratios = {1.0};
    c.grids.d_omega = 0.05;
    const auto tables = run_spectra(c, {SpectrumKind::c, SpectrumKind::chi_cross});
    ASSERT_EQ(tables.size(), 5u);  // C plus both orderings per reservoir
    EXPECT_EQ(tables[0].name, "C_ratio1.csv");
    EXPECT_EQ(tables[0].table.header()[0], "omega[V]");
    EXPECT_EQ(tables[0].table.header()[1], "C_11_re[1/V]");
    std::ostringstream o;
    tables[0].table.write(o);
    EXPECT_NE(o.str().find("# sum_rule 11"), std::string::npos);
}

TEST(Experiment, SpectrumKinds) {
    EXPECT_EQ(parse_spectrum_kind("chi_bathbath"), SpectrumKind::chi_bathbath);
    EXPECT_THROW(parse_spectrum_kind("X"), std::invalid_argument);
}

TEST(Experiment, AcceptanceOraclesPass) {
    for (const auto& c : oracle_criteria()) EXPECT_TRUE(c.passed) << c.name << ": " << c.detail;
}
