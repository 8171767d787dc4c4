#include <cmath>

#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace qheat;
using test::model_of;
using test::two_site;

namespace {

double binom(std::size_t n, std::size_t k) {
    double r = 1.0;
    for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

}  // namespace

TEST(Hierarchy, AdoCountWithoutCap) {
    for (std::size_t tier : {1u, 2u, 3u}) {
        RunConfig c = two_site(5.0, 5.0, tier);
        c.solver.thermal_tier.reset();
        const auto m = model_of(c);
        const std::size_t k = m.groups().size();
        EXPECT_EQ(m.ado_count(), static_cast<std::size_t>(binom(k + tier, tier))) << "tier " << tier;
    }
}

TEST(Hierarchy, ThermalCapShrinksTable) {
    RunConfig c = two_site(5.0, 2.5, 3);
    c.solver.thermal_tier.reset();
    const auto full = model_of(c);
    c.solver.thermal_tier = 1;
    const auto capped = model_of(c);
    EXPECT_LT(capped.ado_count(), full.ado_count());
    for (std::size_t i = 0; i < capped.ado_count(); ++i) {
        std::size_t thermal = 0;
        const auto occ = capped.table().occupation(i);
        for (std::size_t g = 0; g < capped.groups().size(); ++g)
            if (capped.groups()[g].thermal) thermal += occ[g];
        EXPECT_LE(thermal, 1u);
    }
}

TEST(Hierarchy, FusionGroupsEqualRatesOnOneMode) {
    // Both reservoirs share the spectral poles of each mode, so fusion at least
    // halves the spectral groups.
    RunConfig c = two_site(5.0, 2.5, 2);
    const auto fused = model_of(c, true);
    const auto plain = model_of(c, false);
    EXPECT_LT(fused.groups().size(), plain.groups().size());
    EXPECT_EQ(plain.groups().size(), plain.channels().size());
}

TEST(Hierarchy, FusionLeavesHardTruncatedResultUnchanged) {
    RunConfig c = two_site(5.0, 2.5, 3);
    c.solver.thermal_tier.reset();
    const auto a = model_of(c, true);
    const auto b = model_of(c, false);
    const auto sa = steady_state(a, HierarchyState::maximally_mixed(a));
    const auto sb = steady_state(b, HierarchyState::maximally_mixed(b));
    EXPECT_LT(max_abs(sa.density() - sb.density()), 1e-10);
    EXPECT_NEAR(heat_current_direct(a, sa, "L").value, heat_current_direct(b, sb, "L").value, 1e-10);
}

TEST(Hierarchy, GeneratorPreservesTraceAndHermiticity) {
    const auto m = model_of(two_site(5.0, 2.5, 3));
    CMatrix rho(2, 2);
    rho << 0.7, cplx(0.1, 0.2), cplx(0.1, -0.2), 0.3;
    const auto d = rhs(m, HierarchyState::with_density(m, rho));
    EXPECT_NEAR(std::abs(d.density().trace()), 0.0, 1e-13);
    EXPECT_LT(max_abs(d.density() - d.density().adjoint()), 1e-13);
}

TEST(Hierarchy, ClosedSystemRabiOscillation) {
    SystemSpec sys{CMatrix::Zero(2, 2), {}};
    sys.hamiltonian(0, 1) = sys.hamiltonian(1, 0) = 1.0;
    const auto m = build_hierarchy(sys, {}, HierarchyOptions{});
    EXPECT_EQ(m.ado_count(), 1u);
    CMatrix rho = CMatrix::Zero(2, 2);
    rho(0, 0) = 1.0;
    auto s = HierarchyState::with_density(m, rho);
    propagate_in_place(m, s, 0.005, 600);
    EXPECT_NEAR(s.density()(0, 0).real(), std::pow(std::cos(3.0), 2), 1e-9);
}

TEST(Hierarchy, RejectsBadInput) {
    RunConfig c = two_site(5.0, 5.0, 2);
    SystemSpec bad = c.system();
    bad.hamiltonian(0, 1) = cplx(0.0, 1.0);
    EXPECT_THROW(build_hierarchy(bad, {}, HierarchyOptions{}), std::invalid_argument);
    SystemSpec one_mode = c.system();
    one_mode.modes.pop_back();
    const auto specs = c.reservoir_specs();
    EXPECT_THROW(build_hierarchy(one_mode, make_channels(std::span<const ReservoirSpec>(specs), 2), c.hierarchy_options()),
                 std::invalid_argument);
    HierarchyOptions tiny = c.hierarchy_options();
    tiny.max_ados = 10;
    EXPECT_THROW(build_hierarchy(c.system(), make_channels(std::span<const ReservoirSpec>(specs), 2), tiny),
                 std::length_error);
}

TEST(Dynamics, StableStepBoundIsEnforced) {
    const auto m = model_of(two_site(5.0, 2.5, 2));
    auto s = HierarchyState::maximally_mixed(m);
    EXPECT_THROW(propagate_in_place(m, s, 10.0 / m.stiffness(), 1), std::invalid_argument);
    const double dt = stable_time_step(m, 1.0);
    EXPECT_LE(dt * m.stiffness(), PropagationOptions{}.stability_bound + 1e-12);
}

TEST(Dynamics, DirectAndPropagatedSteadyStatesAgree) {
    const auto m = model_of(two_site(5.0, 2.5, 2));
    const auto direct = steady_state(m, HierarchyState::maximally_mixed(m));
    SteadyStateOptions o;
    o.method = SteadyMethod::propagate;
    o.tol = 1e-9;
    const auto prop = steady_state(m, HierarchyState::maximally_mixed(m), o);
    EXPECT_LT(max_abs(direct.density() - prop.density()), 1e-6);
    EXPECT_LT(residual(m, direct), 1e-10);
    EXPECT_NEAR(direct.density().trace().real(), 1.0, 1e-12);
}

TEST(Dynamics, PropagationHitsHorizonWithoutConvergence) {
    const auto m = model_of(two_site(5.0, 2.5, 2));
    SteadyStateOptions o;
    o.method = SteadyMethod::propagate;
    o.tol = 1e-14;
    o.max_time = 2.0;
    EXPECT_THROW(steady_state(m, HierarchyState::maximally_mixed(m), o), NonConvergenceError);
}

TEST(Dynamics, ThreadedGeneratorMatchesSerial) {
    RunConfig c = two_site(5.0, 2.5, 6);
    c.solver.thermal_tier.reset();
    const auto m = model_of(c);
    ASSERT_GE(m.state_size(), 4096u);
    CVector x = CVector::Random(static_cast<Eigen::Index>(m.state_size()));
    CVector y1(x.size()), y4(x.size());
    detail::apply_generator(m.generator(), x, y1, 1);
    detail::apply_generator(m.generator(), x, y4, 4);
    EXPECT_EQ((y1 - y4).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Dynamics, FirstTierProbesMatchUnfusedAdos) {
    // With hard truncation the probe layer reproduces the per-channel ADOs of
    // the unfused hierarchy.
    RunConfig c = two_site(5.0, 2.5, 3);
    c.solver.thermal_tier.reset();
    const auto fused = model_of(c, true);
    const auto plain = model_of(c, false);
    const auto sf = steady_state(fused, HierarchyState::maximally_mixed(fused));
    const auto sp = steady_state(plain, HierarchyState::maximally_mixed(plain));
    const auto pf = channel_first_tier(fused, sf);
    const auto pp = channel_first_tier(plain, sp);
    ASSERT_EQ(pf.size(), pp.size());
    for (std::size_t k = 0; k < pf.size(); ++k) EXPECT_LT(max_abs(pf[k] - pp[k]), 1e-9) << "channel " << k;
}
