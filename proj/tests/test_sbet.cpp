#include <cmath>

#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace qheat;

namespace {

struct Point {
    RunConfig config;
    std::vector<ReservoirSpec> specs;
    HierarchyModel model;
    HierarchyState ss;
    std::vector<CMatrix> first;
    TimeSeries corr;
    Spectrum c;

    Point(double t_left, double t_right)
        : config(test::two_site(t_left, t_right, 3, true)),
          specs(config.reservoir_specs()),
          model(test::model_of(config)),
          ss(steady_state(model, HierarchyState::maximally_mixed(model))),
          first(channel_first_tier(model, ss)),
          corr(correlation_trajectories(model, ss, CorrelationOptions{})),
          c(c_spectrum(corr, uniform_grid(-20.0, 20.0, 0.005))) {}
};

const Point& hot_left() {
    static const Point p(5.0, 2.5);
    return p;
}

const Point& balanced() {
    static const Point p(5.0, 5.0);
    return p;
}

}  // namespace

TEST(Currents, HeatFlowsOutOfTheHotterBath) {
    const auto& p = hot_left();
    EXPECT_GT(heat_current_direct(p.model, p.first, "L").value, 1e-3);
    EXPECT_LT(heat_current_direct(p.model, p.first, "R").value, -1e-3);
}

TEST(Currents, DirectCurrentIsConserved) {
    const auto& p = hot_left();
    const double jl = heat_current_direct(p.model, p.first, "L").value;
    const double jr = heat_current_direct(p.model, p.first, "R").value;
    EXPECT_LT(std::abs(jl + jr), 1e-4);
}

TEST(Currents, EquilibriumCurrentsVanish) {
    const auto& p = balanced();
    for (const auto& r : p.specs) {
        EXPECT_LT(std::abs(heat_current_direct(p.model, p.first, r.label).value), 1e-5);
        EXPECT_LT(std::abs(heat_current_indirect(p.c, r).value), 1e-5);
        EXPECT_LT(std::abs(heat_current_timedomain(p.corr, r).value), 1e-5);
    }
}

TEST(Currents, FrequencyAndTimeRoutesAgree) {
    const auto& p = hot_left();
    for (const auto& r : p.specs) {
        const double jf = heat_current_indirect(p.c, r).value;
        const double jt = heat_current_timedomain(p.corr, r).value;
        EXPECT_LT(std::abs(jf - jt) / std::abs(jf), 5e-3) << r.label;
    }
}

TEST(Currents, IndirectTracksDirect) {
    const auto& p = hot_left();
    for (const auto& r : p.specs) {
        const double jd = heat_current_direct(p.model, p.first, r.label).value;
        const double jf = heat_current_indirect(p.c, r).value;
        EXPECT_LT(std::abs(jd - jf) / std::abs(jd), 0.05) << r.label;
    }
}

TEST(Currents, FirstTierExpectationRelation) {
    for (const Point* p : {&hot_left(), &balanced()})
        for (const auto& row : expectation_relation_check(p->model, p->ss, p->specs))
            EXPECT_LT(row.gap, 1e-8) << row.reservoir << " mode " << row.mode + 1;
}

TEST(Currents, IndirectNeedsRefinableGrid) {
    const auto& p = hot_left();
    Spectrum s = p.c;
    s.omega.pop_back();
    s.values.pop_back();
    EXPECT_THROW(heat_current_indirect(s, p.specs[0]), std::invalid_argument);
    const Spectrum coarse = c_spectrum(p.corr, uniform_grid(-2.0, 2.0, 0.5));
    EXPECT_THROW(heat_current_indirect(coarse, p.specs[0]), UnresolvedQuadratureError);
}

TEST(Currents, TimeRouteNeedsDecayedKernel) {
    const auto& p = hot_left();
    TimeSeries shortened = p.corr;
    shortened.values.resize(50);
    EXPECT_THROW(heat_current_timedomain(shortened, p.specs[0]), InsufficientDecayError);
}

TEST(Currents, MethodNames) {
    for (auto m : {CurrentMethod::direct, CurrentMethod::indirect_freq, CurrentMethod::indirect_time})
        EXPECT_EQ(parse_current_method(to_string(m)), m);
    EXPECT_THROW(parse_current_method("bogus"), std::invalid_argument);
}

TEST(Response, CrossSpectrumFromSystemSusceptibility) {
    const auto& p = hot_left();
    const Spectrum chi = chi_ss_spectrum(p.corr, uniform_grid(-2.0, 2.0, 0.5));
    const Spectrum cross = chi_cross_spectrum(chi, p.specs[0], ResponseSide::bath_first);
    const CMatrix phi = phi_tilde_matrix(p.specs[0], 2, chi.omega[3]);
    EXPECT_LT(max_abs(cross.values[3] + phi * chi.values[3]), 1e-14);
    const std::vector<double> sub{-1.0, 1.0};
    EXPECT_EQ(chi_cross_spectrum(chi, p.specs[0], ResponseSide::system_first, sub).size(), 2u);
    const std::vector<double> off{0.3};
    EXPECT_THROW(chi_cross_spectrum(chi, p.specs[0], ResponseSide::bath_first, off), GridMismatchError);
}

TEST(Response, BathBathSpectrumAddsBareResponseOnDiagonal) {
    const auto& p = hot_left();
    const Spectrum chi = chi_ss_spectrum(p.corr, uniform_grid(-1.0, 1.0, 0.5));
    const Spectrum same = chi_bath_bath_spectrum(chi, p.specs[0], p.specs[0]);
    const Spectrum cross = chi_bath_bath_spectrum(chi, p.specs[0], p.specs[1]);
    const CMatrix pa = phi_tilde_matrix(p.specs[0], 2, 0.5);
    const CMatrix pb = phi_tilde_matrix(p.specs[1], 2, 0.5);
    EXPECT_LT(max_abs(same.values[3] - pa * chi.values[3] * pa - pa), 1e-14);
    EXPECT_LT(max_abs(cross.values[3] - pa * chi.values[3] * pb), 1e-14);
}
