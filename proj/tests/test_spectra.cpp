#include <cmath>

#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace qheat;

namespace {

TimeSeries exponential_series(cplx gamma, double dt, double t_max) {
    TimeSeries ts;
    ts.dt = dt;
    const auto n = static_cast<std::size_t>(std::llround(t_max / dt));
    for (std::size_t i = 0; i <= n; ++i) ts.values.push_back(CMatrix::Constant(1, 1, std::exp(-gamma * ts.time(i))));
    return ts;
}

// Equilibrium correlations of the two-site model at a low tier.
struct Equilibrium {
    RunConfig config = test::two_site(5.0, 5.0, 3, true);
    HierarchyModel model = test::model_of(config);
    HierarchyState ss = steady_state(model, HierarchyState::maximally_mixed(model));
    TimeSeries corr = correlation_trajectories(model, ss, CorrelationOptions{});
};

const Equilibrium& equilibrium() {
    static const Equilibrium e;
    return e;
}

}  // namespace

TEST(Spectra, UniformGrid) {
    const auto g = uniform_grid(-1.0, 1.0, 0.25);
    ASSERT_EQ(g.size(), 9u);
    EXPECT_DOUBLE_EQ(g.front(), -1.0);
    EXPECT_DOUBLE_EQ(g[4], 0.0);
    EXPECT_DOUBLE_EQ(g.back(), 1.0);
    EXPECT_THROW(uniform_grid(1.0, -1.0, 0.1), std::invalid_argument);
}

TEST(Spectra, HalfFourierOfExponential) {
    for (cplx gamma : {cplx(1.0, 0.0), cplx(0.5, 2.0), cplx(3.0, -1.0)}) {
        const Spectrum s = half_fourier(exponential_series(gamma, 0.01, 60.0), uniform_grid(-20.0, 20.0, 0.5));
        for (std::size_t k = 0; k < s.size(); ++k)
            EXPECT_LT(std::abs(s.values[k](0, 0) - 1.0 / (gamma - I_unit * s.omega[k])), 1e-6)
                << "gamma " << gamma << " w " << s.omega[k];
    }
}

TEST(Spectra, HalfFourierRequiresDecay) {
    const auto ts = exponential_series(cplx(0.1, 0.0), 0.01, 10.0);
    EXPECT_THROW(half_fourier(ts, {0.0}), InsufficientDecayError);
    HalfFourierOptions o;
    o.hann_window = true;
    EXPECT_NO_THROW(half_fourier(ts, {0.0}, o));
}

TEST(Spectra, CorrelationStartsAtStaticCovariance) {
    const auto& e = equilibrium();
    const auto& q = e.config.modes;
    for (std::size_t v = 0; v < 2; ++v)
        for (std::size_t u = 0; u < 2; ++u) {
            const cplx direct = expectation(e.ss, q[v] * q[u]);
            const cplx full = e.corr.full(0)(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(u));
            EXPECT_NEAR(std::abs(full - direct), 0.0, 1e-12);
        }
    EXPECT_LT(max_abs(e.corr.values.back()), 1e-6);  // connected part has decayed
}

TEST(Spectra, RightSideIsConjugateOfLeft) {
    const auto& e = equilibrium();
    CorrelationOptions o;
    o.t_max = 2.0;
    o.side = OperatorSide::right;
    const TimeSeries right = correlation_trajectories(e.model, e.ss, o);
    for (std::size_t i = 0; i < right.size(); i += 50)
        EXPECT_LT(max_abs(right.full(i) - e.corr.full(i).conjugate()), 1e-12);
}

TEST(Spectra, CorrelationSpectrumIsHermitianAndPositive) {
    const auto& e = equilibrium();
    const Spectrum c = c_spectrum(e.corr, uniform_grid(-10.0, 10.0, 0.5));
    for (std::size_t k = 0; k < c.size(); ++k) {
        EXPECT_LT(max_abs(c.values[k] - c.values[k].adjoint()), 1e-10);
        Eigen::SelfAdjointEigenSolver<CMatrix> es(c.values[k]);
        EXPECT_GT(es.eigenvalues().minCoeff(), -1e-6) << "w " << c.omega[k];
    }
}

TEST(Spectra, DetailedBalanceAtEquilibrium) {
    const auto& e = equilibrium();
    std::vector<double> band;
    for (double w : uniform_grid(-10.0, 10.0, 0.1))
        if (std::abs(w) >= 0.1 - 1e-12) band.push_back(w);
    const Spectrum k = commutator_spectrum(e.corr, band);
    const Spectrum c = c_spectrum(e.corr, band);
    const double beta = 0.2;
    for (Eigen::Index v = 0; v < 2; ++v)
        for (Eigen::Index u = 0; u < 2; ++u) {
            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < band.size(); ++i) {
                const cplx ref = 2.0 * (-std::expm1(-beta * band[i])) * c.values[i](v, u);
                num = std::max(num, std::abs(k.values[i](v, u) - ref));
                den = std::max(den, std::abs(ref));
            }
            EXPECT_LT(num / den, 1e-2) << "pair " << v << u;
        }
}

TEST(Spectra, ChiSeriesIsCommutator) {
    const auto& e = equilibrium();
    const TimeSeries chi = chi_ss_series(e.corr);
    EXPECT_LT(max_abs(chi.values.front()), 1e-12);  // [Q_v, Q_u] = 0 for diagonal projectors
    for (std::size_t i = 0; i < chi.size(); i += 100) {
        const CMatrix s = e.corr.full(i);
        EXPECT_LT(max_abs(chi.values[i] - I_unit * (s - s.conjugate())), 1e-12);
    }
}

TEST(Spectra, StaticSusceptibilityIsReal) {
    const auto& e = equilibrium();
    const Spectrum chi = chi_ss_spectrum(e.corr, {0.0});
    EXPECT_LT(chi.values[0].imag().cwiseAbs().maxCoeff(), 1e-6);
}
