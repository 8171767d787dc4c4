#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "qheat/acceptance.hpp"
#include "qheat/bath.hpp"

using namespace qheat;

namespace {
const BrownianMode kMode{0.2, 2.0, 10.0};
}

TEST(Bath, ResponseTransformAtZeroIsCouplingStrength) {
    EXPECT_NEAR(phi_tilde(kMode, 0.0).real(), kMode.eta, 1e-14);
    EXPECT_NEAR(phi_tilde(kMode, 0.0).imag(), 0.0, 1e-14);
}

TEST(Bath, SpectralDensityIsOddAndPositive) {
    for (double w : {0.1, 0.7, 2.0, 5.0, 30.0}) {
        EXPECT_GT(spectral_density(kMode, w), 0.0);
        EXPECT_NEAR(spectral_density(kMode, -w), -spectral_density(kMode, w), 1e-15);
    }
    EXPECT_EQ(spectral_density(kMode, 0.0), 0.0);
}

TEST(Bath, ResponseKernelIntegratesToCouplingStrength) {
    const ExpSeries s = response_kernel_series(kMode);
    cplx integral = 0.0;
    for (const auto& k : s.terms) integral += k.amplitude / k.rate;
    EXPECT_NEAR(integral.real(), kMode.eta, 1e-13);
    EXPECT_NEAR(integral.imag(), 0.0, 1e-13);
    EXPECT_NEAR(s(0.0).real(), 0.0, 1e-13);  // phi(0) = 0 for a Brownian oscillator
}

TEST(Bath, FluctuationDissipationImaginaryPart) {
    // -2 Im c(t) is the response kernel at any temperature.
    for (double beta : {0.1, 0.2, 1.0}) {
        const ExpSeries c = thermal_correlation_series(kMode, beta, 4);
        for (double t = 0.0; t <= 5.0; t += 0.25) EXPECT_NEAR(-2.0 * c(t).imag(), response_kernel(kMode, t), 1e-12);
    }
}

TEST(Bath, PadePolesApproximateBoseFunction) {
    const auto p = pade_poles(8);
    ASSERT_EQ(p.size(), 8u);
    for (std::size_t j = 1; j < p.size(); ++j) EXPECT_GT(p.xi[j], p.xi[j - 1]);
    for (double x : {-4.0, -1.0, 0.3, 2.0, 6.0}) EXPECT_NEAR(p.approximate(x), 1.0 / (-std::expm1(-x)), 1e-10);
}

TEST(Bath, PadeBeatsMatsubaraAtEqualPoleCount) {
    const double x = 8.0;
    const double exact = 1.0 / (-std::expm1(-x));
    EXPECT_LT(std::abs(pade_poles(4).approximate(x) - exact), std::abs(matsubara_poles(4).approximate(x) - exact));
}

TEST(Bath, MatsubaraPolesAreBosonicFrequencies) {
    const auto p = matsubara_poles(3);
    for (std::size_t j = 0; j < 3; ++j) {
        EXPECT_NEAR(p.xi[j], 2.0 * std::numbers::pi * static_cast<double>(j + 1), 1e-12);
        EXPECT_NEAR(p.eta[j], 1.0, 1e-15);
    }
}

TEST(Bath, CorrelationSeriesMatchesQuadrature) {
    const double beta = 0.2;
    const ExpSeries s = thermal_correlation_series(kMode, beta, 8);
    for (double t : {0.0, 0.5, 2.0, 7.0}) {
        const cplx ref = detail::correlation_quadrature(kMode, beta, t);
        EXPECT_LT(std::abs(s(t) - ref), 1e-5 * std::abs(s(0.0))) << "t = " << t;
    }
}

TEST(Bath, BackwardAmplitudesReproduceConjugate) {
    const ExpSeries s = thermal_correlation_series(kMode, 0.2, 2);
    const auto back = backward_amplitudes(s);
    for (double t : {0.0, 0.3, 1.7}) {
        cplx sum = 0.0;
        for (std::size_t k = 0; k < s.terms.size(); ++k) sum += back[k] * std::exp(-s.terms[k].rate * t);
        EXPECT_NEAR(std::abs(sum - std::conj(s(t))), 0.0, 1e-12);
    }
}

TEST(Bath, PhiSigmaRelations) {
    const double beta = 0.2;
    for (double t : {0.0, 0.4, 2.5}) {
        const cplx c = thermal_correlation_series(kMode, beta, 8)(t);
        EXPECT_NEAR(std::abs(phi_sigma(kMode, beta, t, Sigma::plus, 8) - (-I_unit * std::conj(c))), 0.0, 1e-13);
        EXPECT_NEAR(std::abs(phi_sigma(kMode, beta, t, Sigma::minus, 8) - I_unit * c), 0.0, 1e-13);
    }
    EXPECT_THROW(phi_sigma(kMode, beta, -1.0, Sigma::plus), std::invalid_argument);
}

TEST(Bath, BoseOccupation) {
    EXPECT_NEAR(bose_occupation(1.0, 1.0), 1.0 / (std::exp(1.0) - 1.0), 1e-15);
    EXPECT_THROW(bose_occupation(1.0, 0.0), std::domain_error);
    EXPECT_NEAR(omega_bose(0.5, 0.0), 2.0, 1e-15);
    EXPECT_NEAR(omega_bose(0.5, 1e-9), 2.0, 1e-8);
}

TEST(Bath, BosePoleOnSpectralPoleIsRejected) {
    const double nu = 5.0 - std::sqrt(21.0);  // real pole rate of the overdamped mode
    EXPECT_THROW(thermal_correlation_series(kMode, 2.0 * std::numbers::pi / nu, 2, BoseScheme::matsubara),
                 PoleCollisionError);
}

TEST(Bath, InvalidModeRejected) {
    EXPECT_THROW(thermal_correlation_series(BrownianMode{-0.1, 2.0, 10.0}, 1.0, 2), std::invalid_argument);
    EXPECT_THROW(thermal_correlation_series(kMode, 0.0, 2), std::invalid_argument);
}

TEST(Bath, MatricesOverModes) {
    ReservoirSpec r{"L", 0.2, {{0, {0.2, 2.0, 10.0}}, {1, {0.4, 2.0, 10.0}}}};
    const RMatrix eta = eta_matrix(r, 2);
    EXPECT_NEAR(eta(0, 0), 0.2, 1e-15);
    EXPECT_NEAR(eta(1, 1), 0.4, 1e-15);
    EXPECT_EQ(eta(0, 1), 0.0);
    const CMatrix pt = phi_tilde_matrix(r, 2, 1.3);
    EXPECT_NEAR(std::abs(pt(1, 1) - phi_tilde(BrownianMode{0.4, 2.0, 10.0}, 1.3)), 0.0, 1e-15);
}
