#pragma once

// Brownian-oscillator bath kernels.
//
// Sign convention used throughout the library: the half-line transform is
// f~(w) = int_0^inf dt e^{i w t} f(t), the response kernel is
// phi(t) = i <[F(t), F(0)]>, and the spectral density is J(w) = Im phi~(w) for
// real w. The thermal correlation c(t) = <F(t) F(0)> then satisfies
// phi(t) = -2 Im c(t). Energies are in units of the system coupling V with
// hbar = k_B = 1.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "qheat/bose.hpp"
#include "qheat/linalg.hpp"

namespace qheat {

// phi~(w) = eta Omega^2 / (Omega^2 - w^2 - i w zeta)
struct BrownianMode {
    double eta = 0.0;     // coupling strength, equals phi~(0)
    double omega0 = 1.0;  // oscillator frequency
    double zeta = 1.0;    // damping

    void validate() const {
        if (!(eta >= 0.0) || !std::isfinite(eta))
            throw std::invalid_argument("BrownianMode: eta must be finite and >= 0");
        if (!(omega0 > 0.0) || !std::isfinite(omega0))
            throw std::invalid_argument("BrownianMode: omega0 must be finite and > 0");
        if (!(zeta > 0.0) || !std::isfinite(zeta))
            throw std::invalid_argument("BrownianMode: zeta must be finite and > 0");
        const double disc = zeta * zeta - 4.0 * omega0 * omega0;
        if (std::abs(disc) <= 1e-12 * zeta * zeta)
            throw std::invalid_argument(
                "BrownianMode: critically damped kernel (zeta^2 = 4 Omega^2) has a double pole and is not supported");
    }

    bool overdamped() const noexcept { return zeta * zeta > 4.0 * omega0 * omega0; }

    // Decay rates gamma_-, gamma_+ of the two poles w = -i gamma of phi~ in the
    // lower half-plane. Real for overdamped kernels, a conjugate pair otherwise.
    std::array<cplx, 2> pole_rates() const {
        validate();
        const cplx s = std::sqrt(cplx(zeta * zeta / 4.0 - omega0 * omega0, 0.0));
        return {cplx(zeta / 2.0, 0.0) - s, cplx(zeta / 2.0, 0.0) + s};
    }

    bool operator==(const BrownianMode&) const = default;
};

struct ModeCoupling {
    std::size_t mode = 0;  // index of the system dissipative mode Q_u
    BrownianMode kernel;
    bool operator==(const ModeCoupling&) const = default;
};

struct ReservoirSpec {
    std::string label;
    double beta = 1.0;
    std::vector<ModeCoupling> couplings;

    double temperature() const { return 1.0 / beta; }

    const BrownianMode* kernel_for(std::size_t mode) const {
        for (const auto& c : couplings)
            if (c.mode == mode) return &c.kernel;
        return nullptr;
    }

    void validate(std::size_t n_modes) const {
        if (!(beta > 0.0) || !std::isfinite(beta))
            throw std::invalid_argument("reservoir '" + label + "': beta must be finite and > 0");
        for (std::size_t i = 0; i < couplings.size(); ++i) {
            if (couplings[i].mode >= n_modes)
                throw std::invalid_argument("reservoir '" + label + "': mode index " +
                                            std::to_string(couplings[i].mode + 1) + " out of range");
            for (std::size_t j = 0; j < i; ++j)
                if (couplings[j].mode == couplings[i].mode)
                    throw std::invalid_argument("reservoir '" + label + "': duplicate mode index " +
                                                std::to_string(couplings[i].mode + 1));
            couplings[i].kernel.validate();
        }
    }

    bool operator==(const ReservoirSpec&) const = default;
};

enum class TermOrigin { spectral_pole, thermal_pole };

struct ExpTerm {
    cplx amplitude;
    cplx rate;
    TermOrigin origin = TermOrigin::spectral_pole;
};

// c(t) ~= sum_k a_k e^{-gamma_k t}, t >= 0.
struct ExpSeries {
    std::vector<ExpTerm> terms;
    double remainder = 0.0;

    bool empty() const noexcept { return terms.empty(); }

    cplx operator()(double t) const {
        cplx sum = 0.0;
        for (const auto& k : terms) sum += k.amplitude * std::exp(-k.rate * t);
        return sum;
    }

    cplx derivative(double t) const {
        cplx sum = 0.0;
        for (const auto& k : terms) sum -= k.amplitude * k.rate * std::exp(-k.rate * t);
        return sum;
    }

    ExpSeries conjugate() const {
        ExpSeries out{{}, remainder};
        for (const auto& k : terms) out.terms.push_back({std::conj(k.amplitude), std::conj(k.rate), k.origin});
        return out;
    }

    void validate() const {
        for (const auto& k : terms)
            if (!(k.rate.real() > 0.0)) throw std::invalid_argument("ExpSeries: every rate needs Re(gamma) > 0");
    }
};

// Coefficient of e^{-gamma_k t} in conj(c(t)) for every term k. The series
// must be closed under rate conjugation.
inline std::vector<cplx> backward_amplitudes(const ExpSeries& s, double tol = 1e-12) {
    std::vector<cplx> out(s.terms.size(), cplx{});
    for (std::size_t k = 0; k < s.terms.size(); ++k) {
        bool found = false;
        const cplx target = s.terms[k].rate;
        for (const auto& j : s.terms) {
            if (std::abs(std::conj(j.rate) - target) <= tol * std::max(1.0, std::abs(target))) {
                out[k] += std::conj(j.amplitude);
                found = true;
            }
        }
        if (!found) throw std::invalid_argument("backward_amplitudes: series is not closed under conjugation");
    }
    return out;
}

inline cplx phi_tilde(const BrownianMode& m, cplx omega) {
    const double om2 = m.omega0 * m.omega0;
    return m.eta * om2 / (om2 - omega * omega - I_unit * omega * m.zeta);
}

inline cplx phi_tilde(const BrownianMode& m, double omega) { return phi_tilde(m, cplx(omega, 0.0)); }

inline double spectral_density(const BrownianMode& m, double omega) {
    const double om2 = m.omega0 * m.omega0;
    const double d = om2 - omega * omega;
    return m.eta * om2 * omega * m.zeta / (d * d + omega * omega * m.zeta * m.zeta);
}

// Analytic continuation J(z) = (phi~(z) - phi~(-z)) / 2i.
inline cplx spectral_density(const BrownianMode& m, cplx z) {
    return (phi_tilde(m, z) - phi_tilde(m, -z)) / (2.0 * I_unit);
}

// phi(t) = sum_p r_p e^{-gamma_p t}: the two-pole form of the inverse
// half-line transform of phi~.
inline ExpSeries response_kernel_series(const BrownianMode& m) {
    ExpSeries out;
    if (m.eta == 0.0) return out;
    const auto rates = m.pole_rates();
    const cplx scale = m.eta * m.omega0 * m.omega0 / (rates[1] - rates[0]);
    out.terms.push_back({scale, rates[0], TermOrigin::spectral_pole});
    out.terms.push_back({-scale, rates[1], TermOrigin::spectral_pole});
    return out;
}

inline double response_kernel(const BrownianMode& m, double t) {
    if (t < 0.0) throw std::invalid_argument("response_kernel: t must be >= 0");
    return response_kernel_series(m)(t).real();
}

inline double bose_occupation(double beta, double omega) {
    if (omega == 0.0) throw std::domain_error("bose_occupation: omega = 0 (use the limit omega*n -> 1/beta)");
    return 1.0 / std::expm1(beta * omega);
}

// omega * n(omega), continuous through omega = 0.
inline double omega_bose(double beta, double omega) {
    if (omega == 0.0) return 1.0 / beta;
    return omega / std::expm1(beta * omega);
}

class PoleCollisionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Exponential decomposition of c(t) = (1/pi) int dw e^{-iwt} J(w) / (1 - e^{-beta w}).
// Spectral-density poles are weighted by the exact Bose function; the Bose
// function poles come from the chosen sum-over-poles scheme.
inline ExpSeries thermal_correlation_series(const BrownianMode& m, double beta, std::size_t n_poles,
                                            BoseScheme scheme = BoseScheme::pade) {
    m.validate();
    if (!(beta > 0.0)) throw std::invalid_argument("thermal_correlation_series: beta must be > 0");
    ExpSeries out;
    if (m.eta == 0.0) return out;

    const auto rates = m.pole_rates();
    const double om2 = m.omega0 * m.omega0;
    for (int p = 0; p < 2; ++p) {
        const cplx wp = -I_unit * rates[p];
        const cplx wq = -I_unit * rates[1 - p];
        const cplx residue = -m.eta * om2 / (wp - wq);
        const cplx denom = 1.0 - std::exp(-beta * wp);
        if (std::abs(denom) < 1e-10)
            throw PoleCollisionError("thermal_correlation_series: spectral pole coincides with a Matsubara frequency");
        out.terms.push_back({-residue / denom, rates[p], TermOrigin::spectral_pole});
    }

    const BosePoles poles = bose_poles(scheme, n_poles);
    for (std::size_t j = 0; j < poles.size(); ++j) {
        const double nu = poles.xi[j] / beta;
        const double q = (om2 + nu * nu) * (om2 + nu * nu);
        const double gap = q - nu * nu * m.zeta * m.zeta;
        if (std::abs(gap) <= 1e-10 * q)
            throw PoleCollisionError("thermal_correlation_series: Bose pole " + std::to_string(j + 1) +
                                     " (nu = " + std::to_string(nu) + ") coincides with a spectral-density pole");
        const cplx jz = spectral_density(m, cplx(0.0, -nu));
        const cplx a = -2.0 * I_unit * (poles.eta[j] / beta) * jz;
        out.terms.push_back({a, cplx(nu, 0.0), TermOrigin::thermal_pole});
    }
    return out;
}

enum class Sigma { plus, minus };

// phi^+(t) = -i conj(c(t)), phi^-(t) = i c(t), as exponential series.
inline ExpSeries phi_sigma_series(const BrownianMode& m, double beta, Sigma sigma, std::size_t n_poles,
                                  BoseScheme scheme = BoseScheme::pade) {
    ExpSeries c = thermal_correlation_series(m, beta, n_poles, scheme);
    if (sigma == Sigma::plus) {
        ExpSeries cc = c.conjugate();
        for (auto& k : cc.terms) k.amplitude *= -I_unit;
        return cc;
    }
    for (auto& k : c.terms) k.amplitude *= I_unit;
    return c;
}

inline cplx phi_sigma(const BrownianMode& m, double beta, double t, Sigma sigma, std::size_t n_poles = 16,
                      BoseScheme scheme = BoseScheme::pade) {
    if (t < 0.0) throw std::invalid_argument("phi_sigma: t must be >= 0");
    return phi_sigma_series(m, beta, sigma, n_poles, scheme)(t);
}

// eta_uv = int_0^inf phi_uv(t) dt = phi~_uv(0); diagonal for Brownian modes.
inline RMatrix eta_matrix(const ReservoirSpec& r, std::size_t n_modes) {
    RMatrix out = RMatrix::Zero(static_cast<Eigen::Index>(n_modes), static_cast<Eigen::Index>(n_modes));
    for (const auto& c : r.couplings) {
        if (c.mode >= n_modes) throw std::invalid_argument("eta_matrix: mode index out of range");
        out(static_cast<Eigen::Index>(c.mode), static_cast<Eigen::Index>(c.mode)) = phi_tilde(c.kernel, 0.0).real();
    }
    return out;
}

// Diagonal phi~^alpha(w) over the system dissipative modes.
inline CMatrix phi_tilde_matrix(const ReservoirSpec& r, std::size_t n_modes, double omega) {
    CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(n_modes), static_cast<Eigen::Index>(n_modes));
    for (const auto& c : r.couplings)
        out(static_cast<Eigen::Index>(c.mode), static_cast<Eigen::Index>(c.mode)) = phi_tilde(c.kernel, omega);
    return out;
}

}  // namespace qheat
