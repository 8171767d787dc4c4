#pragma once

// Entangled system-bath response functions and heat currents.
//
//   chi^{aS}(w) = -phi~^a(w) chi^SS(w)          chi^{Sa}(w) = -chi^SS(w) phi~^a(w)
//   chi^{aa'}(w) = phi~^a chi^SS phi~^a' + delta_aa' phi~^a
//   <F_au> = -sum_v eta^a_uv <Q_v>
//
// Heat current out of reservoir a (J_a > 0 when heat flows into the system):
//
//   indirect_freq: J_a = (2/pi) sum_uv int dw w n_a(w) J^a_uv(w) C_vu(w)
//   indirect_time: J_a = -2 Re sum_uv int_0^inf dt d/dt phi^{a;+}_uv(t) <Q_v(0) Q_u(t)>
//   direct:        J_a = Re sum_{k in a} (-gamma_k) tr(Q_u(k) rho_k^(1))

#include <cmath>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "qheat/spectra.hpp"

namespace qheat {

enum class ResponseSide { bath_first, system_first };

class GridMismatchError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

// Samples of `s` at the requested frequencies (all of s when `omega` is empty).
inline Spectrum restrict_to(const Spectrum& s, std::span<const double> omega) {
    if (omega.empty()) return s;
    Spectrum out;
    out.zero_frequency_weight = s.zero_frequency_weight;
    std::size_t j = 0;
    for (double w : omega) {
        while (j < s.omega.size() && s.omega[j] < w - 1e-12 * std::max(1.0, std::abs(w))) ++j;
        if (j == s.omega.size() || std::abs(s.omega[j] - w) > 1e-12 * std::max(1.0, std::abs(w)))
            throw GridMismatchError("frequency " + std::to_string(w) + " is not on the response grid");
        out.omega.push_back(s.omega[j]);
        out.values.push_back(s.values[j]);
    }
    return out;
}

}  // namespace detail

inline Spectrum chi_cross_spectrum(const Spectrum& chi_ss, const ReservoirSpec& r, ResponseSide side,
                                   std::span<const double> omega = {}) {
    chi_ss.validate();
    Spectrum out = detail::restrict_to(chi_ss, omega);
    out.zero_frequency_weight.resize(0, 0);
    const auto n = static_cast<std::size_t>(chi_ss.rows());
    for (std::size_t k = 0; k < out.size(); ++k) {
        const CMatrix phi = phi_tilde_matrix(r, n, out.omega[k]);
        out.values[k] = side == ResponseSide::bath_first ? CMatrix(-phi * out.values[k]) : CMatrix(-out.values[k] * phi);
    }
    return out;
}

inline Spectrum chi_bath_bath_spectrum(const Spectrum& chi_ss, const ReservoirSpec& a, const ReservoirSpec& b,
                                       std::span<const double> omega = {}) {
    chi_ss.validate();
    Spectrum out = detail::restrict_to(chi_ss, omega);
    out.zero_frequency_weight.resize(0, 0);
    const auto n = static_cast<std::size_t>(chi_ss.rows());
    const bool same = a.label == b.label;
    for (std::size_t k = 0; k < out.size(); ++k) {
        const CMatrix pa = phi_tilde_matrix(a, n, out.omega[k]);
        const CMatrix pb = phi_tilde_matrix(b, n, out.omega[k]);
        CMatrix v = pa * out.values[k] * pb;
        if (same) v += pa;
        out.values[k] = v;
    }
    return out;
}

struct ExpectationRelationRow {
    std::string reservoir;
    std::size_t mode = 0;
    cplx first_tier;   // sum of first-tier ADO traces
    double relation;   // -sum_v eta_uv <Q_v>
    double gap;        // |first_tier - relation| / |relation| (absolute if relation = 0)
};

inline std::vector<ExpectationRelationRow> expectation_relation_check(const HierarchyModel& m, const HierarchyState& ss,
                                                                      std::span<const ReservoirSpec> reservoirs) {
    const auto first = channel_first_tier(m, ss);
    const std::size_t n = m.system().modes.size();
    std::vector<double> q(n);
    for (std::size_t v = 0; v < n; ++v) q[v] = expectation(ss, m.system().modes[v]).real();
    std::vector<ExpectationRelationRow> out;
    for (const auto& r : reservoirs) {
        const RMatrix eta = eta_matrix(r, n);
        for (const auto& c : r.couplings) {
            ExpectationRelationRow row{r.label, c.mode, bath_mode_expectation(m, first, r.label, c.mode), 0.0, 0.0};
            for (std::size_t v = 0; v < n; ++v)
                row.relation -= eta(static_cast<Eigen::Index>(c.mode), static_cast<Eigen::Index>(v)) * q[v];
            const double diff = std::abs(row.first_tier - row.relation);
            row.gap = row.relation != 0.0 ? diff / std::abs(row.relation) : diff;
            out.push_back(row);
        }
    }
    return out;
}

enum class CurrentMethod { direct, indirect_freq, indirect_time };

inline const char* to_string(CurrentMethod m) {
    switch (m) {
        case CurrentMethod::direct: return "direct";
        case CurrentMethod::indirect_freq: return "indirect_freq";
        case CurrentMethod::indirect_time: return "indirect_time";
    }
    return "?";
}

inline CurrentMethod parse_current_method(std::string_view s) {
    if (s == "direct") return CurrentMethod::direct;
    if (s == "indirect_freq") return CurrentMethod::indirect_freq;
    if (s == "indirect_time") return CurrentMethod::indirect_time;
    throw std::invalid_argument("unknown current method '" + std::string(s) +
                                "' (expected direct, indirect_freq or indirect_time)");
}

struct HeatCurrentReport {
    std::string reservoir;
    double value = 0.0;
    CurrentMethod method = CurrentMethod::direct;
    std::map<std::string, double> diagnostics;
    std::size_t tier = 0;
};

class UnresolvedQuadratureError : public NumericalError {
  public:
    using NumericalError::NumericalError;
};

struct IndirectCurrentOptions {
    double refinement_tol = 5e-3;  // allowed change vs the 2 dw subsample, relative to max(|J|, 1e-3)
    double imag_tol = 1e-6;
};

namespace detail {

inline cplx simpson(std::span<const cplx> f, double h) {
    if (f.size() < 3 || f.size() % 2 == 0) throw std::invalid_argument("simpson: need an odd number (>= 3) of samples");
    cplx s = f.front() + f.back();
    for (std::size_t i = 1; i + 1 < f.size(); ++i) s += (i % 2 ? 4.0 : 2.0) * f[i];
    return s * h / 3.0;
}

}  // namespace detail

// Composite Simpson on a uniform grid whose interval count is a multiple of 4,
// so the 2 dw subsample serves as the refinement check.
inline HeatCurrentReport heat_current_indirect(const Spectrum& c, const ReservoirSpec& r,
                                               const IndirectCurrentOptions& opt = {}) {
    c.validate();
    const std::size_t n = c.size();
    if (n < 5 || (n - 1) % 4 != 0)
        throw std::invalid_argument("heat_current_indirect: grid needs 4k+1 points (got " + std::to_string(n) + ")");
    const double h = (c.omega.back() - c.omega.front()) / static_cast<double>(n - 1);
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs(c.omega[i] - c.omega[i - 1] - h) > 1e-9 * h)
            throw std::invalid_argument("heat_current_indirect: grid must be uniform");
    std::vector<cplx> f(n, cplx{});
    for (std::size_t i = 0; i < n; ++i) {
        const double w = c.omega[i];
        for (const auto& mc : r.couplings) {
            const auto u = static_cast<Eigen::Index>(mc.mode);
            if (u >= c.rows()) throw std::invalid_argument("heat_current_indirect: spectrum lacks mode " + std::to_string(mc.mode + 1));
            f[i] += omega_bose(r.beta, w) * spectral_density(mc.kernel, w) * c.values[i](u, u);
        }
        f[i] *= 2.0 / std::numbers::pi;
    }
    const cplx fine = detail::simpson(f, h);
    std::vector<cplx> half;
    for (std::size_t i = 0; i < n; i += 2) half.push_back(f[i]);
    const cplx coarse = detail::simpson(half, 2.0 * h);

    HeatCurrentReport rep{r.label, fine.real(), CurrentMethod::indirect_freq, {}, 0};
    const double scale = std::max(std::abs(fine.real()), 1e-3);
    rep.diagnostics["refinement_change"] = std::abs(fine.real() - coarse.real()) / scale;
    rep.diagnostics["imag_residue"] = std::abs(fine.imag());
    if (rep.diagnostics["refinement_change"] > opt.refinement_tol)
        throw UnresolvedQuadratureError("heat_current_indirect: halving the resolution changes J_" + r.label + " by " +
                                        std::to_string(100.0 * rep.diagnostics["refinement_change"]) +
                                        "%; refine the frequency grid");
    if (rep.diagnostics["imag_residue"] > opt.imag_tol)
        throw NumericalError("heat_current_indirect: imaginary residue " + std::to_string(std::abs(fine.imag())) +
                             " exceeds tolerance");
    return rep;
}

struct TimeCurrentOptions {
    std::size_t n_pade = 16;  // Bose poles of phi^+ (independent of the hierarchy)
    BoseScheme scheme = BoseScheme::pade;
    double decay_tol = 1e-6;
};

namespace detail {

// int_0^h e^{-r x} dx and int_0^h x e^{-r x} dx.
inline std::pair<cplx, cplx> exp_panel_moments(cplx r, double h) {
    const cplx x = r * h;
    if (std::abs(x) < 0.1) {
        cplx e0 = 0.0, e1 = 0.0, term = 1.0;  // term = (-x)^k / k!
        for (int k = 0; k < 14; ++k) {
            e0 += term / static_cast<double>(k + 1);
            e1 += term / static_cast<double>((k + 1) * (k + 2));
            term *= -x / static_cast<double>(k + 1);
        }
        return {h * e0, h * h * e1};
    }
    const cplx ex = std::exp(-x);
    return {(1.0 - ex) / r, (1.0 - ex - x * ex) / (r * r)};
}

}  // namespace detail

// `s` holds connected S_vu(t) = <Q_v(t) Q_u(0)> with its asymptote, as
// produced by correlation_trajectories with the left side. The correlation is
// taken piecewise linear between samples and each exponential of d/dt phi^+ is
// integrated exactly against it.
inline HeatCurrentReport heat_current_timedomain(const TimeSeries& s, const ReservoirSpec& r,
                                                 const TimeCurrentOptions& opt = {}) {
    s.validate();
    const std::size_t n = s.size();
    const double h = s.dt;
    const double horizon = h * static_cast<double>(n - 1);
    cplx total = 0.0;
    double tail = 0.0, head = 0.0;
    for (const auto& mc : r.couplings) {
        const auto u = static_cast<Eigen::Index>(mc.mode);
        if (u >= s.rows()) throw std::invalid_argument("heat_current_timedomain: series lacks mode " + std::to_string(mc.mode + 1));
        const ExpSeries phi = phi_sigma_series(mc.kernel, r.beta, Sigma::plus, opt.n_pade, opt.scheme);
        tail = std::max(tail, std::abs(phi.derivative(horizon)));
        head = std::max(head, std::abs(phi.derivative(0.0)));
        const cplx asym = s.asymptote.size() ? std::conj(s.asymptote(u, u)) : cplx{};
        for (const auto& term : phi.terms) {
            const cplx rate = term.rate;
            const cplx weight = -rate * term.amplitude;  // d/dt of a e^{-rt}
            const auto [e0, e1] = detail::exp_panel_moments(rate, h);
            const cplx step = std::exp(-rate * h);
            cplx decay = 1.0, integral = 0.0;
            for (std::size_t i = 0; i + 1 < n; ++i) {
                const cplx a = std::conj(s.values[i](u, u));
                const cplx b = std::conj(s.values[i + 1](u, u));
                integral += decay * (a * e0 + (b - a) / h * e1);
                decay *= step;
            }
            integral += asym / rate;
            total += weight * integral;
        }
    }
    if (head > 0.0 && tail > opt.decay_tol * head)
        throw InsufficientDecayError("heat_current_timedomain: kernel derivative not decayed at t = " +
                                     std::to_string(horizon) + "; extend the horizon");
    HeatCurrentReport rep{r.label, -2.0 * total.real(), CurrentMethod::indirect_time, {}, 0};
    rep.diagnostics["kernel_tail"] = head > 0.0 ? tail / head : 0.0;
    rep.diagnostics["n_pade"] = static_cast<double>(opt.n_pade);
    return rep;
}

struct DirectCurrentOptions {
    double imag_tol = 1e-6;  // relative to max(|J|, 1e-3)
};

inline HeatCurrentReport heat_current_direct(const HierarchyModel& m, const std::vector<CMatrix>& first_tier,
                                             const std::string& reservoir, const DirectCurrentOptions& opt = {}) {
    cplx sum = 0.0;
    for (std::size_t c = 0; c < m.channels().size(); ++c) {
        const auto& ch = m.channels()[c];
        if (ch.reservoir != reservoir) continue;
        sum += -ch.rate * (m.system().modes[ch.mode] * first_tier[c]).trace();
    }
    HeatCurrentReport rep{reservoir, sum.real(), CurrentMethod::direct, {}, m.tier()};
    const double scale = std::max(std::abs(sum.real()), 1e-3);
    rep.diagnostics["imag_residue"] = std::abs(sum.imag()) / scale;
    if (rep.diagnostics["imag_residue"] > opt.imag_tol)
        throw NumericalError("heat_current_direct: discarded imaginary part " + std::to_string(sum.imag()) +
                             " of J_" + reservoir + " exceeds tolerance");
    return rep;
}

inline HeatCurrentReport heat_current_direct(const HierarchyModel& m, const HierarchyState& ss,
                                             const std::string& reservoir, const DirectCurrentOptions& opt = {}) {
    return heat_current_direct(m, channel_first_tier(m, ss), reservoir, opt);
}

}  // namespace qheat
