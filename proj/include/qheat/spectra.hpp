#pragma once

// Steady-state correlation functions of the system dissipative modes and
// their Fourier transforms.
//
//   S_vu(t) = <Q_v(t) Q_u(0)>       (TimeSeries, stored connected: minus <Q_v><Q_u>)
//   S~(w)  = int_0^inf dt e^{iwt} S(t)
//   C_vu(w) = (1/2) int dt e^{iwt} S_vu(t) = (S~_vu(w) + conj(S~_uv(w))) / 2
//
// The disconnected part <Q_v><Q_u> is carried analytically: it adds the line
// pi <Q_v><Q_u> delta(w) to C, kept as Spectrum::zero_frequency_weight.

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qheat/dynamics.hpp"

namespace qheat {

struct TimeSeries {
    double dt = 0.0;
    std::vector<CMatrix> values;  // values[i](v, u) at t = i dt
    CMatrix asymptote;            // t -> inf limit removed from values (zero if none)

    std::size_t size() const noexcept { return values.size(); }
    double time(std::size_t i) const noexcept { return dt * static_cast<double>(i); }
    Eigen::Index rows() const { return values.empty() ? 0 : values.front().rows(); }
    Eigen::Index cols() const { return values.empty() ? 0 : values.front().cols(); }
    CMatrix full(std::size_t i) const { return asymptote.size() ? CMatrix(values[i] + asymptote) : values[i]; }

    void validate() const {
        if (!(dt > 0.0)) throw std::invalid_argument("TimeSeries: dt must be > 0");
        if (values.size() < 3) throw std::invalid_argument("TimeSeries: need at least 3 samples");
        for (const auto& v : values)
            if (v.rows() != rows() || v.cols() != cols())
                throw std::invalid_argument("TimeSeries: inconsistent sample shapes");
        if (asymptote.size() && (asymptote.rows() != rows() || asymptote.cols() != cols()))
            throw std::invalid_argument("TimeSeries: asymptote shape mismatch");
    }
};

struct Spectrum {
    std::vector<double> omega;
    std::vector<CMatrix> values;
    CMatrix zero_frequency_weight;  // coefficient of delta(w); empty if none

    std::size_t size() const noexcept { return omega.size(); }
    Eigen::Index rows() const { return values.empty() ? 0 : values.front().rows(); }
    Eigen::Index cols() const { return values.empty() ? 0 : values.front().cols(); }

    void validate() const {
        if (omega.size() != values.size()) throw std::invalid_argument("Spectrum: grid and sample counts differ");
        for (std::size_t i = 1; i < omega.size(); ++i)
            if (!(omega[i] > omega[i - 1])) throw std::invalid_argument("Spectrum: grid must be strictly increasing");
    }
};

inline std::vector<double> uniform_grid(double lo, double hi, double step) {
    if (!(step > 0.0) || !(hi >= lo)) throw std::invalid_argument("uniform_grid: need step > 0 and hi >= lo");
    const auto n = static_cast<std::size_t>(std::llround((hi - lo) / step));
    if (std::abs(lo + static_cast<double>(n) * step - hi) > 1e-9 * std::max(1.0, std::abs(hi)))
        throw std::invalid_argument("uniform_grid: step does not divide the interval");
    std::vector<double> g(n + 1);
    for (std::size_t i = 0; i <= n; ++i) g[i] = lo + static_cast<double>(i) * step;
    return g;
}

inline bool same_grid(const Spectrum& a, const Spectrum& b, double tol = 1e-12) {
    if (a.omega.size() != b.omega.size()) return false;
    for (std::size_t i = 0; i < a.omega.size(); ++i)
        if (std::abs(a.omega[i] - b.omega[i]) > tol * std::max(1.0, std::abs(a.omega[i]))) return false;
    return true;
}

enum class OperatorSide { left, right };

struct CorrelationOptions {
    double t_max = 50.0;
    double dt = 0.01;
    OperatorSide side = OperatorSide::left;
    bool connected = true;
};

// left:  values(v,u) = <Q_v(t) Q_u(0)>
// right: values(v,u) = <Q_u(0) Q_v(t)>   (= conj of the left result)
inline TimeSeries correlation_trajectories(const HierarchyModel& m, const HierarchyState& ss,
                                           const CorrelationOptions& opt = {}) {
    if (!ss.conforms_to(m)) throw std::invalid_argument("correlation_trajectories: state does not conform");
    if (!(opt.dt > 0.0) || !(opt.t_max > 0.0))
        throw std::invalid_argument("correlation_trajectories: dt and t_max must be > 0");
    const auto& qs = m.system().modes;
    const auto n = static_cast<Eigen::Index>(qs.size());
    const auto samples = static_cast<std::size_t>(std::llround(opt.t_max / opt.dt)) + 1;
    const double step = stable_time_step(m, opt.dt, opt.dt);
    const auto substeps = static_cast<std::size_t>(std::llround(opt.dt / step));

    TimeSeries ts;
    ts.dt = opt.dt;
    ts.values.assign(samples, CMatrix::Zero(n, n));
    ts.asymptote = CMatrix::Zero(n, n);
    std::vector<cplx> mean(qs.size());
    for (std::size_t v = 0; v < qs.size(); ++v) mean[v] = expectation(ss, qs[v]);

    for (std::size_t u = 0; u < qs.size(); ++u) {
        HierarchyState x(m.dim(), m.ado_count());
        for (std::size_t i = 0; i < m.ado_count(); ++i)
            x.ado(i) = opt.side == OperatorSide::left ? CMatrix(qs[u] * ss.ado(i)) : CMatrix(ss.ado(i) * qs[u]);
        for (std::size_t k = 0; k < samples; ++k) {
            if (k > 0) propagate_in_place(m, x, step, substeps);
            for (std::size_t v = 0; v < qs.size(); ++v)
                ts.values[k](static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(u)) = expectation(x, qs[v]);
        }
        if (opt.connected)
            for (std::size_t v = 0; v < qs.size(); ++v) {
                const cplx c = opt.side == OperatorSide::left ? mean[v] * mean[u] : mean[u] * mean[v];
                ts.asymptote(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(u)) = c;
                for (auto& s : ts.values) s(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(u)) -= c;
            }
    }
    return ts;
}

class InsufficientDecayError : public NumericalError {
  public:
    using NumericalError::NumericalError;
};

struct HalfFourierOptions {
    double decay_tol = 1e-6;  // allowed |f(t_max)| / max|f|
    bool hann_window = false; // taper to zero at t_max; skips the decay check
};

// Trapezoid sum of int_0^T e^{iwt} f(t) dt with the leading Euler-Maclaurin
// correction at t = 0 (f is assumed decayed at T). Matrix entries are
// transformed independently; the asymptote is ignored.
inline Spectrum half_fourier(const TimeSeries& ts, const std::vector<double>& omega,
                             const HalfFourierOptions& opt = {}) {
    ts.validate();
    const std::size_t n = ts.size();
    const double h = ts.dt;
    std::vector<CMatrix> f = ts.values;
    if (opt.hann_window) {
        const double span = h * static_cast<double>(n - 1);
        for (std::size_t i = 0; i < n; ++i) {
            const double w = std::cos(0.5 * std::numbers::pi * ts.time(i) / span);
            f[i] *= w * w;
        }
    } else {
        double peak = 0.0;
        for (const auto& v : f) peak = std::max(peak, max_abs(v));
        const double tail = max_abs(f.back());
        if (tail > opt.decay_tol * peak)
            throw InsufficientDecayError("half_fourier: series not decayed at t = " + std::to_string(ts.time(n - 1)) +
                                         " (tail/peak = " + std::to_string(peak > 0 ? tail / peak : 0.0) +
                                         "); extend the horizon");
    }
    const CMatrix df0 = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);

    const auto rows = ts.rows(), cols = ts.cols();
    const auto ne = static_cast<std::size_t>(rows * cols);
    std::vector<cplx> flat(n * ne);
    for (std::size_t i = 0; i < n; ++i) std::copy(f[i].data(), f[i].data() + ne, flat.begin() + static_cast<std::ptrdiff_t>(i * ne));

    Spectrum out;
    out.omega = omega;
    out.values.resize(omega.size());
    std::vector<cplx> acc(ne);
    for (std::size_t k = 0; k < omega.size(); ++k) {
        const double w = omega[k];
        const cplx rot = std::polar(1.0, w * h);
        cplx phase = 1.0;
        for (std::size_t e = 0; e < ne; ++e) acc[e] = 0.5 * flat[e];
        for (std::size_t i = 1; i < n; ++i) {
            // resynchronise the rotating phase periodically to bound drift
            phase = (i % 256 == 0) ? std::polar(1.0, w * h * static_cast<double>(i)) : phase * rot;
            const cplx p = (i + 1 == n ? 0.5 : 1.0) * phase;
            const cplx* fi = flat.data() + i * ne;
            for (std::size_t e = 0; e < ne; ++e) acc[e] += p * fi[e];
        }
        CMatrix v(rows, cols);
        for (std::size_t e = 0; e < ne; ++e) v.data()[e] = h * acc[e];
        v += (h * h / 12.0) * (I_unit * w * f[0] + df0);
        out.values[k] = v;
    }
    return out;
}

// C_vu(w) from connected S_vu(t) = <Q_v(t) Q_u(0)>.
inline Spectrum c_spectrum(const TimeSeries& s, const std::vector<double>& omega, const HalfFourierOptions& opt = {}) {
    Spectrum half = half_fourier(s, omega, opt);
    Spectrum out;
    out.omega = omega;
    out.values.resize(omega.size());
    for (std::size_t k = 0; k < omega.size(); ++k) out.values[k] = 0.5 * (half.values[k] + half.values[k].adjoint());
    if (s.asymptote.size()) out.zero_frequency_weight = std::numbers::pi * s.asymptote;
    return out;
}

// chi_uv(t) = i <[Q_u(t), Q_v(0)]> = i (S_uv(t) - conj(S_uv(t))); the
// disconnected parts cancel.
inline TimeSeries chi_ss_series(const TimeSeries& s) {
    s.validate();
    TimeSeries chi;
    chi.dt = s.dt;
    chi.values.reserve(s.size());
    for (const auto& v : s.values) chi.values.push_back(I_unit * (v - v.conjugate()));
    chi.asymptote = CMatrix::Zero(s.rows(), s.cols());
    return chi;
}

inline Spectrum chi_ss_spectrum(const TimeSeries& s, const std::vector<double>& omega,
                                const HalfFourierOptions& opt = {}) {
    return half_fourier(chi_ss_series(s), omega, opt);
}

inline Spectrum chi_ss_spectrum(const HierarchyModel& m, const HierarchyState& ss, const std::vector<double>& omega,
                                const CorrelationOptions& copt = {}, const HalfFourierOptions& opt = {}) {
    return chi_ss_spectrum(correlation_trajectories(m, ss, copt), omega, opt);
}

// Full-line transform of <[Q_v(t), Q_u(0)]>, which equals 2 C_vu(w) - 2 C_uv(-w).
inline Spectrum commutator_spectrum(const TimeSeries& s, const std::vector<double>& omega,
                                    const HalfFourierOptions& opt = {}) {
    std::vector<double> neg(omega.size());
    for (std::size_t k = 0; k < omega.size(); ++k) neg[k] = -omega[k];
    const Spectrum pos = c_spectrum(s, omega, opt);
    const Spectrum mir = c_spectrum(s, neg, opt);
    Spectrum out;
    out.omega = omega;
    out.values.resize(omega.size());
    for (std::size_t k = 0; k < omega.size(); ++k)
        out.values[k] = 2.0 * pos.values[k] - 2.0 * mir.values[k].transpose();
    return out;
}

}  // namespace qheat
