#pragma once

// Orchestration shared by the CLI and the acceptance suite: operating points
// from a RunConfig, steady states, currents and spectra, and the CSV tables
// written for them.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qheat/config.hpp"
#include "qheat/csv.hpp"
#include "qheat/sbet.hpp"

namespace qheat {

struct OperatingPoint {
    std::optional<double> ratio;
    std::vector<ReservoirSpec> reservoirs;

    bool equilibrium() const {
        for (const auto& r : reservoirs)
            if (r.beta != reservoirs.front().beta) return false;
        return true;
    }
};

inline std::vector<OperatingPoint> operating_points(const RunConfig& c) {
    std::vector<OperatingPoint> out;
    if (c.sweep.ratios.empty()) {
        out.push_back({std::nullopt, c.reservoir_specs()});
        return out;
    }
    for (double r : c.sweep.ratios) out.push_back({r, c.reservoir_specs(r)});
    return out;
}

// Progress messages; silent when no stream is attached.
class RunLog {
  public:
    explicit RunLog(std::ostream* out = nullptr) : out_(out), start_(std::chrono::steady_clock::now()) {}
    template <class... Args>
    void operator()(const Args&... args) const {
        if (!out_) return;
        const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        char stamp[32];
        std::snprintf(stamp, sizeof stamp, "[%8.1fs] ", t);
        *out_ << stamp;
        (*out_ << ... << args);
        *out_ << std::endl;
    }

  private:
    std::ostream* out_;
    std::chrono::steady_clock::time_point start_;
};

struct SteadyResult {
    OperatingPoint point;
    std::size_t tier = 0;
    std::shared_ptr<const HierarchyModel> model;
    HierarchyState state;
    std::vector<CMatrix> first_tier;
    double residual = 0.0;
};

inline std::string describe(const OperatingPoint& p) {
    std::string s;
    if (p.ratio) s += "ratio " + detail::fmt_double(*p.ratio) + ", ";
    for (std::size_t i = 0; i < p.reservoirs.size(); ++i)
        s += (i ? ", T_" : "T_") + p.reservoirs[i].label + " = " + detail::fmt_double(1.0 / p.reservoirs[i].beta);
    return s;
}

inline SteadyResult solve_steady(const RunConfig& c, const OperatingPoint& p, std::size_t tier,
                                 const RunLog& log = RunLog{}) {
    SteadyResult r;
    r.point = p;
    r.tier = tier;
    r.model = std::make_shared<const HierarchyModel>(build_hierarchy(
        c.system(), make_channels(std::span<const ReservoirSpec>(p.reservoirs), c.solver.n_pade, c.solver.scheme),
        c.hierarchy_options(tier)));
    log("steady state (", describe(p), ", tier ", tier, ", ", r.model->ado_count(), " ADOs)");
    SteadyStateOptions so;
    so.method = c.solver.steady_method;
    so.tol = c.solver.steady_tol;
    so.dt = c.solver.dt;
    so.max_time = c.solver.horizon;
    r.state = steady_state(*r.model, HierarchyState::maximally_mixed(*r.model), so);
    r.residual = residual(*r.model, r.state);
    r.first_tier = channel_first_tier(*r.model, r.state);
    return r;
}

inline CorrelationOptions correlation_options(const RunConfig& c) {
    CorrelationOptions o;
    o.t_max = c.grids.t_max;
    o.dt = c.grids.dt_corr;
    return o;
}

inline HalfFourierOptions fourier_options(const RunConfig& c) {
    HalfFourierOptions o;
    o.hann_window = c.grids.hann_window;
    return o;
}

inline std::vector<double> frequency_grid(const RunConfig& c) {
    return uniform_grid(-c.grids.omega_max, c.grids.omega_max, c.grids.d_omega);
}

struct CurrentResult {
    SteadyResult steady;
    std::optional<TimeSeries> correlation;
    std::optional<Spectrum> c_spectrum;
    std::vector<HeatCurrentReport> reports;  // reservoir-major, methods in request order

    const HeatCurrentReport* find(const std::string& reservoir, CurrentMethod m) const {
        for (const auto& r : reports)
            if (r.reservoir == reservoir && r.method == m) return &r;
        return nullptr;
    }
};

inline CurrentResult evaluate_currents(const RunConfig& c, SteadyResult steady, const std::vector<CurrentMethod>& methods,
                                       const RunLog& log = RunLog{}) {
    if (methods.empty()) throw std::invalid_argument("no method selected");
    CurrentResult out;
    out.steady = std::move(steady);
    const bool need_corr = std::any_of(methods.begin(), methods.end(), [](CurrentMethod m) { return m != CurrentMethod::direct; });
    if (need_corr) {
        log("correlation functions (tier ", out.steady.tier, ", t_max ", c.grids.t_max, ")");
        out.correlation = correlation_trajectories(*out.steady.model, out.steady.state, correlation_options(c));
        if (std::find(methods.begin(), methods.end(), CurrentMethod::indirect_freq) != methods.end())
            out.c_spectrum = c_spectrum(*out.correlation, frequency_grid(c), fourier_options(c));
    }
    TimeCurrentOptions topt;
    topt.n_pade = c.solver.kernel_poles;
    for (const auto& r : out.steady.point.reservoirs)
        for (CurrentMethod m : methods) {
            HeatCurrentReport rep;
            switch (m) {
                case CurrentMethod::direct:
                    rep = heat_current_direct(*out.steady.model, out.steady.first_tier, r.label);
                    break;
                case CurrentMethod::indirect_freq:
                    rep = heat_current_indirect(*out.c_spectrum, r);
                    break;
                case CurrentMethod::indirect_time:
                    rep = heat_current_timedomain(*out.correlation, r, topt);
                    break;
            }
            rep.tier = out.steady.tier;
            out.reports.push_back(std::move(rep));
        }
    return out;
}

// Leading CSV columns identifying an operating point.
inline std::vector<std::string> point_header(const RunConfig& c) {
    std::vector<std::string> h;
    if (!c.sweep.ratios.empty()) h.push_back("ratio[1]");
    for (const auto& r : c.reservoirs) h.push_back("T_" + r.label + "[V]");
    return h;
}

inline void point_cells(CsvTable::Row& row, const OperatingPoint& p) {
    if (p.ratio) row << *p.ratio;
    for (const auto& r : p.reservoirs) row << 1.0 / r.beta;
}

inline std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

inline void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory '" + dir + "': " + ec.message());
}

inline std::string join_path(const std::string& dir, const std::string& file) {
    return (std::filesystem::path(dir) / file).string();
}

struct SteadyTables {
    CsvTable state;
    CsvTable bath;
    CsvTable tiers;
};

inline SteadyTables run_steady(const RunConfig& c, const RunLog& log = RunLog{}) {
    const auto d = static_cast<Eigen::Index>(c.dim);
    std::vector<std::string> cols{"tier"};
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) {
            const std::string e = "rho_" + std::to_string(i + 1) + std::to_string(j + 1);
            cols.push_back(e + "_re[1]");
            cols.push_back(e + "_im[1]");
        }
    cols.insert(cols.end(), {"trace[1]", "residual[1]"});
    SteadyTables t{CsvTable(concat(point_header(c), cols)),
                   CsvTable(concat(point_header(c), {"tier", "reservoir", "mode", "F_first_tier_re[V]",
                                                     "F_first_tier_im[V]", "F_relation[V]", "gap[1]"})),
                   CsvTable(concat(point_header(c), {"tier", "reservoir", "J_direct[V^2]", "drift[1]"}))};
    for (const auto& p : operating_points(c)) {
        std::vector<std::size_t> tiers{c.solver.tier};
        if (c.solver.tier_sweep) tiers.push_back(c.solver.tier + 1);
        std::vector<double> previous;
        for (std::size_t tier : tiers) {
            const SteadyResult s = solve_steady(c, p, tier, log);
            const CMatrix rho = s.state.density();
            auto row = t.state.row();
            point_cells(row, p);
            row << tier;
            for (Eigen::Index i = 0; i < d; ++i)
                for (Eigen::Index j = 0; j < d; ++j) row << rho(i, j).real() << rho(i, j).imag();
            row << rho.trace().real() << s.residual;

            const auto rel = expectation_relation_check(*s.model, s.state, p.reservoirs);
            for (const auto& e : rel) {
                auto b = t.bath.row();
                point_cells(b, p);
                b << tier << e.reservoir << e.mode + 1 << e.first_tier.real() << e.first_tier.imag() << e.relation
                  << e.gap;
            }
            std::vector<double> now;
            for (std::size_t k = 0; k < p.reservoirs.size(); ++k) {
                const double j = heat_current_direct(*s.model, s.first_tier, p.reservoirs[k].label).value;
                now.push_back(j);
                auto tr = t.tiers.row();
                point_cells(tr, p);
                tr << tier << p.reservoirs[k].label << j;
                if (previous.empty()) tr << "";
                else tr << std::abs(j - previous[k]) / std::max(std::abs(previous[k]), 1e-3);
            }
            previous = now;
        }
    }
    return t;
}

inline CsvTable current_table(const RunConfig& c) {
    return CsvTable(concat(point_header(c), {"reservoir", "method", "tier", "current[V^2]", "imag_residue[1]",
                                             "refinement_change[1]", "kernel_tail[1]"}));
}

inline void add_current_rows(CsvTable& t, const CurrentResult& r) {
    for (const auto& rep : r.reports) {
        auto row = t.row();
        point_cells(row, r.steady.point);
        row << rep.reservoir << to_string(rep.method) << rep.tier << rep.value;
        for (const char* key : {"imag_residue", "refinement_change", "kernel_tail"}) {
            auto it = rep.diagnostics.find(key);
            if (it == rep.diagnostics.end()) row << "";
            else row << it->second;
        }
    }
}

inline CsvTable run_current(const RunConfig& c, const std::vector<CurrentMethod>& methods, const RunLog& log = RunLog{}) {
    if (methods.empty()) throw std::invalid_argument("no method selected");
    CsvTable t = current_table(c);
    for (const auto& p : operating_points(c))
        add_current_rows(t, evaluate_currents(c, solve_steady(c, p, c.solver.tier, log), methods, log));
    return t;
}

enum class SpectrumKind { c, chi_ss, chi_cross, chi_bathbath };

inline SpectrumKind parse_spectrum_kind(std::string_view s) {
    if (s == "C") return SpectrumKind::c;
    if (s == "chi_ss") return SpectrumKind::chi_ss;
    if (s == "chi_cross") return SpectrumKind::chi_cross;
    if (s == "chi_bathbath") return SpectrumKind::chi_bathbath;
    throw std::invalid_argument("unknown spectrum '" + std::string(s) + "' (expected C, chi_ss, chi_cross or chi_bathbath)");
}

inline CsvTable spectrum_table(const Spectrum& s, const std::string& name, const std::string& unit) {
    std::vector<std::string> h{"omega[V]"};
    for (Eigen::Index v = 0; v < s.rows(); ++v)
        for (Eigen::Index u = 0; u < s.cols(); ++u) {
            const std::string e = name + "_" + std::to_string(v + 1) + std::to_string(u + 1);
            h.push_back(e + "_re[" + unit + "]");
            h.push_back(e + "_im[" + unit + "]");
        }
    CsvTable t(h);
    for (std::size_t k = 0; k < s.size(); ++k) {
        auto row = t.row();
        row << s.omega[k];
        for (Eigen::Index v = 0; v < s.rows(); ++v)
            for (Eigen::Index u = 0; u < s.cols(); ++u) row << s.values[k](v, u).real() << s.values[k](v, u).imag();
    }
    return t;
}

// (1/pi) int C_vu dw including the zero-frequency line; equals <Q_v Q_u>
// when the grid covers the spectral weight.
inline CMatrix sum_rule(const Spectrum& c) {
    c.validate();
    const std::size_t n = c.size();
    CMatrix acc = CMatrix::Zero(c.rows(), c.cols());
    for (std::size_t k = 0; k + 1 < n; ++k) acc += 0.5 * (c.omega[k + 1] - c.omega[k]) * (c.values[k] + c.values[k + 1]);
    if (c.zero_frequency_weight.size()) acc += c.zero_frequency_weight;
    return acc / std::numbers::pi;
}

struct NamedTable {
    std::string name;
    CsvTable table;
};

inline std::vector<NamedTable> run_spectra(const RunConfig& c, const std::vector<SpectrumKind>& which,
                                           const RunLog& log = RunLog{}) {
    if (which.empty()) throw std::invalid_argument("no spectrum selected");
    std::vector<NamedTable> out;
    const auto grid = frequency_grid(c);
    for (const auto& p : operating_points(c)) {
        const std::string tag = (p.ratio ? "_ratio" + detail::fmt_double(*p.ratio) : std::string()) + ".csv";
        const SteadyResult s = solve_steady(c, p, c.solver.tier, log);
        log("correlation functions for spectra");
        const TimeSeries corr = correlation_trajectories(*s.model, s.state, correlation_options(c));
        const Spectrum chi = chi_ss_spectrum(corr, grid, fourier_options(c));
        for (SpectrumKind k : which) {
            switch (k) {
                case SpectrumKind::c: {
                    const Spectrum cs = c_spectrum(corr, grid, fourier_options(c));
                    CsvTable t = spectrum_table(cs, "C", "1/V");
                    const CMatrix sr = sum_rule(cs);
                    for (Eigen::Index v = 0; v < sr.rows(); ++v)
                        for (Eigen::Index u = 0; u < sr.cols(); ++u) {
                            const cplx exact = expectation(s.state, c.modes[static_cast<std::size_t>(v)] *
                                                                        c.modes[static_cast<std::size_t>(u)]);
                            t.note("sum_rule " + std::to_string(v + 1) + std::to_string(u + 1) +
                                   " integral=" + csv_number(sr(v, u).real()) + " expected=" + csv_number(exact.real()) +
                                   " gap=" + csv_number(std::abs(sr(v, u) - exact)));
                        }
                    out.push_back({"C" + tag, std::move(t)});
                    break;
                }
                case SpectrumKind::chi_ss:
                    out.push_back({"chi_ss" + tag, spectrum_table(chi, "chi_ss", "1/V")});
                    break;
                case SpectrumKind::chi_cross:
                    for (const auto& r : p.reservoirs) {
                        out.push_back({"chi_cross_" + r.label + "S" + tag,
                                       spectrum_table(chi_cross_spectrum(chi, r, ResponseSide::bath_first),
                                                      "chi_" + r.label + "S", "1")});
                        out.push_back({"chi_cross_S" + r.label + tag,
                                       spectrum_table(chi_cross_spectrum(chi, r, ResponseSide::system_first),
                                                      "chi_S" + r.label, "1")});
                    }
                    break;
                case SpectrumKind::chi_bathbath:
                    for (const auto& a : p.reservoirs)
                        for (const auto& b : p.reservoirs)
                            out.push_back({"chi_bathbath_" + a.label + b.label + tag,
                                           spectrum_table(chi_bath_bath_spectrum(chi, a, b),
                                                          "chi_" + a.label + b.label, "V")});
                    break;
            }
        }
    }
    return out;
}

}  // namespace qheat
