#pragma once

// Run configuration and its text format.
//
//   # comment
//   [system]
//   dim = 2
//   hamiltonian = [0, 1, 1, 0]        # row-major real part
//   hamiltonian_imag = [0, 0, 0, 0]   # optional
//
//   [mode 1]
//   operator = [1, 0, 0, 0]
//
//   [reservoir L]
//   temperature = 5                   # V
//   mode1 = [0.2, 2, 10]              # eta, omega0, zeta (V)
//
//   [solver] [grids] [sweep] [output]  scalar keys, see RunConfig
//
// Keys and sections are case-sensitive; unknown keys are errors.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qheat/bath.hpp"
#include "qheat/dynamics.hpp"
#include "qheat/hierarchy.hpp"

namespace qheat {

class ConfigError : public std::runtime_error {
  public:
    ConfigError(const std::string& source, int line, const std::string& field, const std::string& what)
        : std::runtime_error(format(source, line, field, what)), line_(line), field_(field), message_(what) {}
    int line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }
    const std::string& message() const noexcept { return message_; }

  private:
    static std::string format(const std::string& source, int line, const std::string& field, const std::string& what) {
        std::string s = source;
        if (line > 0) s += ":" + std::to_string(line);
        s += ": ";
        if (!field.empty()) s += field + ": ";
        return s + what;
    }
    int line_;
    std::string field_;
    std::string message_;
};

struct ReservoirConfig {
    std::string label;
    double temperature = 1.0;
    std::vector<ModeCoupling> couplings;
    bool operator==(const ReservoirConfig&) const = default;

    ReservoirSpec spec() const { return {label, 1.0 / temperature, couplings}; }
};

struct SolverConfig {
    std::size_t tier = 4;
    std::optional<std::size_t> thermal_tier;
    std::size_t n_pade = 2;
    BoseScheme scheme = BoseScheme::pade;
    bool terminator = false;
    SteadyMethod steady_method = SteadyMethod::direct;
    double steady_tol = 1e-10;
    double dt = 0.01;
    double horizon = 5000.0;
    std::size_t max_ados = 2'000'000;
    std::size_t kernel_poles = 16;  // Bose poles of the time-route kernel
    bool tier_sweep = true;         // also solve at tier + 1
    bool operator==(const SolverConfig&) const = default;
};

struct GridConfig {
    double t_max = 50.0;
    double dt_corr = 0.01;
    double omega_max = 20.0;
    double d_omega = 0.005;
    bool hann_window = false;
    bool operator==(const GridConfig&) const = default;
};

// When ratios is non-empty every run is repeated with
// T_scaled = ratio * T_reference.
struct SweepConfig {
    std::string reference;
    std::string scaled;
    std::vector<double> ratios;
    bool operator==(const SweepConfig&) const = default;
};

struct OutputConfig {
    std::string dir = "out";
    bool operator==(const OutputConfig&) const = default;
};

struct RunConfig {
    std::size_t dim = 2;
    CMatrix hamiltonian;
    std::vector<CMatrix> modes;
    std::vector<ReservoirConfig> reservoirs;
    SolverConfig solver;
    GridConfig grids;
    SweepConfig sweep;
    OutputConfig output;

    bool operator==(const RunConfig& o) const {
        auto same = [](const CMatrix& a, const CMatrix& b) { return a.rows() == b.rows() && a.cols() == b.cols() && a == b; };
        if (dim != o.dim || !same(hamiltonian, o.hamiltonian) || modes.size() != o.modes.size()) return false;
        for (std::size_t i = 0; i < modes.size(); ++i)
            if (!same(modes[i], o.modes[i])) return false;
        return reservoirs == o.reservoirs && solver == o.solver && grids == o.grids && sweep == o.sweep &&
               output == o.output;
    }

    SystemSpec system() const { return {hamiltonian, modes}; }

    const ReservoirConfig* reservoir(std::string_view label) const {
        for (const auto& r : reservoirs)
            if (r.label == label) return &r;
        return nullptr;
    }

    // Temperatures at one sweep point (the config as written when no sweep).
    std::vector<ReservoirSpec> reservoir_specs(std::optional<double> ratio = std::nullopt) const {
        std::vector<ReservoirSpec> out;
        const ReservoirConfig* ref = ratio ? reservoir(sweep.reference) : nullptr;
        for (const auto& r : reservoirs) {
            ReservoirSpec s = r.spec();
            if (ratio && r.label == sweep.scaled) s.beta = 1.0 / (*ratio * ref->temperature);
            out.push_back(s);
        }
        return out;
    }

    HierarchyOptions hierarchy_options(std::optional<std::size_t> tier = std::nullopt) const {
        HierarchyOptions h;
        h.tier = tier.value_or(solver.tier);
        h.thermal_tier = solver.thermal_tier;
        h.max_ados = solver.max_ados;
        h.terminator = solver.terminator;
        return h;
    }
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

// Shortest text that parses back to the same double.
inline std::string fmt_double(double v) {
    char buf[40];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

struct RawValue {
    std::string text;
    int line = 0;
};

struct RawSection {
    std::string kind;  // "system", "mode", "reservoir", ...
    std::string name;  // second word of the header, may be empty
    int line = 0;
    std::map<std::string, RawValue> values;
};

class ConfigReader {
  public:
    ConfigReader(std::string source, std::istream& in) : source_(std::move(source)) {
        std::string line;
        int n = 0;
        RawSection* cur = nullptr;
        while (std::getline(in, line)) {
            ++n;
            if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
            const std::string t = trim(line);
            if (t.empty()) continue;
            if (t.front() == '[') {
                if (t.back() != ']') fail(n, "", "unterminated section header");
                std::istringstream hs(t.substr(1, t.size() - 2));
                RawSection s;
                s.line = n;
                hs >> s.kind >> s.name;
                std::string extra;
                if (s.kind.empty() || (hs >> extra)) fail(n, "", "malformed section header '" + t + "'");
                sections_.push_back(std::move(s));
                cur = &sections_.back();
                continue;
            }
            const auto eq = t.find('=');
            if (eq == std::string::npos) fail(n, "", "expected 'key = value'");
            const std::string key = trim(t.substr(0, eq));
            const std::string val = trim(t.substr(eq + 1));
            if (key.empty() || key.find_first_of(" \t") != std::string::npos) fail(n, "", "malformed key '" + key + "'");
            if (!cur) fail(n, key, "key outside of any section");
            if (val.empty()) fail(n, key, "missing value");
            if (!cur->values.emplace(key, RawValue{val, n}).second) fail(n, key, "duplicate key");
        }
    }

    std::deque<RawSection>& sections() { return sections_; }
    const std::string& source() const { return source_; }

    [[noreturn]] void fail(int line, const std::string& field, const std::string& what) const {
        throw ConfigError(source_, line, field, what);
    }

    double number(const RawSection& s, const std::string& key, const RawValue& v) const {
        const std::string f = field(s, key);
        std::size_t pos = 0;
        double d = 0.0;
        try {
            d = std::stod(v.text, &pos);
        } catch (const std::exception&) {
            fail(v.line, f, "expected a number, got '" + v.text + "'");
        }
        if (pos != v.text.size()) fail(v.line, f, "expected a number, got '" + v.text + "'");
        if (!std::isfinite(d)) fail(v.line, f, "value must be finite");
        return d;
    }

    std::size_t count(const RawSection& s, const std::string& key, const RawValue& v) const {
        const double d = number(s, key, v);
        if (d < 0.0 || d != std::floor(d) || d > 1e9) fail(v.line, field(s, key), "expected a non-negative integer");
        return static_cast<std::size_t>(d);
    }

    bool boolean(const RawSection& s, const std::string& key, const RawValue& v) const {
        if (v.text == "true") return true;
        if (v.text == "false") return false;
        fail(v.line, field(s, key), "expected true or false");
    }

    std::vector<double> array(const RawSection& s, const std::string& key, const RawValue& v) const {
        const std::string f = field(s, key);
        if (v.text.size() < 2 || v.text.front() != '[' || v.text.back() != ']')
            fail(v.line, f, "expected a bracketed array");
        std::vector<double> out;
        std::string body = v.text.substr(1, v.text.size() - 2);
        if (trim(body).empty()) return out;
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ',')) {
            RawValue iv{trim(item), v.line};
            if (iv.text.empty()) fail(v.line, f, "empty array element");
            out.push_back(number(s, key, iv));
        }
        return out;
    }

    static std::string field(const RawSection& s, const std::string& key) {
        std::string f = s.kind;
        if (!s.name.empty()) f += " " + s.name;
        return f + "." + key;
    }

  private:
    std::string source_;
    std::deque<RawSection> sections_;
};

inline CMatrix matrix_from(const ConfigReader& r, const RawSection& s, const std::string& key, std::size_t dim) {
    const auto& re_v = s.values.at(key);
    const auto re = r.array(s, key, re_v);
    std::vector<double> im(re.size(), 0.0);
    const int line = re_v.line;
    if (auto it = s.values.find(key + "_imag"); it != s.values.end()) im = r.array(s, key + "_imag", it->second);
    if (re.size() != dim * dim || im.size() != dim * dim)
        r.fail(line, ConfigReader::field(s, key), "expected " + std::to_string(dim * dim) + " entries (row-major)");
    const auto d = static_cast<Eigen::Index>(dim);
    CMatrix m(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) m(i, j) = cplx(re[static_cast<std::size_t>(i * d + j)], im[static_cast<std::size_t>(i * d + j)]);
    return m;
}

}  // namespace detail

inline void validate(const RunConfig& c, const std::string& source = "config") {
    auto bad = [&](const std::string& field, const std::string& what) { throw ConfigError(source, 0, field, what); };
    if (c.dim < 2) bad("system.dim", "must be >= 2");
    if (c.hamiltonian.rows() != static_cast<Eigen::Index>(c.dim) || c.hamiltonian.cols() != c.hamiltonian.rows())
        bad("system.hamiltonian", "dimension does not match system.dim");
    if (!is_hermitian(c.hamiltonian)) bad("system.hamiltonian", "not Hermitian");
    for (std::size_t u = 0; u < c.modes.size(); ++u) {
        const std::string f = "mode " + std::to_string(u + 1) + ".operator";
        if (c.modes[u].rows() != static_cast<Eigen::Index>(c.dim) || c.modes[u].cols() != c.modes[u].rows())
            bad(f, "dimension does not match system.dim");
        if (!is_hermitian(c.modes[u])) bad(f, "not Hermitian");
    }
    if (c.reservoirs.empty()) bad("reservoir", "at least one reservoir is required");
    for (std::size_t i = 0; i < c.reservoirs.size(); ++i) {
        const auto& r = c.reservoirs[i];
        const std::string base = "reservoir " + r.label;
        for (std::size_t j = 0; j < i; ++j)
            if (c.reservoirs[j].label == r.label) bad(base, "duplicate reservoir label");
        if (!(r.temperature > 0.0)) bad(base + ".temperature", "must be > 0");
        for (const auto& mc : r.couplings) {
            const std::string f = base + ".mode" + std::to_string(mc.mode + 1);
            if (mc.mode >= c.modes.size()) bad(f, "refers to an undefined mode");
            try {
                mc.kernel.validate();
            } catch (const std::invalid_argument& e) {
                bad(f, e.what());
            }
        }
    }
    if (c.solver.n_pade > 64) bad("solver.n_pade", "must be <= 64");
    if (c.solver.kernel_poles > 256) bad("solver.kernel_poles", "must be <= 256");
    if (!(c.solver.steady_tol > 0.0)) bad("solver.steady_tol", "must be > 0");
    if (!(c.solver.dt > 0.0)) bad("solver.dt", "must be > 0");
    if (!(c.solver.horizon > 0.0)) bad("solver.horizon", "must be > 0");
    if (c.solver.max_ados == 0) bad("solver.max_ados", "must be > 0");
    if (!(c.grids.t_max > 0.0)) bad("grids.t_max", "must be > 0");
    if (!(c.grids.dt_corr > 0.0)) bad("grids.dt_corr", "must be > 0");
    if (!(c.grids.omega_max > 0.0)) bad("grids.omega_max", "must be > 0");
    if (!(c.grids.d_omega > 0.0)) bad("grids.d_omega", "must be > 0");
    if (c.grids.t_max / c.grids.dt_corr < 2.0) bad("grids.t_max", "needs at least 3 time samples");
    const double cells = 2.0 * c.grids.omega_max / c.grids.d_omega;
    if (std::abs(cells - std::round(cells)) > 1e-6 || std::llround(cells) % 4 != 0)
        bad("grids.d_omega", "2 * omega_max / d_omega must be a multiple of 4");
    if (!c.sweep.ratios.empty()) {
        if (!c.reservoir(c.sweep.reference)) bad("sweep.reference", "unknown reservoir '" + c.sweep.reference + "'");
        if (!c.reservoir(c.sweep.scaled)) bad("sweep.scaled", "unknown reservoir '" + c.sweep.scaled + "'");
        for (double r : c.sweep.ratios)
            if (!(r > 0.0)) bad("sweep.ratios", "ratios must be > 0");
    }
    if (c.output.dir.empty()) bad("output.dir", "must not be empty");
}

inline RunConfig parse_config(std::istream& in, const std::string& source = "config") {
    detail::ConfigReader reader(source, in);
    RunConfig c;
    c.modes.clear();
    std::map<std::string, int> line_of;
    auto take = [&](detail::RawSection& s, const std::string& key) -> const detail::RawValue* {
        auto it = s.values.find(key);
        if (it == s.values.end()) return nullptr;
        line_of[detail::ConfigReader::field(s, key)] = it->second.line;
        return &it->second;
    };
    auto reject_unknown = [&](const detail::RawSection& s, std::initializer_list<std::string_view> allowed) {
        for (const auto& [k, v] : s.values) {
            bool ok = false;
            for (auto a : allowed) ok = ok || k == a;
            if (!ok) reader.fail(v.line, detail::ConfigReader::field(s, k), "unknown key");
        }
    };

    detail::RawSection* system = nullptr;
    std::map<std::size_t, detail::RawSection*> modes;
    for (auto& s : reader.sections()) {
        if (s.kind == "system") {
            if (system) reader.fail(s.line, "system", "duplicate section");
            system = &s;
        } else if (s.kind == "mode") {
            detail::RawValue idx{s.name, s.line};
            const std::size_t u = reader.count(s, "index", idx);
            if (u == 0) reader.fail(s.line, "mode", "mode indices start at 1");
            if (!modes.emplace(u, &s).second) reader.fail(s.line, "mode " + s.name, "duplicate section");
        } else if (s.kind != "reservoir" && s.kind != "solver" && s.kind != "grids" && s.kind != "sweep" &&
                   s.kind != "output") {
            reader.fail(s.line, s.kind, "unknown section");
        }
        if (s.kind == "reservoir" && s.name.empty()) reader.fail(s.line, "reservoir", "missing reservoir label");
        if (s.kind != "reservoir" && s.kind != "mode" && !s.name.empty())
            reader.fail(s.line, s.kind, "section takes no name");
    }
    if (!system) reader.fail(0, "system", "missing [system] section");
    reject_unknown(*system, {"dim", "hamiltonian", "hamiltonian_imag"});
    if (auto v = take(*system, "dim")) c.dim = reader.count(*system, "dim", *v);
    else reader.fail(system->line, "system.dim", "required");
    if (c.dim < 2) reader.fail(line_of["system.dim"], "system.dim", "must be >= 2");
    if (!take(*system, "hamiltonian")) reader.fail(system->line, "system.hamiltonian", "required");
    c.hamiltonian = detail::matrix_from(reader, *system, "hamiltonian", c.dim);
    std::size_t expect = 1;
    for (auto& [u, s] : modes) {
        if (u != expect) reader.fail(s->line, "mode " + s->name, "mode indices must be consecutive from 1");
        ++expect;
        reject_unknown(*s, {"operator", "operator_imag"});
        if (!take(*s, "operator")) reader.fail(s->line, "mode " + s->name + ".operator", "required");
        c.modes.push_back(detail::matrix_from(reader, *s, "operator", c.dim));
    }

    for (auto& s : reader.sections()) {
        if (s.kind == "reservoir") {
            ReservoirConfig r;
            r.label = s.name;
            for (const auto& [k, v] : s.values) {
                const std::string f = detail::ConfigReader::field(s, k);
                line_of[f] = v.line;
                if (k == "temperature") {
                    r.temperature = reader.number(s, k, v);
                } else if (k.rfind("mode", 0) == 0 && k.size() > 4) {
                    detail::RawValue idx{k.substr(4), v.line};
                    const std::size_t u = reader.count(s, k, idx);
                    if (u == 0) reader.fail(v.line, f, "mode indices start at 1");
                    const auto p = reader.array(s, k, v);
                    if (p.size() != 3) reader.fail(v.line, f, "expected [eta, omega0, zeta]");
                    r.couplings.push_back({u - 1, {p[0], p[1], p[2]}});
                } else {
                    reader.fail(v.line, f, "unknown key");
                }
            }
            if (!s.values.count("temperature")) reader.fail(s.line, "reservoir " + s.name + ".temperature", "required");
            c.reservoirs.push_back(std::move(r));
        } else if (s.kind == "solver") {
            reject_unknown(s, {"tier", "thermal_tier", "n_pade", "bose_scheme", "closure", "steady_method",
                               "steady_tol", "dt", "horizon", "max_ados", "kernel_poles", "tier_sweep"});
            auto& o = c.solver;
            if (auto v = take(s, "tier")) o.tier = reader.count(s, "tier", *v);
            if (auto v = take(s, "thermal_tier")) {
                if (v->text == "none") o.thermal_tier.reset();
                else o.thermal_tier = reader.count(s, "thermal_tier", *v);
            }
            if (auto v = take(s, "n_pade")) o.n_pade = reader.count(s, "n_pade", *v);
            if (auto v = take(s, "bose_scheme")) {
                try {
                    o.scheme = parse_bose_scheme(v->text);
                } catch (const std::invalid_argument& e) {
                    reader.fail(v->line, "solver.bose_scheme", e.what());
                }
            }
            if (auto v = take(s, "closure")) {
                if (v->text == "hard") o.terminator = false;
                else if (v->text == "terminator") o.terminator = true;
                else reader.fail(v->line, "solver.closure", "expected hard or terminator");
            }
            if (auto v = take(s, "steady_method")) {
                if (v->text == "direct") o.steady_method = SteadyMethod::direct;
                else if (v->text == "propagate") o.steady_method = SteadyMethod::propagate;
                else reader.fail(v->line, "solver.steady_method", "expected direct or propagate");
            }
            if (auto v = take(s, "steady_tol")) o.steady_tol = reader.number(s, "steady_tol", *v);
            if (auto v = take(s, "dt")) o.dt = reader.number(s, "dt", *v);
            if (auto v = take(s, "horizon")) o.horizon = reader.number(s, "horizon", *v);
            if (auto v = take(s, "max_ados")) o.max_ados = reader.count(s, "max_ados", *v);
            if (auto v = take(s, "kernel_poles")) o.kernel_poles = reader.count(s, "kernel_poles", *v);
            if (auto v = take(s, "tier_sweep")) o.tier_sweep = reader.boolean(s, "tier_sweep", *v);
        } else if (s.kind == "grids") {
            reject_unknown(s, {"t_max", "dt_corr", "omega_max", "d_omega", "hann_window"});
            auto& g = c.grids;
            if (auto v = take(s, "t_max")) g.t_max = reader.number(s, "t_max", *v);
            if (auto v = take(s, "dt_corr")) g.dt_corr = reader.number(s, "dt_corr", *v);
            if (auto v = take(s, "omega_max")) g.omega_max = reader.number(s, "omega_max", *v);
            if (auto v = take(s, "d_omega")) g.d_omega = reader.number(s, "d_omega", *v);
            if (auto v = take(s, "hann_window")) g.hann_window = reader.boolean(s, "hann_window", *v);
        } else if (s.kind == "sweep") {
            reject_unknown(s, {"reference", "scaled", "ratios"});
            if (auto v = take(s, "reference")) c.sweep.reference = v->text;
            if (auto v = take(s, "scaled")) c.sweep.scaled = v->text;
            if (auto v = take(s, "ratios")) c.sweep.ratios = reader.array(s, "ratios", *v);
        } else if (s.kind == "output") {
            reject_unknown(s, {"dir"});
            if (auto v = take(s, "dir")) c.output.dir = v->text;
        }
    }

    try {
        validate(c, source);
    } catch (const ConfigError& e) {
        // attach the line of the offending field when it was written explicitly
        auto it = line_of.find(e.field());
        if (it == line_of.end()) throw;
        throw ConfigError(source, it->second, e.field(), e.message());
    }
    return c;
}

inline RunConfig parse_config_string(const std::string& text, const std::string& source = "config") {
    std::istringstream in(text);
    return parse_config(in, source);
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, 0, "", "cannot open config file '" + path + "'");
    return parse_config(in, path);
}

inline std::string serialize(const RunConfig& c) {
    using detail::fmt_double;
    std::ostringstream o;
    auto matrix = [&](const std::string& key, const CMatrix& m) {
        auto row = [&](bool imag) {
            std::string s = "[";
            for (Eigen::Index i = 0; i < m.rows(); ++i)
                for (Eigen::Index j = 0; j < m.cols(); ++j) {
                    if (i || j) s += ", ";
                    s += fmt_double(imag ? m(i, j).imag() : m(i, j).real());
                }
            return s + "]";
        };
        o << key << " = " << row(false) << "\n";
        if (m.imag().cwiseAbs().maxCoeff() > 0.0) o << key << "_imag = " << row(true) << "\n";
    };
    o << "[system]\ndim = " << c.dim << "\n";
    matrix("hamiltonian", c.hamiltonian);
    for (std::size_t u = 0; u < c.modes.size(); ++u) {
        o << "\n[mode " << u + 1 << "]\n";
        matrix("operator", c.modes[u]);
    }
    for (const auto& r : c.reservoirs) {
        o << "\n[reservoir " << r.label << "]\ntemperature = " << fmt_double(r.temperature) << "\n";
        for (const auto& mc : r.couplings)
            o << "mode" << mc.mode + 1 << " = [" << fmt_double(mc.kernel.eta) << ", " << fmt_double(mc.kernel.omega0)
              << ", " << fmt_double(mc.kernel.zeta) << "]\n";
    }
    const auto& s = c.solver;
    o << "\n[solver]\ntier = " << s.tier << "\nthermal_tier = "
      << (s.thermal_tier ? std::to_string(*s.thermal_tier) : std::string("none")) << "\nn_pade = " << s.n_pade
      << "\nbose_scheme = " << to_string(s.scheme) << "\nclosure = " << (s.terminator ? "terminator" : "hard")
      << "\nsteady_method = " << (s.steady_method == SteadyMethod::direct ? "direct" : "propagate")
      << "\nsteady_tol = " << fmt_double(s.steady_tol) << "\ndt = " << fmt_double(s.dt)
      << "\nhorizon = " << fmt_double(s.horizon) << "\nmax_ados = " << s.max_ados
      << "\nkernel_poles = " << s.kernel_poles << "\ntier_sweep = " << (s.tier_sweep ? "true" : "false") << "\n";
    const auto& g = c.grids;
    o << "\n[grids]\nt_max = " << fmt_double(g.t_max) << "\ndt_corr = " << fmt_double(g.dt_corr)
      << "\nomega_max = " << fmt_double(g.omega_max) << "\nd_omega = " << fmt_double(g.d_omega)
      << "\nhann_window = " << (g.hann_window ? "true" : "false") << "\n";
    if (!c.sweep.ratios.empty()) {
        o << "\n[sweep]\nreference = " << c.sweep.reference << "\nscaled = " << c.sweep.scaled << "\nratios = [";
        for (std::size_t i = 0; i < c.sweep.ratios.size(); ++i) o << (i ? ", " : "") << fmt_double(c.sweep.ratios[i]);
        o << "]\n";
    }
    o << "\n[output]\ndir = " << c.output.dir << "\n";
    return o.str();
}

// Two sites coupled by V = 1, each site projector coupled to both baths;
// k_B T_L = 5 V and T_R set by the sweep ratio.
inline RunConfig table1_preset() {
    RunConfig c;
    c.dim = 2;
    c.hamiltonian = CMatrix::Zero(2, 2);
    c.hamiltonian(0, 1) = c.hamiltonian(1, 0) = 1.0;
    CMatrix q1 = CMatrix::Zero(2, 2), q2 = CMatrix::Zero(2, 2);
    q1(0, 0) = 1.0;
    q2(1, 1) = 1.0;
    c.modes = {q1, q2};
    c.reservoirs = {{"L", 5.0, {{0, {0.2, 2.0, 10.0}}, {1, {0.4, 2.0, 10.0}}}},
                    {"R", 5.0, {{0, {0.4, 2.0, 10.0}}, {1, {0.2, 2.0, 10.0}}}}};
    c.solver.tier = 9;
    c.solver.thermal_tier = 1;
    c.solver.n_pade = 2;
    c.solver.terminator = true;
    c.sweep = {"L", "R", {0.5, 1.0, 1.5, 2.0}};
    return c;
}

inline RunConfig preset(std::string_view name) {
    if (name == "table1") return table1_preset();
    throw std::invalid_argument("unknown preset '" + std::string(name) + "' (available: table1)");
}

}  // namespace qheat
