#pragma once

// Acceptance suite: reference currents for the two-site benchmark, internal
// consistency between the current routes, conservation, detailed balance at
// equilibrium, the first-tier expectation relation, tier convergence, and a
// set of closed-form oracles for the numerical kernels.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qheat/experiment.hpp"

namespace qheat {

struct CriterionResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct AcceptanceOptions {
    bool oracles = true;
    bool physics = true;
    double reference_tol = 0.03;
    double equilibrium_tol = 1e-5;
    double route_gap_tol = 0.01;      // direct vs indirect_freq
    double route_equiv_tol = 0.005;   // indirect_freq vs indirect_time
    double conservation_tol = 1e-4;
    double kms_tol = 1e-2;
    double relation_tol = 1e-2;
    double tier_drift_tol = 0.01;
};

struct AcceptanceReport {
    std::vector<CriterionResult> criteria;
    std::string matrix;  // ratio x method table of currents of the reference reservoir

    bool passed() const {
        return !criteria.empty() &&
               std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& c) { return c.passed; });
    }

    void print(std::ostream& out) const {
        if (!matrix.empty()) out << matrix;
        for (const auto& c : criteria) out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
        const auto failed = std::count_if(criteria.begin(), criteria.end(), [](const auto& c) { return !c.passed; });
        out << (passed() ? "ALL PASS" : "FAILED") << " (" << criteria.size() - static_cast<std::size_t>(failed) << "/"
            << criteria.size() << " criteria)\n";
    }
};

namespace detail {

inline std::string sci(double v, int digits = 4) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*e", digits, v);
    return buf;
}

inline double rel_gap(double a, double b, double floor = 1e-3) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

struct ReferenceCurrent {
    double ratio;
    double direct;
    double indirect;
};

// J_L of the two-site benchmark at T_L = 5 V.
inline const std::vector<ReferenceCurrent>& table1_reference() {
    static const std::vector<ReferenceCurrent> ref{
        {0.5, 0.01484, 0.01487}, {1.0, 0.0, 0.0}, {1.5, -0.008757, -0.008773}, {2.0, -0.01435, -0.01435}};
    return ref;
}

// Same system and baths as the table1 preset (solver settings may differ).
inline bool is_table1_model(const RunConfig& c) {
    const RunConfig p = table1_preset();
    RunConfig a = c;
    a.solver = p.solver;
    a.grids = p.grids;
    a.output = p.output;
    return a.dim == p.dim && a.hamiltonian == p.hamiltonian && a.modes.size() == p.modes.size() &&
           std::equal(a.modes.begin(), a.modes.end(), p.modes.begin()) && a.reservoirs == p.reservoirs &&
           a.sweep.reference == p.sweep.reference && a.sweep.scaled == p.sweep.scaled;
}

// (1/pi) int dw e^{-iwt} J(w) / (1 - e^{-beta w}) by panelwise Gauss-Kronrod.
inline cplx correlation_quadrature(const BrownianMode& m, double beta, double t, double cutoff = 2000.0) {
    auto weight = [&](double w) {
        if (w == 0.0) return m.eta * m.zeta / (m.omega0 * m.omega0 * beta);
        return spectral_density(m, w) / (-std::expm1(-beta * w));
    };
    auto re = [&](double w) { return weight(w) * std::cos(w * t); };
    auto im = [&](double w) { return -weight(w) * std::sin(w * t); };
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    double sr = 0.0, si = 0.0;
    const double width = 0.5;
    for (double a = -cutoff; a < cutoff; a += width) {
        sr += GK::integrate(re, a, a + width, 0);
        si += GK::integrate(im, a, a + width, 0);
    }
    return cplx(sr, si) / std::numbers::pi;
}

}  // namespace detail

inline std::vector<CriterionResult> oracle_criteria(const RunLog& log = RunLog{}) {
    std::vector<CriterionResult> out;
    using detail::sci;

    log("oracle: closed-system Rabi oscillation");
    {
        SystemSpec sys{CMatrix::Zero(2, 2), {}};
        sys.hamiltonian(0, 1) = sys.hamiltonian(1, 0) = 1.0;
        HierarchyOptions o;
        const auto m = build_hierarchy(sys, {}, o);
        CMatrix rho = CMatrix::Zero(2, 2);
        rho(0, 0) = 1.0;
        HierarchyState s = HierarchyState::with_density(m, rho);
        const double dt = 0.005;
        double err = 0.0;
        for (int k = 1; k <= 20; ++k) {
            propagate_in_place(m, s, dt, 100);
            const double t = 0.5 * k;
            err = std::max(err, std::abs(s.density()(0, 0) - std::cos(t) * std::cos(t)));
        }
        out.push_back({"oracle rabi populations vs exact", err <= 1e-8, "max error " + sci(err) + " (limit 1e-8)"});
    }

    log("oracle: bath correlation series vs quadrature");
    {
        double worst = 0.0;
        for (double temp : {2.5, 5.0, 7.5, 10.0})
            for (const BrownianMode& mode : {BrownianMode{0.2, 2.0, 10.0}, BrownianMode{0.4, 2.0, 10.0}}) {
                const double beta = 1.0 / temp;
                const ExpSeries s = thermal_correlation_series(mode, beta, 8);
                const double c0 = std::abs(detail::correlation_quadrature(mode, beta, 0.0));
                for (double t = 0.0; t <= 10.0 + 1e-12; t += 0.5)
                    worst = std::max(worst, std::abs(s(t) - detail::correlation_quadrature(mode, beta, t)) / c0);
            }
        out.push_back({"oracle correlation series (8 poles) vs quadrature", worst <= 1e-4,
                       "max relative error " + sci(worst) + " (limit 1e-4)"});
    }

    log("oracle: half-line transform of an exponential");
    {
        TimeSeries ts;
        ts.dt = 0.01;
        const cplx gamma(1.0, -0.5);
        for (int i = 0; i <= 5000; ++i) ts.values.push_back(CMatrix::Constant(1, 1, std::exp(-gamma * ts.time(static_cast<std::size_t>(i)))));
        const auto grid = uniform_grid(-20.0, 20.0, 0.25);
        const Spectrum s = half_fourier(ts, grid);
        double err = 0.0;
        for (std::size_t k = 0; k < grid.size(); ++k)
            err = std::max(err, std::abs(s.values[k](0, 0) - 1.0 / (gamma - I_unit * grid[k])));
        out.push_back({"oracle half-line transform of exp(-gamma t)", err <= 1e-6,
                       "max error " + sci(err) + " (limit 1e-6)"});
    }
    return out;
}

inline AcceptanceReport run_acceptance(const RunConfig& c, const AcceptanceOptions& opt = {},
                                       const RunLog& log = RunLog{}) {
    using detail::rel_gap;
    using detail::sci;
    AcceptanceReport rep;
    auto add = [&](std::string name, bool ok, std::string detail) {
        rep.criteria.push_back({std::move(name), ok, std::move(detail)});
    };

    if (opt.physics) {
        const bool table1 = detail::is_table1_model(c);
        const std::vector<CurrentMethod> methods{CurrentMethod::direct, CurrentMethod::indirect_freq,
                                                 CurrentMethod::indirect_time};
        const std::string ref_label = c.sweep.ratios.empty() ? c.reservoirs.front().label : c.sweep.reference;
        std::string matrix = "ratio            direct           indirect_freq    indirect_time    (J_" + ref_label +
                             " [V^2], tier " + std::to_string(c.solver.tier) + ")\n";

        for (const auto& p : operating_points(c)) {
            const std::string at = p.ratio ? " ratio=" + detail::fmt_double(*p.ratio) : "";
            const CurrentResult main = evaluate_currents(c, solve_steady(c, p, c.solver.tier, log), methods, log);
            std::optional<CurrentResult> next;
            if (c.solver.tier_sweep)
                next = evaluate_currents(c, solve_steady(c, p, c.solver.tier + 1, log), methods, log);
            std::vector<const CurrentResult*> runs{&main};
            if (next) runs.push_back(&*next);

            auto value = [&](const CurrentResult& r, const std::string& res, CurrentMethod m) { return r.find(res, m)->value; };
            char line[160];
            std::snprintf(line, sizeof line, "%-16s %-16.8e %-16.8e %-16.8e\n",
                          p.ratio ? detail::fmt_double(*p.ratio).c_str() : "-",
                          value(main, ref_label, CurrentMethod::direct), value(main, ref_label, CurrentMethod::indirect_freq),
                          value(main, ref_label, CurrentMethod::indirect_time));
            matrix += line;

            if (table1 && p.ratio) {
                for (const auto& r : detail::table1_reference()) {
                    if (std::abs(r.ratio - *p.ratio) > 1e-12) continue;
                    const double jd = value(main, "L", CurrentMethod::direct);
                    const double ji = value(main, "L", CurrentMethod::indirect_freq);
                    if (r.direct == 0.0) {
                        add("reference direct J_L" + at, std::abs(jd) <= opt.equilibrium_tol,
                            "|J_L| = " + sci(std::abs(jd)) + " (limit " + sci(opt.equilibrium_tol, 0) + ")");
                        add("reference indirect J_L" + at, std::abs(ji) <= opt.equilibrium_tol,
                            "|J_L| = " + sci(std::abs(ji)) + " (limit " + sci(opt.equilibrium_tol, 0) + ")");
                    } else {
                        const double gd = std::abs(jd - r.direct) / std::abs(r.direct);
                        const double gi = std::abs(ji - r.indirect) / std::abs(r.indirect);
                        add("reference direct J_L" + at, gd <= opt.reference_tol,
                            sci(jd) + " vs " + sci(r.direct) + ", relative gap " + sci(gd, 2));
                        add("reference indirect J_L" + at, gi <= opt.reference_tol,
                            sci(ji) + " vs " + sci(r.indirect) + ", relative gap " + sci(gi, 2));
                    }
                }
            }

            double gap = 0.0, equiv = 0.0;
            for (const auto& r : p.reservoirs) {
                gap = std::max(gap, rel_gap(value(main, r.label, CurrentMethod::direct), value(main, r.label, CurrentMethod::indirect_freq)));
                equiv = std::max(equiv, rel_gap(value(main, r.label, CurrentMethod::indirect_freq), value(main, r.label, CurrentMethod::indirect_time)));
            }
            add("direct vs indirect current" + at, gap <= opt.route_gap_tol,
                "max relative gap " + sci(gap, 2) + " (limit " + sci(opt.route_gap_tol, 0) + ")");
            add("frequency vs time route" + at, equiv <= opt.route_equiv_tol,
                "max relative gap " + sci(equiv, 2) + " (limit " + sci(opt.route_equiv_tol, 0) + ")");

            double cons = 0.0;
            for (const CurrentResult* r : runs) {
                for (CurrentMethod m : methods) {
                    double sum = 0.0;
                    for (const auto& res : p.reservoirs) sum += value(*r, res.label, m);
                    cons = std::max(cons, std::abs(sum));
                }
            }
            add("current conservation" + at, cons <= opt.conservation_tol,
                "max |sum_a J_a| = " + sci(cons) + " (limit " + sci(opt.conservation_tol, 0) + ")");

            if (p.equilibrium()) {
                double eq = 0.0;
                for (const auto& r : main.reports) eq = std::max(eq, std::abs(r.value));
                add("equilibrium null current" + at, eq <= opt.equilibrium_tol,
                    "max |J| = " + sci(eq) + " (limit " + sci(opt.equilibrium_tol, 0) + ")");
                std::vector<double> band;
                for (double w : frequency_grid(c))
                    if (std::abs(w) >= 0.1 - 1e-12 && std::abs(w) <= 10.0 + 1e-12) band.push_back(w);
                const Spectrum k = commutator_spectrum(*main.correlation, band, fourier_options(c));
                const Spectrum cs = c_spectrum(*main.correlation, band, fourier_options(c));
                const double beta = p.reservoirs.front().beta;
                double worst = 0.0;
                for (Eigen::Index v = 0; v < k.rows(); ++v)
                    for (Eigen::Index u = 0; u < k.cols(); ++u) {
                        double num = 0.0, den = 0.0;
                        for (std::size_t i = 0; i < band.size(); ++i) {
                            const cplx rhs = 2.0 * (-std::expm1(-beta * band[i])) * cs.values[i](v, u);
                            num = std::max(num, std::abs(k.values[i](v, u) - rhs));
                            den = std::max(den, std::abs(rhs));
                        }
                        if (den > 0.0) worst = std::max(worst, num / den);
                    }
                add("equilibrium detailed balance" + at, worst <= opt.kms_tol,
                    "max relative deviation " + sci(worst, 2) + " over 0.1 <= |w| <= 10 (limit " + sci(opt.kms_tol, 0) + ")");
            }

            double rel = 0.0;
            for (const CurrentResult* r : runs) {
                for (const auto& e : expectation_relation_check(*r->steady.model, r->steady.state, p.reservoirs))
                    rel = std::max(rel, e.gap);
            }
            add("first-tier bath expectation relation" + at, rel <= opt.relation_tol,
                "max relative gap " + sci(rel, 2) + " (limit " + sci(opt.relation_tol, 0) + ")");

            if (next) {
                double drift = 0.0;
                std::string where;
                for (const auto& r : main.reports) {
                    const double d = rel_gap(r.value, value(*next, r.reservoir, r.method));
                    if (d >= drift) {
                        drift = d;
                        where = std::string(to_string(r.method)) + " J_" + r.reservoir;
                    }
                }
                add("tier convergence " + std::to_string(c.solver.tier) + "->" + std::to_string(c.solver.tier + 1) + at,
                    drift < opt.tier_drift_tol,
                    "max relative drift " + sci(drift, 2) + " (" + where + ", limit " + sci(opt.tier_drift_tol, 0) + ")");
            }
        }
        rep.matrix = matrix;
    }
    if (opt.oracles) {
        auto o = oracle_criteria(log);
        rep.criteria.insert(rep.criteria.end(), o.begin(), o.end());
    }
    return rep;
}

}  // namespace qheat
