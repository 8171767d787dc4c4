#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/SparseLU>
#ifdef QHEAT_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#endif

#include "qheat/hierarchy.hpp"

namespace qheat {

// Thread count for generator products, from QHEAT_THREADS (default 1).
inline std::size_t worker_threads() {
    if (const char* env = std::getenv("QHEAT_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) return static_cast<std::size_t>(std::min<long>(v, 256));
    }
    return 1;
}

// Time derivative by direct block algebra; reference path for the sparse
// generator used by the integrators.
inline HierarchyState rhs(const HierarchyModel& m, const HierarchyState& s) {
    if (!s.conforms_to(m)) throw std::invalid_argument("rhs: state does not conform to the model");
    const auto& table = m.table();
    const auto& groups = m.groups();
    const CMatrix& h = m.system().hamiltonian;
    HierarchyState out(m.dim(), m.ado_count());
    for (std::size_t i = 0; i < table.size(); ++i) {
        auto occ = table.occupation(i);
        const auto rho = s.ado(i);
        cplx decay = 0.0;
        for (std::size_t g = 0; g < groups.size(); ++g) decay += static_cast<double>(occ[g]) * groups[g].rate;
        CMatrix d = -I_unit * commutator(h, rho) - decay * rho;
        for (std::size_t g = 0; g < groups.size(); ++g) {
            const CMatrix& q = m.system().modes[groups[g].mode];
            if (auto j = table.up(i, g); j != AdoTable::none) d -= I_unit * commutator(q, s.ado(static_cast<std::size_t>(j)));
            if (auto j = table.down(i, g); j != AdoTable::none) {
                const auto lower = s.ado(static_cast<std::size_t>(j));
                d -= I_unit * static_cast<double>(occ[g]) * (groups[g].amplitude * q * lower - groups[g].backward * lower * q);
            }
        }
        out.ado(i) = d;
    }
    return out;
}

namespace detail {

// y = G x, rows split across threads; each row is summed in storage order so
// the result does not depend on the thread count.
inline void apply_generator(const SparseGenerator& g, const CVector& x, CVector& y, std::size_t threads) {
    const std::ptrdiff_t n = g.rows();
    y.resize(n);
    auto work = [&](std::ptrdiff_t begin, std::ptrdiff_t end) {
        const auto* outer = g.outerIndexPtr();
        const auto* inner = g.innerIndexPtr();
        const auto* val = g.valuePtr();
        for (std::ptrdiff_t r = begin; r < end; ++r) {
            cplx acc = 0.0;
            for (auto p = outer[r]; p < outer[r + 1]; ++p) acc += val[p] * x[inner[p]];
            y[r] = acc;
        }
    };
    if (threads <= 1 || n < 4096) {
        work(0, n);
        return;
    }
    std::vector<std::jthread> pool;
    const std::ptrdiff_t chunk = (n + static_cast<std::ptrdiff_t>(threads) - 1) / static_cast<std::ptrdiff_t>(threads);
    for (std::ptrdiff_t b = 0; b < n; b += chunk) pool.emplace_back(work, b, std::min(n, b + chunk));
}

}  // namespace detail

struct PropagationOptions {
    double stability_bound = 2.5;
    double divergence_threshold = 1e6;
};

// Step size meeting the stability bound, no larger than dt_max and dividing
// `interval` (if given) into whole steps.
inline double stable_time_step(const HierarchyModel& m, double dt_max, std::optional<double> interval = std::nullopt,
                               const PropagationOptions& opt = {}) {
    double dt = std::min(dt_max, opt.stability_bound / std::max(m.stiffness(), 1e-300));
    if (interval) {
        const double steps = std::ceil(*interval / dt - 1e-9);
        dt = *interval / std::max(1.0, steps);
    }
    return dt;
}

// Classical RK4 with the sparse generator.
inline void propagate_in_place(const HierarchyModel& m, HierarchyState& s, double dt, std::size_t n_steps,
                               const PropagationOptions& opt = {}) {
    if (!s.conforms_to(m)) throw std::invalid_argument("propagate: state does not conform to the model");
    if (!(dt > 0.0)) throw std::invalid_argument("propagate: dt must be > 0");
    if (dt * m.stiffness() > opt.stability_bound)
        throw std::invalid_argument("propagate: dt = " + std::to_string(dt) + " violates the stability bound (dt * " +
                                    std::to_string(m.stiffness()) + " > " + std::to_string(opt.stability_bound) +
                                    "); use stable_time_step()");
    const auto& g = m.generator();
    const std::size_t threads = worker_threads();
    CVector& y = s.data();
    CVector k1, k2, k3, k4, tmp(y.size());
    for (std::size_t step = 0; step < n_steps; ++step) {
        detail::apply_generator(g, y, k1, threads);
        tmp = y + (0.5 * dt) * k1;
        detail::apply_generator(g, tmp, k2, threads);
        tmp = y + (0.5 * dt) * k2;
        detail::apply_generator(g, tmp, k3, threads);
        tmp = y + dt * k3;
        detail::apply_generator(g, tmp, k4, threads);
        y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        const double peak = y.cwiseAbs().maxCoeff();
        if (!(peak <= opt.divergence_threshold))
            throw DivergenceError("propagate: ADO norm " + std::to_string(peak) + " exceeded " +
                                  std::to_string(opt.divergence_threshold) + " after " + std::to_string(step + 1) +
                                  " steps");
    }
}

inline HierarchyState propagate(const HierarchyModel& m, HierarchyState s, double dt, std::size_t n_steps,
                                const PropagationOptions& opt = {}) {
    propagate_in_place(m, s, dt, n_steps, opt);
    return s;
}

// ||G x||_max / ||x||_max
inline double residual(const HierarchyModel& m, const HierarchyState& s) {
    CVector r;
    detail::apply_generator(m.generator(), s.data(), r, worker_threads());
    const double scale = s.data().cwiseAbs().maxCoeff();
    return scale > 0.0 ? r.cwiseAbs().maxCoeff() / scale : r.cwiseAbs().maxCoeff();
}

enum class SteadyMethod { direct, propagate };

struct SteadyStateOptions {
    SteadyMethod method = SteadyMethod::direct;
    double tol = 1e-10;
    double dt = 0.01;             // upper bound; reduced to the stability limit
    double max_time = 5000.0;     // propagation horizon before giving up
    double check_interval = 1.0;  // residual checks every this much time
    std::size_t stagnation_checks = 50;
};

namespace detail {

inline SparseGenerator with_trace_row(const HierarchyModel& m) {
    const SparseGenerator& g = m.generator();
    const auto d = static_cast<std::ptrdiff_t>(m.dim());
    std::vector<Eigen::Triplet<cplx, std::ptrdiff_t>> trip;
    trip.reserve(static_cast<std::size_t>(g.nonZeros()) + static_cast<std::size_t>(d));
    for (std::ptrdiff_t r = 1; r < g.outerSize(); ++r)
        for (SparseGenerator::InnerIterator it(g, r); it; ++it) trip.emplace_back(r, it.col(), it.value());
    for (std::ptrdiff_t i = 0; i < d; ++i) trip.emplace_back(0, i * d + i, 1.0);
    SparseGenerator a(g.rows(), g.cols());
    a.setFromTriplets(trip.begin(), trip.end());
    return a;
}

using ColSparse = Eigen::SparseMatrix<cplx, Eigen::ColMajor, int>;

inline ColSparse to_solver_matrix(const SparseGenerator& a) {
    if (a.rows() > std::numeric_limits<int>::max() / 2)
        throw std::length_error("sparse system too large for the direct solver");
    ColSparse c(static_cast<int>(a.rows()), static_cast<int>(a.cols()));
    std::vector<Eigen::Triplet<cplx, int>> trip;
    trip.reserve(static_cast<std::size_t>(a.nonZeros()));
    for (std::ptrdiff_t r = 0; r < a.outerSize(); ++r)
        for (SparseGenerator::InnerIterator it(a, r); it; ++it)
            trip.emplace_back(static_cast<int>(r), static_cast<int>(it.col()), it.value());
    c.setFromTriplets(trip.begin(), trip.end());
    c.makeCompressed();
    return c;
}

class SparseSolver {
  public:
    explicit SparseSolver(const SparseGenerator& a) : mat_(to_solver_matrix(a)) {
        lu_.analyzePattern(mat_);
        lu_.factorize(mat_);
        if (lu_.info() != Eigen::Success) throw NumericalError("sparse LU factorization failed");
    }
    CVector solve(const CVector& b) {
        CVector x = lu_.solve(b);
        if (lu_.info() != Eigen::Success) throw NumericalError("sparse LU solve failed");
        return x;
    }

  private:
    ColSparse mat_;
#ifdef QHEAT_HAVE_UMFPACK
    Eigen::UmfPackLU<ColSparse> lu_;
#else
    Eigen::SparseLU<ColSparse, Eigen::COLAMDOrdering<int>> lu_;
#endif
};

}  // namespace detail

inline HierarchyState steady_state(const HierarchyModel& m, const HierarchyState& initial,
                                   const SteadyStateOptions& opt = {}) {
    if (!(opt.tol > 0.0)) throw std::invalid_argument("steady_state: tol must be > 0");
    if (!initial.conforms_to(m)) throw std::invalid_argument("steady_state: initial state does not conform");
    if (opt.method == SteadyMethod::direct) {
        detail::SparseSolver solver(detail::with_trace_row(m));
        CVector b = CVector::Zero(static_cast<Eigen::Index>(m.state_size()));
        b[0] = 1.0;
        HierarchyState s(m.dim(), solver.solve(b));
        const double r = residual(m, s);
        if (!(r <= opt.tol))
            throw NonConvergenceError("steady_state: direct solve residual " + std::to_string(r) + " above tol", r);
        return s;
    }

    HierarchyState s = initial;
    const double dt = stable_time_step(m, opt.dt, opt.check_interval);
    const auto steps = static_cast<std::size_t>(std::llround(opt.check_interval / dt));
    double best = residual(m, s);
    std::size_t since_best = 0;
    for (double t = 0.0; t < opt.max_time; t += opt.check_interval) {
        propagate_in_place(m, s, dt, steps);
        const double r = residual(m, s);
        if (r <= opt.tol) return s;
        if (r < 0.999 * best) {
            best = r;
            since_best = 0;
        } else if (++since_best >= opt.stagnation_checks) {
            throw NonConvergenceError("steady_state: residual stagnated at " + std::to_string(r), r);
        }
    }
    const double r = residual(m, s);
    throw NonConvergenceError("steady_state: no convergence within horizon " + std::to_string(opt.max_time) +
                                  " (residual " + std::to_string(r) + ")",
                              r);
}

inline cplx expectation(const HierarchyState& s, const CMatrix& op) {
    if (op.rows() != static_cast<Eigen::Index>(s.dim()) || op.cols() != op.rows())
        throw std::invalid_argument("expectation: operator dimension mismatch");
    return (op * s.ado(0)).trace();
}

// First-tier ADO of every original channel, tr_B(f_c rho_T), at a stationary
// state. Unfused channels read their ADO directly; members of fused groups
// come from the probe layer
//
//   0 = G_probe y - i (a_c Q rho_m - b_c rho_m Q),   m + e_g in the table,
//
// whose level-0 block is the requested ADO.
inline std::vector<CMatrix> channel_first_tier(const HierarchyModel& m, const HierarchyState& s) {
    if (!s.conforms_to(m)) throw std::invalid_argument("channel_first_tier: state does not conform");
    const auto& table = m.table();
    const auto& groups = m.groups();
    const auto d = static_cast<Eigen::Index>(m.dim());
    std::vector<CMatrix> out(m.channels().size(), CMatrix::Zero(d, d));
    const std::size_t k = groups.size();
    std::vector<bool> thermal;
    for (const auto& gr : groups) thermal.push_back(gr.thermal);
    const auto rates = m.group_rates();
    // The probe system depends on the group only through (rate, thermal flag),
    // so groups on different modes share one factorization.
    struct Probe {
        cplx rate;
        bool thermal;
        AdoTable table;
        std::unique_ptr<detail::SparseSolver> solver;
    };
    std::vector<Probe> probes;
    for (std::size_t g = 0; g < k; ++g) {
        if (table.tier() == 0 || (groups[g].thermal && table.thermal_cap() == 0)) continue;
        std::vector<std::uint16_t> occ(k, 0);
        occ[g] = 1;
        const auto first = table.find(occ);
        if (groups[g].members.size() == 1) {
            if (first) out[groups[g].members[0]] = s.ado(*first);
            continue;
        }
        Probe* probe = nullptr;
        for (auto& p : probes)
            if (p.rate == groups[g].rate && p.thermal == groups[g].thermal) probe = &p;
        if (!probe) {
            const std::size_t cap = table.thermal_cap() - (groups[g].thermal ? 1 : 0);
            AdoTable t(thermal, table.tier() - 1, cap, std::numeric_limits<std::size_t>::max());
            auto solver = std::make_unique<detail::SparseSolver>(
                detail::assemble_generator(t, m.liouville(), m.group_superops(), rates, groups[g].rate,
                                           m.options().terminator));
            probes.push_back({groups[g].rate, groups[g].thermal, std::move(t), std::move(solver)});
            probe = &probes.back();
        }
        const CMatrix& q = m.system().modes[groups[g].mode];
        for (std::size_t c : groups[g].members) {
            const auto& ch = m.channels()[c];
            CVector src(static_cast<Eigen::Index>(probe->table.size()) * d * d);
            for (std::size_t i = 0; i < probe->table.size(); ++i) {
                const auto j = table.find(probe->table.occupation(i));
                if (!j) throw std::logic_error("channel_first_tier: probe index outside the main table");
                const auto rho = s.ado(*j);
                CMatrix v = I_unit * (ch.amplitude * q * rho - ch.backward * rho * q);
                src.segment(static_cast<Eigen::Index>(i) * d * d, d * d) = Eigen::Map<const CVector>(v.data(), d * d);
            }
            const CVector y = probe->solver->solve(src);
            out[c] = Eigen::Map<const CMatrix>(y.data(), d, d);
        }
    }
    return out;
}

// <F_{alpha u}> as the sum of first-tier traces over the channels of (alpha, u).
inline cplx bath_mode_expectation(const HierarchyModel& m, const std::vector<CMatrix>& first_tier,
                                  const std::string& reservoir, std::size_t mode) {
    cplx sum = 0.0;
    for (std::size_t c = 0; c < m.channels().size(); ++c)
        if (m.channels()[c].reservoir == reservoir && m.channels()[c].mode == mode) sum += first_tier[c].trace();
    return sum;
}

inline cplx bath_mode_expectation(const HierarchyModel& m, const HierarchyState& s, const std::string& reservoir,
                                  std::size_t mode) {
    return bath_mode_expectation(m, channel_first_tier(m, s), reservoir, mode);
}

}  // namespace qheat
