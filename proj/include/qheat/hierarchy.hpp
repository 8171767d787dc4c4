#pragma once

// Hierarchy bookkeeping: system description, dissipaton channels, the ADO
// index table and the assembled sparse generator.
//
// Equation of motion for ADO n (groups g, see below):
//
//   d rho_n/dt = -i[H_S, rho_n] - (sum_g n_g gamma_g) rho_n
//                - i sum_g [Q_g, rho_{n+e_g}]
//                - i sum_g n_g (A_g Q_g rho_{n-e_g} - B_g rho_{n-e_g} Q_g)
//
// with A_g the forward amplitude and B_g the coefficient of e^{-gamma_g t} in
// the conjugate correlation. Channels sharing the same mode and rate (for
// instance the spectral poles of two reservoirs with identical kernels) are
// fused into one group with summed amplitudes; reservoir-resolved first-tier
// quantities are recovered in dynamics.hpp. ADOs beyond the tier are zero.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qheat/bath.hpp"
#include "qheat/linalg.hpp"

namespace qheat {

struct SystemSpec {
    CMatrix hamiltonian;
    std::vector<CMatrix> modes;

    std::size_t dim() const noexcept { return static_cast<std::size_t>(hamiltonian.rows()); }

    void validate() const {
        if (hamiltonian.rows() < 2 || hamiltonian.rows() != hamiltonian.cols())
            throw std::invalid_argument("SystemSpec: Hamiltonian must be square with dim >= 2");
        if (!is_hermitian(hamiltonian)) throw std::invalid_argument("SystemSpec: Hamiltonian is not Hermitian");
        for (std::size_t u = 0; u < modes.size(); ++u) {
            if (modes[u].rows() != hamiltonian.rows() || modes[u].cols() != hamiltonian.cols())
                throw std::invalid_argument("SystemSpec: mode " + std::to_string(u + 1) + " has wrong dimension");
            if (!is_hermitian(modes[u]))
                throw std::invalid_argument("SystemSpec: mode " + std::to_string(u + 1) + " is not Hermitian");
        }
    }
};

struct DissipatonChannel {
    std::string reservoir;
    std::size_t mode = 0;
    cplx amplitude;
    cplx backward;
    cplx rate;
    TermOrigin origin = TermOrigin::spectral_pole;
};

inline std::vector<DissipatonChannel> make_channels(const ReservoirSpec& r, std::size_t n_poles,
                                                    BoseScheme scheme = BoseScheme::pade) {
    std::vector<DissipatonChannel> out;
    for (const auto& c : r.couplings) {
        const ExpSeries s = thermal_correlation_series(c.kernel, r.beta, n_poles, scheme);
        const auto back = backward_amplitudes(s);
        for (std::size_t k = 0; k < s.terms.size(); ++k)
            out.push_back({r.label, c.mode, s.terms[k].amplitude, back[k], s.terms[k].rate, s.terms[k].origin});
    }
    return out;
}

inline std::vector<DissipatonChannel> make_channels(std::span<const ReservoirSpec> reservoirs, std::size_t n_poles,
                                                    BoseScheme scheme = BoseScheme::pade) {
    std::vector<DissipatonChannel> out;
    for (const auto& r : reservoirs) {
        auto c = make_channels(r, n_poles, scheme);
        out.insert(out.end(), c.begin(), c.end());
    }
    return out;
}

struct ChannelGroup {
    std::size_t mode = 0;
    cplx rate;
    cplx amplitude;
    cplx backward;
    bool thermal = false;
    std::vector<std::size_t> members;  // indices into the channel list
};

struct HierarchyOptions {
    std::size_t tier = 0;
    // Cap on the summed occupation of Bose-function pole groups; unset = tier.
    std::optional<std::size_t> thermal_tier;
    std::size_t max_ados = 2'000'000;
    bool fuse_channels = true;
    // Replace each ADO just beyond the truncation by its adiabatic estimate
    // rho_{n+e_g} ~ (sum gamma - L_S)^-1 (n_g + 1) D_g rho_n instead of zero.
    bool terminator = false;
};

// ADO multi-indices with sum(n) <= tier and sum over thermal groups <= cap,
// ordered by level. Neighbour links n +- e_g are precomputed.
class AdoTable {
  public:
    static constexpr std::int64_t none = -1;

    AdoTable() = default;

    AdoTable(std::vector<bool> thermal, std::size_t tier, std::size_t thermal_cap, std::size_t max_ados)
        : thermal_(std::move(thermal)), tier_(tier), cap_(std::min(thermal_cap, tier)) {
        const std::size_t k = thermal_.size();
        const double count = count_indices();
        if (count > static_cast<double>(max_ados))
            throw std::length_error("hierarchy too large: " + std::to_string(static_cast<long double>(count)) +
                                    " ADOs for " + std::to_string(k) + " channels at tier " + std::to_string(tier) +
                                    " exceeds the cap of " + std::to_string(max_ados) +
                                    "; lower the tier, the thermal tier or the number of Bose poles");
        std::vector<std::uint16_t> cur(k, 0);
        for (std::size_t level = 0; level <= tier_; ++level) enumerate(cur, 0, level, 0);
        const std::size_t n = size();
        up_.assign(n * k, none);
        down_.assign(n * k, none);
        level_.resize(n);
        std::vector<std::uint16_t> tmp(k);
        for (std::size_t i = 0; i < n; ++i) {
            auto occ = occupation(i);
            level_[i] = static_cast<std::size_t>(std::accumulate(occ.begin(), occ.end(), 0));
            std::copy(occ.begin(), occ.end(), tmp.begin());
            for (std::size_t g = 0; g < k; ++g) {
                ++tmp[g];
                if (auto j = find(tmp)) up_[i * k + g] = static_cast<std::int64_t>(*j);
                tmp[g] -= 2;
                if (occ[g] > 0)
                    if (auto j = find(tmp)) down_[i * k + g] = static_cast<std::int64_t>(*j);
                ++tmp[g];
            }
        }
    }

    std::size_t size() const noexcept { return thermal_.empty() ? index_.size() : occ_.size() / thermal_.size(); }
    std::size_t channels() const noexcept { return thermal_.size(); }
    std::size_t tier() const noexcept { return tier_; }
    std::size_t thermal_cap() const noexcept { return cap_; }
    std::size_t level(std::size_t i) const { return level_[i]; }

    std::span<const std::uint16_t> occupation(std::size_t i) const {
        return {occ_.data() + i * thermal_.size(), thermal_.size()};
    }

    std::int64_t up(std::size_t i, std::size_t g) const { return up_[i * thermal_.size() + g]; }
    std::int64_t down(std::size_t i, std::size_t g) const { return down_[i * thermal_.size() + g]; }

    std::optional<std::size_t> find(std::span<const std::uint16_t> occ) const {
        auto it = index_.find(key(occ));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

  private:
    static std::string key(std::span<const std::uint16_t> occ) {
        return std::string(reinterpret_cast<const char*>(occ.data()), occ.size() * sizeof(std::uint16_t));
    }

    double count_indices() const {
        const std::size_t kt = static_cast<std::size_t>(std::count(thermal_.begin(), thermal_.end(), true));
        const std::size_t ks = thermal_.size() - kt;
        auto compositions = [](std::size_t total, std::size_t parts) -> double {
            if (parts == 0) return total == 0 ? 1.0 : 0.0;
            // binomial(total + parts - 1, parts - 1)
            double c = 1.0;
            for (std::size_t i = 1; i < parts; ++i) c = c * static_cast<double>(total + i) / static_cast<double>(i);
            return c;
        };
        double count = 0.0;
        for (std::size_t t = 0; t <= cap_; ++t)
            for (std::size_t s = 0; s + t <= tier_; ++s) count += compositions(s, ks) * compositions(t, kt);
        return count;
    }

    void enumerate(std::vector<std::uint16_t>& cur, std::size_t pos, std::size_t remaining, std::size_t thermal_used) {
        if (pos == cur.size()) {
            if (remaining == 0) {
                index_.emplace(key(cur), index_.size());
                occ_.insert(occ_.end(), cur.begin(), cur.end());
            }
            return;
        }
        for (std::size_t n = remaining + 1; n-- > 0;) {
            const std::size_t t_used = thermal_used + (thermal_[pos] ? n : 0);
            if (t_used > cap_) continue;
            cur[pos] = static_cast<std::uint16_t>(n);
            enumerate(cur, pos + 1, remaining - n, t_used);
        }
        cur[pos] = 0;
    }

    std::vector<bool> thermal_;
    std::size_t tier_ = 0;
    std::size_t cap_ = 0;
    std::vector<std::uint16_t> occ_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::int64_t> up_, down_;
    std::vector<std::size_t> level_;

    friend class HierarchyModel;
};

namespace detail {

struct GroupSuperops {
    CMatrix up;    // -i (Q x - x Q)
    CMatrix down;  // -i (A Q x - B x Q), without the n_g factor
};

// Sparse generator on an index table. extra_decay is added to every ADO's
// damping (used by the reservoir-resolved probe layer).
inline SparseGenerator assemble_generator(const AdoTable& table, const CMatrix& liouville,
                                          std::span<const GroupSuperops> ops, std::span<const cplx> rates,
                                          cplx extra_decay = 0.0, bool terminator = false) {
    const auto d2 = static_cast<std::ptrdiff_t>(liouville.rows());
    const std::size_t k = table.channels();
    const std::size_t n = table.size();
    std::vector<Eigen::Triplet<cplx, std::ptrdiff_t>> trip;
    trip.reserve(n * static_cast<std::size_t>(d2) * (static_cast<std::size_t>(d2) + 3 * k));
    auto add_block = [&](std::size_t row_ado, std::size_t col_ado, const CMatrix& block, cplx scale) {
        for (std::ptrdiff_t c = 0; c < d2; ++c)
            for (std::ptrdiff_t r = 0; r < d2; ++r) {
                const cplx v = scale * block(r, c);
                if (v != cplx{})
                    trip.emplace_back(static_cast<std::ptrdiff_t>(row_ado) * d2 + r,
                                      static_cast<std::ptrdiff_t>(col_ado) * d2 + c, v);
            }
    };
    const CMatrix eye = CMatrix::Identity(d2, d2);
    for (std::size_t i = 0; i < n; ++i) {
        auto occ = table.occupation(i);
        cplx decay = extra_decay;
        for (std::size_t g = 0; g < k; ++g) decay += static_cast<double>(occ[g]) * rates[g];
        CMatrix diag = liouville - decay * eye;
        for (std::size_t g = 0; g < k; ++g) {
            if (!terminator || table.up(i, g) != AdoTable::none) continue;
            const CMatrix resolvent = ((decay + rates[g]) * eye - liouville).inverse();
            diag += static_cast<double>(occ[g] + 1) * ops[g].up * resolvent * ops[g].down;
        }
        add_block(i, i, diag, 1.0);
        for (std::size_t g = 0; g < k; ++g) {
            if (auto j = table.up(i, g); j != AdoTable::none) add_block(i, static_cast<std::size_t>(j), ops[g].up, 1.0);
            if (auto j = table.down(i, g); j != AdoTable::none)
                add_block(i, static_cast<std::size_t>(j), ops[g].down, static_cast<double>(occ[g]));
        }
    }
    SparseGenerator m(static_cast<std::ptrdiff_t>(n) * d2, static_cast<std::ptrdiff_t>(n) * d2);
    m.setFromTriplets(trip.begin(), trip.end());
    m.makeCompressed();
    return m;
}

}  // namespace detail

class HierarchyModel {
  public:
    const SystemSpec& system() const noexcept { return system_; }
    std::size_t dim() const noexcept { return system_.dim(); }
    std::size_t ado_count() const noexcept { return table_.size(); }
    std::size_t state_size() const noexcept { return table_.size() * dim() * dim(); }
    std::size_t tier() const noexcept { return options_.tier; }
    const HierarchyOptions& options() const noexcept { return options_; }
    const std::vector<DissipatonChannel>& channels() const noexcept { return channels_; }
    const std::vector<ChannelGroup>& groups() const noexcept { return groups_; }
    const AdoTable& table() const noexcept { return table_; }
    const SparseGenerator& generator() const noexcept { return *generator_; }
    const CMatrix& liouville() const noexcept { return liouville_; }
    const std::vector<detail::GroupSuperops>& group_superops() const noexcept { return superops_; }
    std::vector<cplx> group_rates() const {
        std::vector<cplx> r;
        for (const auto& g : groups_) r.push_back(g.rate);
        return r;
    }

    // Group of the conjugate rate on the same mode (itself for real rates).
    std::size_t conjugate_group(std::size_t g) const { return conjugate_[g]; }

    // Largest ADO damping plus twice the spectral radius of H_S: the stiffness
    // proxy entering the explicit step-size bound.
    double stiffness() const noexcept { return stiffness_; }

    friend HierarchyModel build_hierarchy(SystemSpec, std::vector<DissipatonChannel>, HierarchyOptions);

  private:
    HierarchyModel() = default;

    SystemSpec system_;
    std::vector<DissipatonChannel> channels_;
    std::vector<ChannelGroup> groups_;
    std::vector<std::size_t> conjugate_;
    HierarchyOptions options_;
    AdoTable table_;
    CMatrix liouville_;
    std::vector<detail::GroupSuperops> superops_;
    std::shared_ptr<const SparseGenerator> generator_;
    double stiffness_ = 0.0;
};

inline HierarchyModel build_hierarchy(SystemSpec system, std::vector<DissipatonChannel> channels,
                                      HierarchyOptions options) {
    system.validate();
    HierarchyModel m;
    for (const auto& c : channels) {
        if (c.mode >= system.modes.size())
            throw std::invalid_argument("build_hierarchy: channel of reservoir '" + c.reservoir +
                                        "' refers to missing mode " + std::to_string(c.mode + 1));
        if (!(c.rate.real() > 0.0)) throw std::invalid_argument("build_hierarchy: channel rate needs Re(gamma) > 0");
    }

    auto same_rate = [](cplx a, cplx b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); };
    for (std::size_t i = 0; i < channels.size(); ++i) {
        const auto& c = channels[i];
        if (c.amplitude == cplx{} && c.backward == cplx{}) continue;
        ChannelGroup* target = nullptr;
        if (options.fuse_channels)
            for (auto& g : m.groups_)
                if (g.mode == c.mode && same_rate(g.rate, c.rate) &&
                    g.thermal == (c.origin == TermOrigin::thermal_pole))
                    target = &g;
        if (!target) {
            m.groups_.push_back({c.mode, c.rate, 0.0, 0.0, c.origin == TermOrigin::thermal_pole, {}});
            target = &m.groups_.back();
        }
        target->amplitude += c.amplitude;
        target->backward += c.backward;
        target->members.push_back(i);
    }

    m.conjugate_.resize(m.groups_.size());
    for (std::size_t g = 0; g < m.groups_.size(); ++g) {
        m.conjugate_[g] = g;
        for (std::size_t h = 0; h < m.groups_.size(); ++h)
            if (m.groups_[h].mode == m.groups_[g].mode && same_rate(m.groups_[h].rate, std::conj(m.groups_[g].rate)) &&
                m.groups_[h].thermal == m.groups_[g].thermal)
                m.conjugate_[g] = h;
    }

    std::vector<bool> thermal;
    for (const auto& g : m.groups_) thermal.push_back(g.thermal);
    const std::size_t cap = options.thermal_tier.value_or(options.tier);
    m.table_ = AdoTable(thermal, options.tier, cap, options.max_ados);

    const CMatrix& h = system.hamiltonian;
    m.liouville_ = -I_unit * (left_superop(h) - right_superop(h));
    for (const auto& g : m.groups_) {
        const CMatrix& q = system.modes[g.mode];
        m.superops_.push_back({-I_unit * (left_superop(q) - right_superop(q)),
                               -I_unit * (g.amplitude * left_superop(q) - g.backward * right_superop(q))});
    }
    const auto rates = m.group_rates();
    m.generator_ = std::make_shared<const SparseGenerator>(
        detail::assemble_generator(m.table_, m.liouville_, m.superops_, rates, 0.0, options.terminator));

    double decay = 0.0;
    for (std::size_t i = 0; i < m.table_.size(); ++i) {
        auto occ = m.table_.occupation(i);
        cplx s = 0.0;
        for (std::size_t g = 0; g < occ.size(); ++g) s += static_cast<double>(occ[g]) * rates[g];
        decay = std::max(decay, std::abs(s));
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
    m.stiffness_ = decay + 2.0 * es.eigenvalues().cwiseAbs().maxCoeff();

    m.system_ = std::move(system);
    m.channels_ = std::move(channels);
    m.options_ = options;
    return m;
}

// ADO vector: every d x d block stored column-major, level-0 first.
class HierarchyState {
  public:
    HierarchyState() = default;
    HierarchyState(std::size_t dim, std::size_t n_ados) : dim_(dim), data_(CVector::Zero(static_cast<Eigen::Index>(dim * dim * n_ados))) {}
    HierarchyState(std::size_t dim, CVector data) : dim_(dim), data_(std::move(data)) {
        if (dim == 0 || data_.size() % static_cast<Eigen::Index>(dim * dim) != 0)
            throw std::invalid_argument("HierarchyState: data size is not a multiple of dim^2");
    }

    static HierarchyState with_density(const HierarchyModel& m, const CMatrix& rho) {
        if (rho.rows() != static_cast<Eigen::Index>(m.dim()) || rho.cols() != rho.rows())
            throw std::invalid_argument("HierarchyState: density matrix has wrong dimension");
        HierarchyState s(m.dim(), m.ado_count());
        s.ado(0) = rho;
        return s;
    }

    static HierarchyState maximally_mixed(const HierarchyModel& m) {
        const auto d = static_cast<Eigen::Index>(m.dim());
        return with_density(m, CMatrix::Identity(d, d) / static_cast<double>(d));
    }

    std::size_t dim() const noexcept { return dim_; }
    std::size_t ado_count() const noexcept { return dim_ == 0 ? 0 : static_cast<std::size_t>(data_.size()) / (dim_ * dim_); }

    Eigen::Map<CMatrix> ado(std::size_t i) {
        const auto d = static_cast<Eigen::Index>(dim_);
        return Eigen::Map<CMatrix>(data_.data() + static_cast<Eigen::Index>(i) * d * d, d, d);
    }
    Eigen::Map<const CMatrix> ado(std::size_t i) const {
        const auto d = static_cast<Eigen::Index>(dim_);
        return Eigen::Map<const CMatrix>(data_.data() + static_cast<Eigen::Index>(i) * d * d, d, d);
    }
    CMatrix density() const { return ado(0); }

    CVector& data() noexcept { return data_; }
    const CVector& data() const noexcept { return data_; }

    bool conforms_to(const HierarchyModel& m) const noexcept {
        return dim_ == m.dim() && static_cast<std::size_t>(data_.size()) == m.state_size();
    }

  private:
    std::size_t dim_ = 0;
    CVector data_;
};

}  // namespace qheat
