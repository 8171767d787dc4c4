#pragma once

#include "qheat/qheat.hpp"

namespace qheat::test {

// The two-site benchmark at a free temperature pair and a modest tier.
inline RunConfig two_site(double t_left, double t_right, std::size_t tier, bool terminator = false) {
    RunConfig c = table1_preset();
    c.reservoirs[0].temperature = t_left;
    c.reservoirs[1].temperature = t_right;
    c.sweep = {};
    c.solver.tier = tier;
    c.solver.terminator = terminator;
    return c;
}

inline HierarchyModel model_of(const RunConfig& c, bool fuse = true) {
    const auto specs = c.reservoir_specs();
    HierarchyOptions o = c.hierarchy_options();
    o.fuse_channels = fuse;
    return build_hierarchy(c.system(), make_channels(std::span<const ReservoirSpec>(specs), c.solver.n_pade), o);
}

}  // namespace qheat::test
