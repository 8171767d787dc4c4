// Minimal library usage: load a config, solve one operating point at a
// modest tier and print the heat current into each reservoir.

#include <iostream>

#include "qheat/qheat.hpp"

int main(int argc, char** argv) {
    try {
        qheat::RunConfig c = argc > 1 ? qheat::load_config(argv[1]) : qheat::table1_preset();
        c.solver.tier = 4;
        const qheat::OperatingPoint p = qheat::operating_points(c).front();
        const qheat::SteadyResult s = qheat::solve_steady(c, p, c.solver.tier);
        std::cout << qheat::describe(p) << "\n";
        for (const auto& r : p.reservoirs) {
            const auto j = qheat::heat_current_direct(*s.model, s.first_tier, r.label);
            std::cout << "J_" << r.label << " = " << j.value << " V^2\n";
        }
        std::cout << "steady-state residual " << s.residual << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
