// Full acceptance run of the two-site benchmark preset. Prints the current
// matrix and one PASS/FAIL line per criterion; exits nonzero on any failure.

#include <iostream>

#include "qheat/acceptance.hpp"

int main() {
    try {
        const qheat::RunLog log(&std::cerr);
        const auto report = qheat::run_acceptance(qheat::table1_preset(), {}, log);
        report.print(std::cout);
        return report.passed() ? 0 : 1;
    } catch (const std::exception& e) {
        std::cout << "FAIL run: " << e.what() << "\n";
        return 1;
    }
}
