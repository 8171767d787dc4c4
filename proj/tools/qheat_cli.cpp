// Command-line driver: steady states, heat currents, spectra and the
// acceptance suite for a config file or a built-in preset.
//
// Threads are taken from QHEAT_THREADS (default 1).

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qheat/qheat.hpp"

namespace {

struct Args {
    std::string config;
    std::string preset;
    std::size_t tier = 0;
    std::size_t pade = 0;
    std::string out;
    std::string methods = "direct,indirect_freq,indirect_time";
    std::string spectra = "C,chi_ss,chi_cross,chi_bathbath";
    std::vector<double> ratios;
    std::string steady_method;
    bool no_tier_sweep = false;
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');) {
        item = qheat::detail::trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

void add_common(CLI::App* sub, Args& a) {
    auto* cfg = sub->add_option("--config", a.config, "run configuration file");
    auto* pre = sub->add_option("--preset", a.preset, "built-in configuration (table1)");
    cfg->excludes(pre);
    sub->add_option("--tier", a.tier, "hierarchy depth L (overrides the config)")->check(CLI::PositiveNumber);
    sub->add_option("--pade", a.pade, "Bose poles per reservoir (overrides the config)");
    sub->add_option("--out", a.out, "output directory (overrides the config)");
    sub->add_option("--ratio", a.ratios, "restrict the sweep to these temperature ratios")->delimiter(',');
    sub->add_option("--steady-method", a.steady_method, "direct or propagate");
    sub->add_flag("--no-tier-sweep", a.no_tier_sweep, "skip the tier + 1 convergence run");
}

qheat::RunConfig resolve(const Args& a) {
    if (a.config.empty() && a.preset.empty()) throw std::invalid_argument("one of --config or --preset is required");
    qheat::RunConfig c = a.config.empty() ? qheat::preset(a.preset) : qheat::load_config(a.config);
    if (a.tier) c.solver.tier = a.tier;
    if (a.pade) c.solver.n_pade = a.pade;
    if (!a.out.empty()) c.output.dir = a.out;
    if (a.no_tier_sweep) c.solver.tier_sweep = false;
    if (!a.steady_method.empty()) {
        if (a.steady_method == "direct") c.solver.steady_method = qheat::SteadyMethod::direct;
        else if (a.steady_method == "propagate") c.solver.steady_method = qheat::SteadyMethod::propagate;
        else throw std::invalid_argument("unknown steady method '" + a.steady_method + "'");
    }
    if (!a.ratios.empty()) {
        if (c.sweep.ratios.empty()) throw std::invalid_argument("--ratio needs a [sweep] section in the config");
        c.sweep.ratios = a.ratios;
    }
    qheat::validate(c, a.config.empty() ? "preset " + a.preset : a.config);
    return c;
}

void save(const qheat::RunConfig& c, const std::string& name, const qheat::CsvTable& t, const qheat::RunLog& log) {
    qheat::ensure_dir(c.output.dir);
    const std::string path = qheat::join_path(c.output.dir, name);
    t.save(path);
    log("wrote ", path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Heat currents of open quantum systems coupled to Brownian baths"};
    app.require_subcommand(1);
    Args a;
    auto* steady = app.add_subcommand("steady", "steady state, bath expectations and tier convergence");
    auto* current = app.add_subcommand("current", "heat currents by the selected methods");
    auto* spectra = app.add_subcommand("spectra", "correlation and response spectra");
    auto* validate = app.add_subcommand("validate", "run the acceptance suite");
    for (auto* s : {steady, current, spectra, validate}) add_common(s, a);
    current->add_option("--methods", a.methods, "comma list of direct, indirect_freq, indirect_time");
    validate->add_option("--methods", a.methods, "accepted for symmetry; all methods are checked");
    spectra->add_option("--spectra", a.spectra, "comma list of C, chi_ss, chi_cross, chi_bathbath");

    CLI11_PARSE(app, argc, argv);

    const qheat::RunLog log(&std::cerr);
    try {
        const qheat::RunConfig c = resolve(a);
        log("configuration:\n", qheat::serialize(c));
        log("threads: ", qheat::worker_threads());

        if (steady->parsed()) {
            const auto t = qheat::run_steady(c, log);
            save(c, "steady_state.csv", t.state, log);
            save(c, "bath_expectation.csv", t.bath, log);
            save(c, "tier_convergence.csv", t.tiers, log);
        } else if (current->parsed()) {
            std::vector<qheat::CurrentMethod> methods;
            for (const auto& m : split_list(a.methods)) methods.push_back(qheat::parse_current_method(m));
            const auto t = qheat::run_current(c, methods, log);
            save(c, "currents.csv", t, log);
            t.write(std::cout);
        } else if (spectra->parsed()) {
            std::vector<qheat::SpectrumKind> kinds;
            for (const auto& k : split_list(a.spectra)) kinds.push_back(qheat::parse_spectrum_kind(k));
            for (const auto& t : qheat::run_spectra(c, kinds, log)) save(c, t.name, t.table, log);
        } else if (validate->parsed()) {
            const auto rep = qheat::run_acceptance(c, {}, log);
            rep.print(std::cout);
            return rep.passed() ? 0 : 1;
        }
    } catch (const qheat::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        if (validate->parsed()) std::cout << "FAIL configuration: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (validate->parsed()) std::cout << "FAIL run: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
