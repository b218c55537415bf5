// bosedeph_cli.cpp — Command-line front end: run, preset, sweep, coeff-table
//
// Exit codes: 0 success, 2 invalid configuration or usage, 3 numerical failure.

#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "bosedeph/config.hpp"
#include "bosedeph/scenario.hpp"

namespace fs = std::filesystem;
using namespace bosedeph;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

struct Options {
    unsigned workers{std::max(1u, std::thread::hardware_concurrency())};
    std::string out{"out"};
    bool strict{false};
};

// A config argument is a file path or "preset:<name>".
ScenarioConfig resolve(const std::string& arg, const Options& o) {
    const std::string tag = "preset:";
    if (arg.rfind(tag, 0) == 0) return preset(arg.substr(tag.size()));
    std::vector<std::string> warnings;
    auto cfg = load_config(arg, ParseOptions{o.strict, &warnings});
    for (const auto& w : warnings) std::cerr << "warning: " << w << " (ignored; --strict rejects it)\n";
    return cfg;
}

void report(const ScenarioResult& r, const WrittenFiles& w) {
    std::cout << "wrote " << w.csv.string() << " (" << r.series.times.size() << " rows)\n"
              << "wrote " << w.json.string() << "\n";
    for (const auto& [name, s] : r.summary["dynamics"].items()) {
        if (s.contains("steady_state")) {
            const auto& ss = s["steady_state"];
            std::cout << "  " << name << ": steady state " << (ss["converged"].get<bool>() ? "converged" : "NOT converged")
                      << " at t = " << ss["t_reached"].get<double>() << ", residual " << ss["residual"].get<double>()
                      << "\n";
        }
        if (s.contains("truncation") && !s["truncation"]["ok"].get<bool>())
            std::cerr << "warning: " << name << " top pseudomode level population "
                      << s["truncation"]["max_top_level_population"].get<double>() << " exceeds "
                      << s["truncation"]["threshold"].get<double>() << "; increase pseudomode.n_max\n";
        if (s["diagnostics"]["positivity_enforced"].get<bool>() && !s["diagnostics"]["positivity_ok"].get<bool>())
            std::cerr << "warning: " << name << " minimum eigenvalue "
                      << s["diagnostics"]["min_eigenvalue"].get<double>() << " below tolerance\n";
    }
    for (const auto& p : r.summary["pairwise"]) {
        std::cout << "  " << p["a"].get<std::string>() << " vs " << p["b"].get<std::string>()
                  << ": fidelity " << p["fidelity"].get<double>() << ", trace distance "
                  << p["trace_distance"].get<double>() << " at t = " << p["t"].get<double>() << "\n";
    }
}

int run_one(const ScenarioConfig& cfg, const Options& o) {
    auto r = run_scenario(cfg);
    const auto w = write_outputs(r, o.out);
    report(r, w);
    return 0;
}

int run_coeff_table(const ScenarioConfig& cfg, const Options& o) {
    const auto ts = coeff_table(cfg.params, cfg.integrator);
    const fs::path path = fs::path(o.out) / (cfg.name + ".coeffs.csv");
    write_file_atomic(path, ts.to_csv());
    std::cout << "wrote " << path.string() << " (" << ts.times.size() << " rows)\n";
    return 0;
}

std::vector<double> parse_values(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.find_first_not_of(" \t") == std::string::npos) continue;
        std::size_t pos = 0;
        double x = 0;
        try {
            x = std::stod(item, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos == 0 || item.find_first_not_of(" \t", pos) != std::string::npos)
            throw ConfigError({"sweep value '" + item + "' is not a number"});
        v.push_back(x);
    }
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-site pseudospin boson dephasing simulator"};
    app.require_subcommand(1);
    Options o;
    app.add_option("--workers", o.workers, "Worker threads for sweeps")
        ->envname("BOSEDEPH_WORKERS")
        ->check(CLI::PositiveNumber);
    app.add_option("--out", o.out, "Output directory")->capture_default_str();
    app.add_flag("--strict", o.strict, "Reject unknown configuration keys instead of warning");

    std::string config_arg, preset_name, axis, values;
    bool print_only = false;

    auto* run = app.add_subcommand("run", "Run a scenario file (or preset:<name>)");
    run->add_option("config", config_arg, "Scenario INI file")->required();

    auto* pre = app.add_subcommand("preset", "Run a built-in preset");
    pre->add_option("name", preset_name, "Preset name")->required()->check(CLI::IsMember(preset_names()));
    pre->add_flag("--print", print_only, "Print the preset as INI instead of running it");

    auto* sweep = app.add_subcommand("sweep", "Run a scenario for several values of one parameter");
    sweep->add_option("config", config_arg, "Scenario INI file (or preset:<name>)")->required();
    sweep->add_option("--axis", axis, "Parameter to sweep")->required()->check(CLI::IsMember(sweep_axes()));
    sweep->add_option("--values", values, "Comma-separated values")->required();

    auto* coeff = app.add_subcommand("coeff-table", "Dump alpha, beta, kappa and D(t) eigenvalues as CSV");
    coeff->add_option("config", config_arg, "Scenario INI file (or preset:<name>)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (*run) return run_one(resolve(config_arg, o), o);
        if (*pre) {
            const auto cfg = preset(preset_name);
            if (print_only) {
                std::cout << to_ini(cfg);
                return 0;
            }
            if (preset_name == "coeff_table") return run_coeff_table(cfg, o);
            return run_one(cfg, o);
        }
        if (*sweep) {
            const auto cfg = resolve(config_arg, o);
            const auto r = run_sweep(cfg, axis, parse_values(values), o.workers, o.out);
            std::cout << "wrote " << r.aggregate_csv.string() << " (" << r.points.size() << " points)\n";
            return 0;
        }
        if (*coeff) return run_coeff_table(resolve(config_arg, o), o);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
