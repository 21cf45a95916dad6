// evacsim: channel-evacuation delay analysis for TV black-space spectrum
// management. Subcommands: table1, simulate, sweep, compose.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "evacsim/delay_distribution.hpp"
#include "evacsim/scenario_io.hpp"
#include "evacsim/scenarios.hpp"
#include "evacsim/simulator.hpp"

namespace {

using namespace evacsim;

ScenarioParams resolve_scenario(const std::string& arg) {
    if (std::filesystem::exists(arg)) return load_scenario(arg);
    for (const auto& scn : builtin_scenarios().scenarios)
        if (scn.name == arg) return scn;
    throw std::invalid_argument("scenario \"" + arg +
                                "\" is neither a file nor a built-in name");
}

EvalMode parse_mode(const std::string& mode) {
    if (mode == "simple") return EvalMode::simple;
    if (mode == "queueing") return EvalMode::queueing;
    throw std::invalid_argument("mode must be simple or queueing");
}

ReportFormat parse_format(const std::string& format) {
    if (format == "csv") return ReportFormat::csv;
    if (format == "json") return ReportFormat::json_text;
    throw std::invalid_argument("format must be csv or json");
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << text;
}

int run_table1(const std::string& mode_name, const std::string& format_name,
               const std::string& out_path, double deadline_ms) {
    ScenarioSuite suite = builtin_scenarios();
    suite.shared_protection.delta_max_ms = deadline_ms;
    const auto rows = reproduce_table1(suite, parse_mode(mode_name));
    const auto verdicts = check_realtime(rows, suite.shared_protection);
    const auto table = to_report(rows, verdicts);
    write_output(render_report(table, parse_format(format_name)), out_path);
    return 0;
}

int run_simulate(const std::string& scenario_arg, std::uint64_t seed,
                 double duration_s, unsigned reps, const std::string& out_path,
                 const std::string& samples_path) {
    const ScenarioParams scn = resolve_scenario(scenario_arg);
    std::vector<std::future<SimReport>> futures;
    futures.reserve(reps);
    for (unsigned rep = 0; rep < reps; ++rep) {
        const std::uint64_t rep_seed = reps == 1 ? seed : derive_seed(seed, rep);
        futures.push_back(std::async(std::launch::async, [=, &scn] {
            return run_simulation(scn, duration_s, rep_seed);
        }));
    }
    std::vector<SimReport> parts;
    parts.reserve(reps);
    for (auto& f : futures) parts.push_back(f.get());
    SimReport merged = SimReport::merge(std::move(parts));
    merged.seed = seed;
    write_output(merged.to_json(), out_path);
    if (!samples_path.empty()) {
        std::ofstream out(samples_path);
        if (!out) throw std::runtime_error("cannot write " + samples_path);
        merged.write_samples_csv(out);
    }
    return 0;
}

int run_sweep(const std::string& scenario_arg, const std::vector<double>& sizes,
              const std::string& mode_name, const std::string& format_name,
              const std::string& out_path) {
    const ScenarioParams base = resolve_scenario(scenario_arg);
    const auto points = sweep_centralization(base, sizes, parse_mode(mode_name));
    write_output(render_report(to_report(points), parse_format(format_name)),
                 out_path);
    return 0;
}

int run_compose(const std::string& scenario_arg, const std::string& mode_name,
                bool cumulative, const std::string& out_path,
                double grid_step_ms, double grid_bound_ms) {
    const ScenarioParams scn = resolve_scenario(scenario_arg);
    const EvalMode mode = parse_mode(mode_name);
    const auto net = network_delay_law(scn);
    const auto sm = sm_response_delay_law(scn, mode);
    const auto hand = handover_delay_law(scn);

    GridSpec grid = grid_covering(net, sm, hand);
    if (grid_step_ms > 0.0) grid.step_ms = grid_step_ms;
    if (grid_bound_ms > 0.0)
        grid.cells = static_cast<std::size_t>(grid_bound_ms / grid.step_ms);
    const auto total = compose_evacuation_delay(net, sm, hand, grid);

    std::ostringstream os;
    total.write_csv(os, cumulative);
    write_output(os.str(), out_path);

    char line[256];
    std::snprintf(line, sizeof line,
                  "mean %.3f ms  p50 %.3f  p95 %.3f  p99 %.3f  "
                  "Pr(delay <= %.0f ms) = %.6f\n",
                  total.mean_ms(), total.quantile(0.5), total.quantile(0.95),
                  total.quantile(0.99), scn.protection.delta_max_ms,
                  protection_probability(total, scn.protection));
    std::cerr << line;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Evacuation-delay models for TV black-space spectrum management"};
    app.require_subcommand(1);

    std::string scenario_arg, mode = "simple", format = "csv", out_path,
                samples_path;
    std::uint64_t seed = 1;
    double duration_s = 600.0, deadline_ms = 300.0;
    unsigned reps = 1;
    std::vector<double> sizes;
    bool cumulative = false;
    double grid_step_ms = 0.0, grid_bound_ms = 0.0;

    auto* table1 = app.add_subcommand(
        "table1", "Evacuation-time summary of the four architectures");
    table1->add_option("--mode", mode, "simple|queueing");
    table1->add_option("--format", format, "csv|json");
    table1->add_option("--out", out_path, "output path (default stdout)");
    table1->add_option("--deadline", deadline_ms, "verdict deadline in ms");

    auto* simulate =
        app.add_subcommand("simulate", "Discrete-event simulation of a scenario");
    simulate->add_option("--scenario", scenario_arg, "file or built-in name")
        ->required();
    simulate->add_option("--seed", seed, "run seed");
    simulate->add_option("--duration", duration_s, "simulated seconds");
    simulate->add_option("--reps", reps, "replications (merged)")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--out", out_path, "report path (default stdout)");
    simulate->add_option("--samples-out", samples_path, "raw t_E samples CSV");

    auto* sweep = app.add_subcommand(
        "sweep", "Evacuation delay vs. spectrum-manager size");
    sweep->add_option("--scenario", scenario_arg, "base scenario")
        ->default_val("semi-national");
    sweep->add_option("--sizes", sizes, "receivers per manager")
        ->required()
        ->delimiter(',');
    sweep->add_option("--mode", mode, "simple|queueing");
    sweep->add_option("--format", format, "csv|json");
    sweep->add_option("--out", out_path, "output path (default stdout)");

    auto* compose = app.add_subcommand(
        "compose", "Composed evacuation-delay distribution as CSV");
    compose->add_option("--scenario", scenario_arg, "file or built-in name")
        ->required();
    compose->add_option("--mode", mode, "simple|queueing");
    compose->add_flag("--cdf", cumulative, "emit cumulative instead of density");
    compose->add_option("--out", out_path, "output path (default stdout)");
    compose->add_option("--grid-step", grid_step_ms, "grid step in ms");
    compose->add_option("--grid-bound", grid_bound_ms, "grid upper bound in ms");

    CLI11_PARSE(app, argc, argv);

    try {
        if (table1->parsed())
            return run_table1(mode, format, out_path, deadline_ms);
        if (simulate->parsed())
            return run_simulate(scenario_arg, seed, duration_s, reps, out_path,
                                samples_path);
        if (sweep->parsed())
            return run_sweep(scenario_arg, sizes, mode, format, out_path);
        if (compose->parsed())
            return run_compose(scenario_arg, mode, cumulative, out_path,
                               grid_step_ms, grid_bound_ms);
    } catch (const evacsim::UnstableQueueError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
