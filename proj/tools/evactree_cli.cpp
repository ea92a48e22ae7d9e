#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "evactree/evalcheck.hpp"
#include "evactree/export.hpp"
#include "evactree/search.hpp"
#include "evactree/sweep.hpp"

using namespace evactree;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitInvalid = 3;

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
    out << text;
}

void print_report(const Solution& s) {
    std::printf("status                %s\n", to_string(s.status));
    if (s.feasible()) {
        std::printf("objective (h)         %.2f\n", s.objective.total);
        std::printf("  travel              %.2f\n", s.objective.travel);
        std::printf("  refuel              %.2f\n", s.objective.refuel);
        std::printf("avg evacuation (h)    %.4f\n", s.objective.average);
    }
    std::printf("\n%10s %10s %14s %12s\n", "#Nodes", "#Columns", "colgen iters", "wall (s)");
    std::printf("%10d %10d %14d %12.2f\n", s.diagnostics.nodes_explored, s.diagnostics.columns_generated,
                s.diagnostics.colgen_iterations, s.diagnostics.wall_seconds);
}

int cmd_solve(const std::string& scenario_path, const std::string& config_path, const std::string& out_path) {
    const Scenario scenario = load_scenario_file(scenario_path);
    const SearchConfig config = config_path.empty() ? SearchConfig{} : load_config_file(config_path);
    const Solution s = solve(scenario, config);
    print_report(s);
    if (!out_path.empty()) {
        write_text(out_path, solution_to_json(s) + "\n");
    }
    return s.feasible() ? kExitOk : kExitInfeasible;
}

int cmd_sweep(const std::string& spec_path, const std::string& out_path, int parallel) {
    const SweepSpec spec = load_sweep_spec(spec_path);
    const SearchConfig config = spec.config_path ? load_config_file(*spec.config_path) : SearchConfig{};
    const std::vector<SweepRow> rows = run_sweep(spec, config, parallel);
    std::ostringstream csv;
    csv << sweep_csv_header() << '\n';
    for (const SweepRow& row : rows) {
        csv << sweep_csv_row(row) << '\n';
        if (!row.error.empty()) {
            std::cerr << row.scenario_id << ": " << row.error << '\n';
        }
    }
    write_text(out_path, csv.str());
    std::printf("%zu scenarios written to %s\n", rows.size(), out_path.c_str());
    return kExitOk;
}

int cmd_export(const std::string& solution_path, const std::string& format) {
    const Solution s = read_solution_file(solution_path);
    if (format == "graph") {
        std::cout << export_graph(s);
    } else if (format == "table") {
        std::cout << export_table(s);
    } else {
        std::cerr << "unknown format '" << format << "' (expected graph or table)\n";
        return kExitError;
    }
    return kExitOk;
}

int cmd_validate(const std::string& solution_path, const std::string& scenario_path) {
    const Solution s = read_solution_file(solution_path);
    const Scenario scenario = load_scenario_file(scenario_path);
    const ValidationReport report = validate_solution(s, scenario);
    std::cout << report.to_json() << '\n';
    return report.pass() ? kExitOk : kExitInvalid;
}

int cmd_oracle(const std::string& scenario_path, const std::string& compare_path) {
    const Scenario scenario = load_scenario_file(scenario_path);
    Solution best;
    try {
        best = oracle_solve(scenario);
    } catch (const OracleRefusal& e) {
        std::cerr << "oracle refused: " << e.what() << '\n';
        return kExitError;
    }
    if (!best.feasible()) {
        std::printf("oracle: infeasible\n");
    } else {
        std::printf("oracle: objective %.10g (travel %.10g, refuel %.10g)\n", best.objective.total,
                    best.objective.travel, best.objective.refuel);
    }
    if (compare_path.empty()) {
        return best.feasible() ? kExitOk : kExitInfeasible;
    }
    const Solution other = read_solution_file(compare_path);
    bool match = other.feasible() == best.feasible();
    if (match && best.feasible()) {
        const double scale = std::max(1.0, std::abs(best.objective.total));
        match = std::abs(other.objective.total - best.objective.total) <= 1e-9 * scale;
    }
    if (match) {
        std::printf("MATCH\n");
        return kExitOk;
    }
    std::printf("MISMATCH: solution %s %.10g\n", to_string(other.status), other.objective.total);
    return kExitInvalid;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Evacuation trees with driving-range and refuelling limits"};
    app.require_subcommand(1);

    std::string scenario_path, config_path, out_path, spec_path, solution_path, format, compare_path;
    int parallel = 1;

    CLI::App* solve_cmd = app.add_subcommand("solve", "Solve one scenario");
    solve_cmd->add_option("scenario", scenario_path, "Scenario document")->required();
    solve_cmd->add_option("--config", config_path, "Search configuration document");
    solve_cmd->add_option("--out", out_path, "Write the solution document here");

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Solve a family of scenarios into a CSV table");
    sweep_cmd->add_option("spec", spec_path, "Sweep specification")->required();
    sweep_cmd->add_option("--out", out_path, "CSV output")->required();
    sweep_cmd->add_option("--parallel", parallel, "Scenarios solved concurrently")->check(CLI::PositiveNumber);

    CLI::App* export_cmd = app.add_subcommand("export", "Render a solution's trees");
    export_cmd->add_option("solution", solution_path, "Solution document")->required();
    export_cmd->add_option("--format", format, "graph or table")->required();

    CLI::App* validate_cmd = app.add_subcommand("validate", "Check a solution against the arc formulation");
    validate_cmd->add_option("solution", solution_path, "Solution document")->required();
    validate_cmd->add_option("scenario", scenario_path, "Scenario document")->required();

    CLI::App* oracle_cmd = app.add_subcommand("oracle", "Exhaustive optimum of a small scenario");
    oracle_cmd->add_option("scenario", scenario_path, "Scenario document")->required();
    oracle_cmd->add_option("--compare", compare_path, "Solution to compare against the optimum");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        if (*solve_cmd) {
            return cmd_solve(scenario_path, config_path, out_path);
        }
        if (*sweep_cmd) {
            return cmd_sweep(spec_path, out_path, parallel);
        }
        if (*export_cmd) {
            return cmd_export(solution_path, format);
        }
        if (*validate_cmd) {
            return cmd_validate(solution_path, scenario_path);
        }
        if (*oracle_cmd) {
            return cmd_oracle(scenario_path, compare_path);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
