#pragma once

#include <string>
#include <vector>

#include "evactree/scenario.hpp"

namespace evactree {

enum class SolveStatus { OptimalHeuristic, Infeasible, ExhaustedNoSolution };

const char* to_string(SolveStatus status);
SolveStatus solve_status_from_string(const std::string& text);

struct PathAssignment {
    NodeId origin = 0;
    int vehicle_class = 0;
    std::vector<ArcIndex> arcs;
    int hops = 0;
    bool refuel = false;

    friend bool operator==(const PathAssignment&, const PathAssignment&) = default;
};

struct ObjectiveBreakdown {
    double travel = 0.0;  // vehicle-hours
    double refuel = 0.0;  // vehicle-hours
    double total = 0.0;
    double average = 0.0;  // hours per vehicle

    friend bool operator==(const ObjectiveBreakdown&, const ObjectiveBreakdown&) = default;
};

struct Diagnostics {
    int colgen_iterations = 0;
    int nodes_explored = 0;
    int columns_generated = 0;
    double wall_seconds = 0.0;

    friend bool operator==(const Diagnostics&, const Diagnostics&) = default;
};

/// Arc endpoints are kept next to indices so a solution document can be
/// read without the scenario.
struct SolutionArc {
    NodeId tail = 0;
    NodeId head = 0;
    bool uncapacitated = false;

    friend bool operator==(const SolutionArc&, const SolutionArc&) = default;
};

struct SolutionClass {
    std::string name;
    int tau_hops = kUnlimitedHops;
    std::vector<NodeId> stations;
    std::vector<ArcIndex> tree;      // one out-arc per non-root node, sorted
    std::vector<double> flow;        // f per arc

    friend bool operator==(const SolutionClass&, const SolutionClass&) = default;
};

struct Solution {
    SolveStatus status = SolveStatus::Infeasible;
    std::string label;
    NodeId root = 0;
    std::vector<NodeId> shelters;
    std::vector<SolutionArc> arcs;
    std::vector<SolutionClass> classes;
    std::vector<PathAssignment> paths;  // sorted by (class, origin)
    std::vector<double> total_flow;     // v per arc
    ObjectiveBreakdown objective;
    Diagnostics diagnostics;
    RefuelConvention convention = RefuelConvention::AtLeast;

    bool feasible() const { return status == SolveStatus::OptimalHeuristic; }
    friend bool operator==(const Solution&, const Solution&) = default;
};

/// Builds a solution from per-(origin, class) paths: trees, flows and refuel
/// flags follow from the paths. The objective is left for true_objective.
Solution assemble_solution(const Scenario& scenario, std::vector<PathAssignment> paths,
                           RefuelConvention convention = RefuelConvention::AtLeast);

/// An infeasible/empty solution carrying the scenario context.
Solution empty_solution(const Scenario& scenario, SolveStatus status);

std::string solution_to_json(const Solution& solution, bool include_timing = true);
Solution solution_from_json(const std::string& text);
Solution read_solution_file(const std::string& path);

}  // namespace evactree
