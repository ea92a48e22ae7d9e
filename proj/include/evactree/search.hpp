#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "evactree/master.hpp"
#include "evactree/pricing.hpp"
#include "evactree/solution.hpp"

namespace evactree {

struct SearchConfig {
    int max_colgen_iters = 200;
    int max_nodes = 500;
    double reduced_cost_tol = 1e-6;
    double integrality_tol = 1e-6;
    double damping = 0.5;  // weight kept on the previous v̂
    RefuelConvention refuel_convention = RefuelConvention::AtLeast;
    std::uint64_t seed = 0;
    int threads = 1;
    int kick_rounds = 30;  // random restarts of the final local search
    int stall_nodes = 10;  // stop after this many nodes without a better incumbent; 0 = never

    friend bool operator==(const SearchConfig&, const SearchConfig&) = default;
};

SearchConfig load_config(const std::string& document);
SearchConfig load_config_file(const std::string& path);
std::string serialize_config(const SearchConfig& config);

enum class NodeStatus { Open, Integral, Pruned, Infeasible, Fractional };

struct SearchNode {
    BranchState branch;
    std::vector<int> column_ids;  // ids into the shared pool
    std::vector<CycleCut> cuts;
    std::vector<double> flow_estimate;  // v̂ per arc
    int time_updates = 0;               // refreshes of v̂ along the path from the root
    lp::Basis basis;
    double bound = 0.0;  // parent's LP value until this node is solved
    double lp_objective = 0.0;
    int depth = 0;
    NodeStatus status = NodeStatus::Open;
};

struct ColgenResult {
    MasterSolution master;
    RmpModel model;
    std::vector<double> arc_times;  // t̂ the final master was solved with
    int iterations = 0;
    bool converged = false;
    std::optional<Solution> best_candidate;  // best integral master seen, scored by true objective
};

/// Column generation at one node with travel times refreshed between rounds.
ColgenResult column_generation(SearchNode& node, ColumnPool& pool, const Scenario& scenario,
                               const SearchConfig& config);

/// Children of a fractional node, in the order (fix to 1, fix to 0). Children
/// whose fixings break out-degree or contraflow consistency are dropped.
std::vector<SearchNode> branch(const SearchNode& node, const ColgenResult& result, const ColumnPool& pool,
                               const Scenario& scenario, const SearchConfig& config);

/// Best-improvement local search that re-points one node's out-arc at a time,
/// keeping every class tree feasible and contraflow-free, scored by the true objective.
Solution polish(const Scenario& scenario, Solution start, RefuelConvention convention);

/// Iterated local search on a feasible solution: each round re-points a few
/// random nodes, descends with single moves and keeps the result if it is better.
Solution kick_search(const Scenario& scenario, Solution start, RefuelConvention convention, int rounds,
                     std::uint64_t seed);

/// Root node seeded with one dummy column per (origin, class).
SearchNode make_root_node(const Scenario& scenario, ColumnPool& pool);

Solution solve(const Scenario& scenario, const SearchConfig& config = {});

}  // namespace evactree
