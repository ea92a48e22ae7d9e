#pragma once

#include <optional>
#include <string>
#include <vector>

#include "evactree/search.hpp"

namespace evactree {

/// A family of scenarios derived from one base document by varying the hop
/// bound and the station set of one vehicle class.
struct SweepSpec {
    std::string id;
    std::string base_scenario;  // resolved path
    int target_class = 0;
    std::vector<int> taus;
    std::optional<std::vector<std::vector<NodeId>>> station_sets;  // unset: keep the base stations
    std::optional<std::string> config_path;                        // resolved path
};

/// Document keys: id, base_scenario, class, taus, stations ({base, subset_sizes} or
/// {explicit}), config. Relative paths resolve against base_dir.
SweepSpec parse_sweep_spec(const std::string& document, const std::string& base_dir = ".");
SweepSpec load_sweep_spec(const std::string& path);

/// Subsets of `base` whose size is listed, in increasing bitmask order.
std::vector<std::vector<NodeId>> station_subsets(const std::vector<NodeId>& base, const std::vector<int>& sizes);

struct SweepRow {
    std::string scenario_id;
    int tau = 0;
    std::vector<NodeId> stations;
    std::string status;  // solve status, or "error"
    ObjectiveBreakdown objective;
    Diagnostics diagnostics;
    std::string error;
};

/// Solves every (tau, station set) combination; row order follows the spec
/// regardless of `parallel`. A failing row is reported, not thrown.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, const SearchConfig& config, int parallel = 1);

std::string sweep_csv_header();
std::string sweep_csv_row(const SweepRow& row);

}  // namespace evactree
