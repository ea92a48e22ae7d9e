#pragma once

#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "evactree/network.hpp"

namespace evactree {

/// Hop bound meaning "no driving-range limit" (conventional vehicles).
inline constexpr int kUnlimitedHops = std::numeric_limits<int>::max();

/// When a path of a given hop count must pass a refuelling station.
enum class RefuelConvention { AtLeast, Exceeds };  // hops >= tau | hops > tau

inline bool refuel_required(int hops, int tau, RefuelConvention convention = RefuelConvention::AtLeast) {
    if (tau == kUnlimitedHops) {
        return false;
    }
    return convention == RefuelConvention::AtLeast ? hops >= tau : hops > tau;
}

/// A class with zero range cannot traverse any hop; otherwise a path that needs
/// fuel must visit a station somewhere along it.
inline bool path_feasible(int hops, bool station_visited, int tau,
                          RefuelConvention convention = RefuelConvention::AtLeast) {
    if (tau == 0 && hops > 0) {
        return false;
    }
    return !refuel_required(hops, tau, convention) || station_visited;
}

struct VehicleClass {
    int id = 0;
    std::string name;
    int tau_hops = kUnlimitedHops;
    double refuel_min_per_hop = 0.0;
    std::set<NodeId> stations;
    std::map<NodeId, double> demand;

    double refuel_rate() const { return refuel_min_per_hop / 60.0; }  // hours per hop
    double demand_at(NodeId node) const {
        auto it = demand.find(node);
        return it == demand.end() ? 0.0 : it->second;
    }
    bool is_station(NodeId node) const { return stations.contains(node); }
    double total_demand() const;

    friend bool operator==(const VehicleClass&, const VehicleClass&) = default;
};

struct Scenario {
    std::string label;
    std::string network_path;  // as written in the document
    std::string base_dir;      // directory used to resolve network_path
    std::optional<double> spacing_miles;
    double capacity_scale = 1.0;
    std::vector<NodeId> shelters;
    std::vector<VehicleClass> classes;
    Network network;  // after hopify / capacity scale / super shelter

    double total_demand() const;
    NodeId root() const { return *network.shelter(); }

    // Provenance fields (network_path, base_dir) are not part of the value.
    friend bool operator==(const Scenario& a, const Scenario& b) {
        return a.label == b.label && a.spacing_miles == b.spacing_miles && a.capacity_scale == b.capacity_scale &&
               a.shelters == b.shelters && a.classes == b.classes && a.network == b.network;
    }
};

struct ClassSpec {
    std::string name;
    int tau_hops = kUnlimitedHops;
    double refuel_min_per_hop = 0.0;
    std::vector<NodeId> stations;
    std::optional<std::map<NodeId, double>> demand;
    std::optional<double> share;
};

/// Applies the network transforms and validates the class data.
Scenario build_scenario(const Network& base, const std::vector<NodeId>& shelters,
                        const std::vector<ClassSpec>& classes,
                        const std::optional<std::map<NodeId, double>>& node_totals = std::nullopt,
                        std::optional<double> spacing_miles = std::nullopt, double capacity_scale = 1.0,
                        std::string label = {});

/// Parses a scenario JSON document. Relative network paths resolve against base_dir.
Scenario load_scenario(const std::string& document, const std::string& base_dir = ".");
Scenario load_scenario_file(const std::string& path);

/// Canonical JSON serialization (explicit per-class demand maps).
std::string serialize_scenario(const Scenario& scenario);

/// floor(range / spacing), robust to floating residue at exact multiples.
int tau_from_range(double range_miles, double spacing_miles);

/// Every node that needs a path to the root: all nodes except the root and
/// the real shelters. Zero-demand and dummy nodes are included.
std::vector<NodeId> origins(const Scenario& scenario);

}  // namespace evactree
