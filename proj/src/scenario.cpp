#include "evactree/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace evactree {

using nlohmann::json;

double VehicleClass::total_demand() const {
    double total = 0.0;
    for (const auto& [node, q] : demand) {
        total += q;
    }
    return total;
}

double Scenario::total_demand() const {
    double total = 0.0;
    for (const VehicleClass& k : classes) {
        total += k.total_demand();
    }
    return total;
}

int tau_from_range(double range_miles, double spacing_miles) {
    if (!(spacing_miles > 0.0)) {
        throw std::domain_error("tau_from_range: spacing must be positive");
    }
    if (!(range_miles >= 0.0)) {
        throw std::domain_error("tau_from_range: range must be non-negative");
    }
    const double ratio = range_miles / spacing_miles;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) <= 1e-9 * std::max(1.0, ratio)) {
        return static_cast<int>(rounded);
    }
    return static_cast<int>(std::floor(ratio));
}

std::vector<NodeId> origins(const Scenario& scenario) {
    std::vector<NodeId> result;
    const NodeId root = scenario.root();
    for (NodeId n : scenario.network.nodes()) {
        if (n != root && !scenario.network.is_real_shelter(n)) {
            result.push_back(n);
        }
    }
    return result;
}

Scenario build_scenario(const Network& base, const std::vector<NodeId>& shelters,
                        const std::vector<ClassSpec>& classes,
                        const std::optional<std::map<NodeId, double>>& node_totals,
                        std::optional<double> spacing_miles, double capacity_scale, std::string label) {
    if (classes.empty()) {
        throw ConfigError("scenario has no vehicle classes");
    }
    Scenario s;
    s.label = std::move(label);
    s.spacing_miles = spacing_miles;
    s.capacity_scale = capacity_scale;
    s.shelters = shelters;

    for (NodeId sh : shelters) {
        if (!base.has_node(sh)) {
            throw ConfigError("shelter " + std::to_string(sh) + " is not a network node");
        }
    }

    Network net = base;
    if (spacing_miles) {
        net = hopify(net, *spacing_miles);
    }
    if (capacity_scale != 1.0) {
        net = net.with_scaled_capacity(capacity_scale);
    }
    net = add_super_shelter(net, shelters);
    s.network = std::move(net);

    const bool any_share = std::any_of(classes.begin(), classes.end(), [](const ClassSpec& c) { return c.share.has_value(); });
    if (any_share) {
        if (!node_totals) {
            throw ConfigError("classes use population shares but node_totals is missing");
        }
        double share_sum = 0.0;
        for (const ClassSpec& c : classes) {
            if (!c.share) {
                throw ConfigError("class '" + c.name + "' mixes explicit demand with shares");
            }
            if (*c.share < 0.0) {
                throw ConfigError("class '" + c.name + "' has a negative share");
            }
            share_sum += *c.share;
        }
        if (std::abs(share_sum - 1.0) > 1e-9) {
            throw ConfigError("population shares sum to " + std::to_string(share_sum) + ", expected 1");
        }
    }

    for (std::size_t k = 0; k < classes.size(); ++k) {
        const ClassSpec& spec = classes[k];
        VehicleClass vc;
        vc.id = static_cast<int>(k);
        vc.name = spec.name.empty() ? "class" + std::to_string(k + 1) : spec.name;
        if (spec.tau_hops < 0) {
            throw ConfigError("class '" + vc.name + "' has a negative hop bound");
        }
        vc.tau_hops = spec.tau_hops;
        if (!(spec.refuel_min_per_hop >= 0.0)) {
            throw ConfigError("class '" + vc.name + "' has a negative refuel rate");
        }
        vc.refuel_min_per_hop = spec.refuel_min_per_hop;
        for (NodeId st : spec.stations) {
            if (!base.has_node(st)) {
                throw ConfigError("class '" + vc.name + "': unknown station node " + std::to_string(st));
            }
            vc.stations.insert(st);
        }
        if (spec.demand) {
            vc.demand = *spec.demand;
        } else if (!spec.share) {
            throw ConfigError("class '" + vc.name + "' has neither demand nor share");
        }
        s.classes.push_back(std::move(vc));
    }

    if (any_share) {
        for (const auto& [node, total] : *node_totals) {
            if (!(total >= 0.0)) {
                throw ConfigError("negative node total at node " + std::to_string(node));
            }
            double assigned = 0.0;
            for (std::size_t k = 1; k < classes.size(); ++k) {
                const double q = std::round(total * *classes[k].share);
                s.classes[k].demand[node] = q;
                assigned += q;
            }
            // Rounding residual goes to the first class.
            s.classes[0].demand[node] = total - assigned;
        }
    }

    for (const VehicleClass& vc : s.classes) {
        for (const auto& [node, q] : vc.demand) {
            if (!base.has_node(node)) {
                throw ConfigError("class '" + vc.name + "': demand at unknown node " + std::to_string(node));
            }
            if (!(q >= 0.0)) {
                throw ConfigError("class '" + vc.name + "': negative demand at node " + std::to_string(node));
            }
            if (q > 0.0 && std::find(shelters.begin(), shelters.end(), node) != shelters.end()) {
                throw ConfigError("class '" + vc.name + "': positive demand at shelter " + std::to_string(node));
            }
        }
    }

    const auto unreachable = s.network.nodes_unable_to_reach_shelter();
    for (NodeId n : unreachable) {
        for (const VehicleClass& vc : s.classes) {
            if (vc.demand_at(n) > 0.0) {
                throw ConfigError("node " + std::to_string(n) + " has demand but no path to a shelter");
            }
        }
    }
    return s;
}

namespace {

std::map<NodeId, double> node_map(const json& j, const char* what) {
    if (!j.is_object()) {
        throw ConfigError(std::string(what) + " must be an object keyed by node id");
    }
    std::map<NodeId, double> result;
    for (auto it = j.begin(); it != j.end(); ++it) {
        NodeId node = 0;
        try {
            std::size_t used = 0;
            node = std::stoi(it.key(), &used);
            if (used != it.key().size()) {
                throw std::invalid_argument(it.key());
            }
        } catch (const std::exception&) {
            throw ConfigError(std::string(what) + ": invalid node key '" + it.key() + "'");
        }
        if (!it.value().is_number()) {
            throw ConfigError(std::string(what) + ": non-numeric value at node " + it.key());
        }
        result[node] = it.value().get<double>();
    }
    return result;
}

json node_map_json(const std::map<NodeId, double>& m) {
    json j = json::object();
    for (const auto& [node, v] : m) {
        j[std::to_string(node)] = v;
    }
    return j;
}

}  // namespace

Scenario load_scenario(const std::string& document, const std::string& base_dir) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("scenario document is not valid JSON: ") + e.what());
    }
    try {
        const std::string network_path = doc.at("network_path").get<std::string>();
        std::filesystem::path resolved(network_path);
        if (resolved.is_relative()) {
            resolved = std::filesystem::path(base_dir) / resolved;
        }
        if (!std::filesystem::exists(resolved)) {
            throw ConfigError("network file '" + resolved.string() + "' not found");
        }
        const Network base = read_tntp_file(resolved.string());

        std::vector<NodeId> shelters = doc.at("shelters").get<std::vector<NodeId>>();
        std::optional<std::map<NodeId, double>> totals;
        if (doc.contains("node_totals")) {
            totals = node_map(doc["node_totals"], "node_totals");
        }
        std::optional<double> spacing;
        if (doc.contains("spacing_miles") && !doc["spacing_miles"].is_null()) {
            spacing = doc["spacing_miles"].get<double>();
        }
        const double capacity_scale = doc.value("capacity_scale", 1.0);

        std::vector<ClassSpec> specs;
        for (const json& c : doc.at("classes")) {
            ClassSpec spec;
            spec.name = c.value("name", std::string());
            if (c.contains("tau_hops") && !c["tau_hops"].is_null()) {
                spec.tau_hops = c["tau_hops"].get<int>();
            }
            spec.refuel_min_per_hop = c.value("refuel_rate_min_per_hop", 0.0);
            if (c.contains("stations")) {
                spec.stations = c["stations"].get<std::vector<NodeId>>();
            }
            if (c.contains("demand")) {
                spec.demand = node_map(c["demand"], "demand");
            }
            if (c.contains("share")) {
                spec.share = c["share"].get<double>();
            }
            specs.push_back(std::move(spec));
        }
        Scenario s = build_scenario(base, shelters, specs, totals, spacing, capacity_scale,
                                    doc.value("label", std::string()));
        s.network_path = network_path;
        s.base_dir = base_dir;
        return s;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario schema error: ") + e.what());
    }
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open scenario file '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    const auto parent = std::filesystem::path(path).parent_path();
    return load_scenario(buffer.str(), parent.empty() ? "." : parent.string());
}

std::string serialize_scenario(const Scenario& scenario) {
    json doc;
    doc["label"] = scenario.label;
    std::filesystem::path p(scenario.network_path);
    if (p.is_relative()) {
        p = std::filesystem::absolute(std::filesystem::path(scenario.base_dir) / p).lexically_normal();
    }
    doc["network_path"] = p.string();
    if (scenario.spacing_miles) {
        doc["spacing_miles"] = *scenario.spacing_miles;
    }
    doc["capacity_scale"] = scenario.capacity_scale;
    doc["shelters"] = scenario.shelters;
    json classes = json::array();
    for (const VehicleClass& vc : scenario.classes) {
        json c;
        c["name"] = vc.name;
        c["tau_hops"] = vc.tau_hops == kUnlimitedHops ? json(nullptr) : json(vc.tau_hops);
        c["refuel_rate_min_per_hop"] = vc.refuel_min_per_hop;
        c["stations"] = std::vector<NodeId>(vc.stations.begin(), vc.stations.end());
        c["demand"] = node_map_json(vc.demand);
        classes.push_back(std::move(c));
    }
    doc["classes"] = std::move(classes);
    return doc.dump(2);
}

}  // namespace evactree
