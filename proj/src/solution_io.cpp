#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "evactree/solution.hpp"

namespace evactree {

using nlohmann::json;

const char* to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::OptimalHeuristic: return "optimal-heuristic";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::ExhaustedNoSolution: return "exhausted-no-solution";
    }
    return "unknown";
}

SolveStatus solve_status_from_string(const std::string& text) {
    for (SolveStatus s : {SolveStatus::OptimalHeuristic, SolveStatus::Infeasible, SolveStatus::ExhaustedNoSolution}) {
        if (text == to_string(s)) {
            return s;
        }
    }
    throw ConfigError("unknown solution status '" + text + "'");
}

Solution empty_solution(const Scenario& scenario, SolveStatus status) {
    const Network& net = scenario.network;
    Solution s;
    s.status = status;
    s.label = scenario.label;
    s.root = scenario.root();
    s.shelters = net.real_shelters();
    for (const Arc& a : net.arcs()) {
        s.arcs.push_back(SolutionArc{a.tail, a.head, a.uncapacitated});
    }
    for (const VehicleClass& vc : scenario.classes) {
        SolutionClass c;
        c.name = vc.name;
        c.tau_hops = vc.tau_hops;
        c.stations.assign(vc.stations.begin(), vc.stations.end());
        c.flow.assign(net.arc_count(), 0.0);
        s.classes.push_back(std::move(c));
    }
    s.total_flow.assign(net.arc_count(), 0.0);
    return s;
}

Solution assemble_solution(const Scenario& scenario, std::vector<PathAssignment> paths, RefuelConvention convention) {
    Solution s = empty_solution(scenario, SolveStatus::OptimalHeuristic);
    s.convention = convention;
    const Network& net = scenario.network;
    std::sort(paths.begin(), paths.end(), [](const PathAssignment& a, const PathAssignment& b) {
        return std::tie(a.vehicle_class, a.origin) < std::tie(b.vehicle_class, b.origin);
    });
    std::vector<std::set<ArcIndex>> trees(scenario.classes.size());
    for (PathAssignment& p : paths) {
        const VehicleClass& vc = scenario.classes.at(static_cast<std::size_t>(p.vehicle_class));
        p.hops = 0;
        for (ArcIndex a : p.arcs) {
            p.hops += net.arc(a).hop_weight();
        }
        p.refuel = refuel_required(p.hops, vc.tau_hops, convention);
        const double q = vc.demand_at(p.origin);
        for (ArcIndex a : p.arcs) {
            trees[static_cast<std::size_t>(p.vehicle_class)].insert(a);
            s.classes[static_cast<std::size_t>(p.vehicle_class)].flow[static_cast<std::size_t>(a)] += q;
            s.total_flow[static_cast<std::size_t>(a)] += q;
        }
    }
    for (std::size_t k = 0; k < trees.size(); ++k) {
        s.classes[k].tree.assign(trees[k].begin(), trees[k].end());
    }
    s.paths = std::move(paths);
    return s;
}

std::string solution_to_json(const Solution& s, bool include_timing) {
    json doc;
    doc["status"] = to_string(s.status);
    doc["label"] = s.label;
    doc["root"] = s.root;
    doc["shelters"] = s.shelters;
    doc["refuel_convention"] = s.convention == RefuelConvention::AtLeast ? "geq" : "gt";
    json arcs = json::array();
    for (std::size_t a = 0; a < s.arcs.size(); ++a) {
        arcs.push_back({{"index", a}, {"tail", s.arcs[a].tail}, {"head", s.arcs[a].head},
                        {"uncapacitated", s.arcs[a].uncapacitated}});
    }
    doc["arcs"] = std::move(arcs);
    json classes = json::array();
    for (const SolutionClass& c : s.classes) {
        classes.push_back({{"name", c.name},
                           {"tau_hops", c.tau_hops == kUnlimitedHops ? json(nullptr) : json(c.tau_hops)},
                           {"stations", c.stations},
                           {"tree", c.tree},
                           {"flow", c.flow}});
    }
    doc["classes"] = std::move(classes);
    json paths = json::array();
    for (const PathAssignment& p : s.paths) {
        paths.push_back({{"origin", p.origin},
                         {"class", p.vehicle_class},
                         {"arcs", p.arcs},
                         {"hops", p.hops},
                         {"refuel", p.refuel}});
    }
    doc["paths"] = std::move(paths);
    doc["total_flow"] = s.total_flow;
    doc["objective"] = {{"travel", s.objective.travel},
                        {"refuel", s.objective.refuel},
                        {"total", s.objective.total},
                        {"average", s.objective.average}};
    json diag = {{"colgen_iterations", s.diagnostics.colgen_iterations},
                 {"nodes_explored", s.diagnostics.nodes_explored},
                 {"columns_generated", s.diagnostics.columns_generated}};
    if (include_timing) {
        diag["wall_seconds"] = s.diagnostics.wall_seconds;
    }
    doc["diagnostics"] = std::move(diag);
    return doc.dump(2);
}

Solution solution_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("solution document is not valid JSON: ") + e.what());
    }
    try {
        Solution s;
        s.status = solve_status_from_string(doc.at("status").get<std::string>());
        s.label = doc.value("label", std::string());
        s.root = doc.at("root").get<NodeId>();
        s.shelters = doc.at("shelters").get<std::vector<NodeId>>();
        s.convention = doc.value("refuel_convention", std::string("geq")) == "gt" ? RefuelConvention::Exceeds
                                                                                  : RefuelConvention::AtLeast;
        for (const json& a : doc.at("arcs")) {
            if (a.at("index").get<std::size_t>() != s.arcs.size()) {
                throw ConfigError("solution arcs must be listed in index order");
            }
            s.arcs.push_back(SolutionArc{a.at("tail").get<NodeId>(), a.at("head").get<NodeId>(),
                                         a.value("uncapacitated", false)});
        }
        for (const json& c : doc.at("classes")) {
            SolutionClass sc;
            sc.name = c.value("name", std::string());
            sc.tau_hops = c.at("tau_hops").is_null() ? kUnlimitedHops : c.at("tau_hops").get<int>();
            sc.stations = c.value("stations", std::vector<NodeId>{});
            sc.tree = c.at("tree").get<std::vector<ArcIndex>>();
            sc.flow = c.at("flow").get<std::vector<double>>();
            s.classes.push_back(std::move(sc));
        }
        for (const json& p : doc.at("paths")) {
            PathAssignment pa;
            pa.origin = p.at("origin").get<NodeId>();
            pa.vehicle_class = p.at("class").get<int>();
            pa.arcs = p.at("arcs").get<std::vector<ArcIndex>>();
            pa.hops = p.at("hops").get<int>();
            pa.refuel = p.at("refuel").get<bool>();
            s.paths.push_back(std::move(pa));
        }
        s.total_flow = doc.at("total_flow").get<std::vector<double>>();
        const json& obj = doc.at("objective");
        s.objective = ObjectiveBreakdown{obj.at("travel").get<double>(), obj.at("refuel").get<double>(),
                                         obj.at("total").get<double>(), obj.at("average").get<double>()};
        const json& diag = doc.at("diagnostics");
        s.diagnostics.colgen_iterations = diag.value("colgen_iterations", 0);
        s.diagnostics.nodes_explored = diag.value("nodes_explored", 0);
        s.diagnostics.columns_generated = diag.value("columns_generated", 0);
        s.diagnostics.wall_seconds = diag.value("wall_seconds", 0.0);
        return s;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("solution schema error: ") + e.what());
    }
}

Solution read_solution_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open solution file '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return solution_from_json(buffer.str());
}

}  // namespace evactree
