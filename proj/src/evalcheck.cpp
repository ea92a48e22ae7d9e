#include "evactree/evalcheck.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace evactree {

namespace {

bool close(double a, double b) { return std::abs(a - b) <= 1e-6 * std::max(1.0, std::max(std::abs(a), std::abs(b))); }

}  // namespace

ObjectiveBreakdown true_objective(const Solution& solution, const Scenario& scenario) {
    const Network& net = scenario.network;
    if (solution.total_flow.size() != net.arc_count()) {
        throw std::invalid_argument("solution does not match the scenario network");
    }
    std::vector<double> v(net.arc_count(), 0.0);
    ObjectiveBreakdown out;
    for (const PathAssignment& p : solution.paths) {
        const VehicleClass& vc = scenario.classes.at(static_cast<std::size_t>(p.vehicle_class));
        const double q = vc.demand_at(p.origin);
        int hops = 0;
        for (ArcIndex a : p.arcs) {
            v.at(static_cast<std::size_t>(a)) += q;
            hops += net.arc(a).hop_weight();
        }
        if (refuel_required(hops, vc.tau_hops, solution.convention)) {
            out.refuel += q * vc.refuel_rate() * hops;
        }
    }
    for (std::size_t a = 0; a < net.arc_count(); ++a) {
        if (!close(v[a], solution.total_flow[a])) {
            throw std::invalid_argument("flow on arc " + std::to_string(a) + " disagrees with the paths");
        }
        if (v[a] > 0.0) {
            out.travel += bpr_time(net.arc(static_cast<ArcIndex>(a)), v[a]) * v[a];
        }
    }
    out.total = out.travel + out.refuel;
    const double demand = scenario.total_demand();
    out.average = demand > 0.0 ? out.total / demand : 0.0;
    return out;
}

bool ValidationReport::has_family(const std::string& family) const {
    return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.family == family; });
}

std::string ValidationReport::to_json() const {
    nlohmann::json doc;
    doc["pass"] = pass();
    doc["violations"] = nlohmann::json::array();
    for (const Violation& v : violations) {
        doc["violations"].push_back({{"family", v.family}, {"location", v.location}, {"magnitude", v.magnitude}});
    }
    return doc.dump(2);
}

ValidationReport validate_solution(const Solution& s, const Scenario& scenario) {
    ValidationReport report;
    auto flag = [&](std::string family, std::string location, double magnitude) {
        report.violations.push_back(Violation{std::move(family), std::move(location), magnitude});
    };
    const Network& net = scenario.network;
    const std::size_t A = net.arc_count();
    const std::size_t K = scenario.classes.size();
    const NodeId root = scenario.root();

    if (!s.feasible()) {
        flag("status", std::string("solution status is ") + to_string(s.status), 1.0);
        return report;
    }
    if (s.arcs.size() != A || s.classes.size() != K || s.total_flow.size() != A) {
        flag("schema", "solution does not match the scenario network or classes", 1.0);
        return report;
    }
    for (std::size_t a = 0; a < A; ++a) {
        if (s.arcs[a].tail != net.arc(static_cast<ArcIndex>(a)).tail ||
            s.arcs[a].head != net.arc(static_cast<ArcIndex>(a)).head) {
            flag("schema", "arc " + std::to_string(a) + " endpoints differ from the scenario", 1.0);
            return report;
        }
    }
    for (std::size_t k = 0; k < K; ++k) {
        if (s.classes[k].flow.size() != A) {
            flag("schema", "class " + std::to_string(k) + " flow vector has the wrong size", 1.0);
            return report;
        }
        for (ArcIndex a : s.classes[k].tree) {
            if (a < 0 || static_cast<std::size_t>(a) >= A) {
                flag("schema", "class " + std::to_string(k) + " tree names an unknown arc", 1.0);
                return report;
            }
        }
    }

    // total flow
    for (std::size_t a = 0; a < A; ++a) {
        double sum = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            sum += s.classes[k].flow[a];
        }
        if (!close(sum, s.total_flow[a])) {
            flag("total-flow", "arc " + std::to_string(a), std::abs(sum - s.total_flow[a]));
        }
    }

    const std::vector<NodeId> origin_list = origins(scenario);
    std::vector<std::set<ArcIndex>> trees(K);
    for (std::size_t k = 0; k < K; ++k) {
        trees[k].insert(s.classes[k].tree.begin(), s.classes[k].tree.end());
    }

    for (std::size_t k = 0; k < K; ++k) {
        const VehicleClass& vc = scenario.classes[k];
        const std::string cls = " class " + std::to_string(k);
        const std::vector<double>& f = s.classes[k].flow;

        // conservation
        for (std::size_t i = 0; i < net.node_count(); ++i) {
            const NodeId id = net.id_of(static_cast<int>(i));
            if (id == root) {
                continue;
            }
            double balance = 0.0;
            for (ArcIndex a : net.out_arcs(static_cast<int>(i))) balance += f[static_cast<std::size_t>(a)];
            for (ArcIndex a : net.in_arcs(static_cast<int>(i))) balance -= f[static_cast<std::size_t>(a)];
            const double q = vc.demand_at(id);
            if (std::abs(balance - q) > 1e-6 * std::max(1.0, q)) {
                flag("conservation", "node " + std::to_string(id) + cls, std::abs(balance - q));
            }
        }
        // flow only on tree arcs
        for (std::size_t a = 0; a < A; ++a) {
            if (f[a] > 1e-9 && !trees[k].contains(static_cast<ArcIndex>(a))) {
                flag("tree-flow", "arc " + std::to_string(a) + cls, f[a]);
            }
            if (f[a] < -1e-9) {
                flag("tree-flow", "arc " + std::to_string(a) + cls + " negative flow", -f[a]);
            }
        }
        // one out-arc per non-root node
        std::vector<ArcIndex> next_arc(net.node_count(), -1);
        std::vector<int> out_count(net.node_count(), 0);
        for (ArcIndex a : trees[k]) {
            ++out_count[static_cast<std::size_t>(net.tail_index(a))];
            next_arc[static_cast<std::size_t>(net.tail_index(a))] = a;
        }
        bool degree_ok = true;
        for (std::size_t i = 0; i < net.node_count(); ++i) {
            const NodeId id = net.id_of(static_cast<int>(i));
            const int expected = id == root ? 0 : 1;
            if (out_count[i] != expected) {
                flag("out-degree", "node " + std::to_string(id) + cls, std::abs(out_count[i] - expected));
                degree_ok = false;
            }
        }
        if (!degree_ok) {
            continue;
        }
        // every walk reaches the root; depth labels and station access along it
        const int root_index = net.index_of(root);
        std::map<NodeId, std::vector<ArcIndex>> walk_of;
        for (std::size_t i = 0; i < net.node_count(); ++i) {
            if (static_cast<int>(i) == root_index) {
                continue;
            }
            std::vector<ArcIndex> walk;
            int cur = static_cast<int>(i);
            std::size_t steps = 0;
            while (cur != root_index && steps <= net.node_count()) {
                walk.push_back(next_arc[static_cast<std::size_t>(cur)]);
                cur = net.head_index(walk.back());
                ++steps;
            }
            if (cur != root_index) {
                flag("reach-root", "node " + std::to_string(net.id_of(static_cast<int>(i))) + cls, 1.0);
                continue;
            }
            walk_of[net.id_of(static_cast<int>(i))] = std::move(walk);
        }

        std::map<NodeId, const PathAssignment*> path_of;
        for (const PathAssignment& p : s.paths) {
            if (p.vehicle_class == static_cast<int>(k)) {
                path_of[p.origin] = &p;
            }
        }
        for (NodeId o : origin_list) {
            auto w = walk_of.find(o);
            if (w == walk_of.end()) {
                continue;  // already reported as reach-root
            }
            int depth = 0;
            bool station = vc.is_station(o);
            for (ArcIndex a : w->second) {
                depth += net.arc(a).hop_weight();
                station = station || vc.is_station(net.arc(a).head);
            }
            const bool required = refuel_required(depth, vc.tau_hops, s.convention);
            if (!path_feasible(depth, station, vc.tau_hops, s.convention)) {
                flag("station-access", "node " + std::to_string(o) + cls, static_cast<double>(depth));
            }
            auto p = path_of.find(o);
            if (p == path_of.end()) {
                flag("out-degree", "node " + std::to_string(o) + cls + " has no path", 1.0);
                continue;
            }
            if (p->second->arcs != w->second) {
                flag("out-degree", "node " + std::to_string(o) + cls + " path leaves the tree", 1.0);
            }
            if (p->second->hops != depth) {
                flag("hop-label", "node " + std::to_string(o) + cls, std::abs(p->second->hops - depth));
            }
            if (p->second->refuel != required) {
                flag("refuel-flag", "node " + std::to_string(o) + cls, 1.0);
            }
        }
    }

    // no anti-parallel pair used in opposite directions, across all classes
    for (const auto& [a, b] : net.antiparallel_pairs()) {
        for (std::size_t k = 0; k < K; ++k) {
            for (std::size_t q = 0; q < K; ++q) {
                if (trees[k].contains(a) && trees[q].contains(b)) {
                    flag("contraflow", "arcs " + std::to_string(a) + "/" + std::to_string(b) + " classes " +
                                    std::to_string(k) + "/" + std::to_string(q),
                         1.0);
                }
            }
        }
    }
    return report;
}

Solution oracle_solve(const Scenario& scenario, RefuelConvention convention) {
    const Network& net = scenario.network;
    if (net.node_count() > kOracleMaxNodes || scenario.classes.size() > kOracleMaxClasses) {
        throw OracleRefusal("oracle limited to " + std::to_string(kOracleMaxNodes) + " nodes and " +
                            std::to_string(kOracleMaxClasses) + " classes (instance has " +
                            std::to_string(net.node_count()) + " nodes, " +
                            std::to_string(scenario.classes.size()) + " classes)");
    }
    const NodeId root = scenario.root();
    const int root_index = net.index_of(root);
    std::vector<int> movers;
    std::vector<std::vector<ArcIndex>> choices;
    for (std::size_t i = 0; i < net.node_count(); ++i) {
        if (static_cast<int>(i) == root_index) {
            continue;
        }
        std::vector<ArcIndex> options;
        for (ArcIndex a : net.out_arcs(static_cast<int>(i))) {
            const Arc& arc = net.arc(a);
            if (net.is_real_shelter(arc.tail) && !arc.uncapacitated) {
                continue;
            }
            options.push_back(a);
        }
        movers.push_back(static_cast<int>(i));
        choices.push_back(std::move(options));
    }

    // per class: every refuel-feasible arborescence, as the chosen out-arc per mover
    std::vector<std::vector<std::vector<ArcIndex>>> trees(scenario.classes.size());
    for (std::size_t k = 0; k < scenario.classes.size(); ++k) {
        const VehicleClass& vc = scenario.classes[k];
        if (std::any_of(choices.begin(), choices.end(), [](const auto& c) { return c.empty(); })) {
            break;
        }
        std::vector<std::size_t> pick(movers.size(), 0);
        std::vector<ArcIndex> next(net.node_count(), -1);
        while (true) {
            for (std::size_t m = 0; m < movers.size(); ++m) {
                next[static_cast<std::size_t>(movers[m])] = choices[m][pick[m]];
            }
            bool ok = true;
            for (int start : movers) {
                int cur = start;
                int hops = 0;
                bool station = vc.is_station(net.id_of(start));
                std::size_t steps = 0;
                while (cur != root_index && steps <= net.node_count()) {
                    const ArcIndex a = next[static_cast<std::size_t>(cur)];
                    hops += net.arc(a).hop_weight();
                    cur = net.head_index(a);
                    station = station || vc.is_station(net.id_of(cur));
                    ++steps;
                }
                if (cur != root_index || !path_feasible(hops, station, vc.tau_hops, convention)) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                std::vector<ArcIndex> tree;
                for (int m : movers) tree.push_back(next[static_cast<std::size_t>(m)]);
                trees[k].push_back(std::move(tree));
            }
            std::size_t m = 0;
            while (m < movers.size() && ++pick[m] == choices[m].size()) {
                pick[m] = 0;
                ++m;
            }
            if (m == movers.size()) {
                break;
            }
        }
    }

    const std::vector<NodeId> origin_list = origins(scenario);
    auto paths_for = [&](int k, const std::vector<ArcIndex>& tree, std::vector<PathAssignment>& out) {
        std::vector<ArcIndex> next(net.node_count(), -1);
        for (std::size_t m = 0; m < movers.size(); ++m) next[static_cast<std::size_t>(movers[m])] = tree[m];
        for (NodeId o : origin_list) {
            PathAssignment p;
            p.origin = o;
            p.vehicle_class = k;
            int cur = net.index_of(o);
            while (cur != root_index) {
                p.arcs.push_back(next[static_cast<std::size_t>(cur)]);
                cur = net.head_index(p.arcs.back());
            }
            out.push_back(std::move(p));
        }
    };

    Solution best = empty_solution(scenario, SolveStatus::Infeasible);
    best.convention = convention;
    bool found = false;
    const std::size_t K = scenario.classes.size();
    std::vector<std::size_t> pick(K, 0);
    if (std::any_of(trees.begin(), trees.end(), [](const auto& t) { return t.empty(); })) {
        return best;
    }
    while (true) {
        bool contraflow = false;
        for (std::size_t k = 0; k < K && !contraflow; ++k) {
            for (std::size_t q = k + 1; q < K && !contraflow; ++q) {
                std::set<ArcIndex> other(trees[q][pick[q]].begin(), trees[q][pick[q]].end());
                for (ArcIndex a : trees[k][pick[k]]) {
                    const ArcIndex rev = net.reverse_of(a);
                    if (rev >= 0 && other.contains(rev)) {
                        contraflow = true;
                        break;
                    }
                }
            }
        }
        if (!contraflow) {
            std::vector<PathAssignment> paths;
            for (std::size_t k = 0; k < K; ++k) {
                paths_for(static_cast<int>(k), trees[k][pick[k]], paths);
            }
            Solution cand = assemble_solution(scenario, std::move(paths), convention);
            cand.objective = true_objective(cand, scenario);
            if (!found || cand.objective.total < best.objective.total) {
                best = std::move(cand);
                found = true;
            }
        }
        std::size_t k = 0;
        while (k < K && ++pick[k] == trees[k].size()) {
            pick[k] = 0;
            ++k;
        }
        if (k == K) {
            break;
        }
    }
    return best;
}

}  // namespace evactree
