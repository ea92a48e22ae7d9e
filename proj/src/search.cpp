#include "evactree/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <queue>
#include <random>
#include <sstream>

#include <json.hpp>

#include "evactree/evalcheck.hpp"

namespace evactree {

using nlohmann::json;

SearchConfig load_config(const std::string& document) {
    SearchConfig c;
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config document is not valid JSON: ") + e.what());
    }
    try {
        if (!doc.is_object()) {
            throw ConfigError("config document must be an object");
        }
        static const std::set<std::string> known{"max_colgen_iters", "max_nodes", "reduced_cost_tol",
                                                 "integrality_tol", "damping", "refuel_convention",
                                                 "seed", "threads", "kick_rounds", "stall_nodes"};
        for (auto it = doc.begin(); it != doc.end(); ++it) {
            if (!known.contains(it.key())) {
                throw ConfigError("unknown config key '" + it.key() + "'");
            }
        }
        c.max_colgen_iters = doc.value("max_colgen_iters", c.max_colgen_iters);
        c.max_nodes = doc.value("max_nodes", c.max_nodes);
        c.reduced_cost_tol = doc.value("reduced_cost_tol", c.reduced_cost_tol);
        c.integrality_tol = doc.value("integrality_tol", c.integrality_tol);
        c.damping = doc.value("damping", c.damping);
        c.seed = doc.value("seed", c.seed);
        c.threads = doc.value("threads", c.threads);
        c.kick_rounds = doc.value("kick_rounds", c.kick_rounds);
        c.stall_nodes = doc.value("stall_nodes", c.stall_nodes);
        const std::string conv = doc.value("refuel_convention", std::string("geq"));
        if (conv == "geq") {
            c.refuel_convention = RefuelConvention::AtLeast;
        } else if (conv == "gt") {
            c.refuel_convention = RefuelConvention::Exceeds;
        } else {
            throw ConfigError("refuel_convention must be 'geq' or 'gt'");
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config schema error: ") + e.what());
    }
    if (c.max_colgen_iters < 1 || c.max_nodes < 1 || c.threads < 1) {
        throw ConfigError("iteration caps and thread count must be positive");
    }
    if (c.kick_rounds < 0 || c.stall_nodes < 0) {
        throw ConfigError("kick_rounds and stall_nodes must not be negative");
    }
    if (!(c.damping >= 0.0 && c.damping < 1.0)) {
        throw ConfigError("damping must lie in [0, 1)");
    }
    if (!(c.reduced_cost_tol > 0.0) || !(c.integrality_tol > 0.0)) {
        throw ConfigError("tolerances must be positive");
    }
    return c;
}

SearchConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config file '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return load_config(buffer.str());
}

std::string serialize_config(const SearchConfig& c) {
    json doc{{"max_colgen_iters", c.max_colgen_iters},
             {"max_nodes", c.max_nodes},
             {"reduced_cost_tol", c.reduced_cost_tol},
             {"integrality_tol", c.integrality_tol},
             {"damping", c.damping},
             {"refuel_convention", c.refuel_convention == RefuelConvention::AtLeast ? "geq" : "gt"},
             {"seed", c.seed},
             {"threads", c.threads},
             {"kick_rounds", c.kick_rounds},
             {"stall_nodes", c.stall_nodes}};
    return doc.dump(2);
}

namespace {

std::vector<double> arc_times_at(const Network& net, const std::vector<double>& flow) {
    std::vector<double> t(net.arc_count());
    for (std::size_t a = 0; a < net.arc_count(); ++a) {
        t[a] = bpr_time(net.arc(static_cast<ArcIndex>(a)), std::max(0.0, flow[a]));
    }
    return t;
}

std::optional<Solution> integral_candidate(const Scenario& scenario, const ColumnPool& pool, const RmpModel& model,
                                           const MasterSolution& master, const SearchConfig& config) {
    if (master.status != lp::LpStatus::Optimal || !master.integral) {
        return std::nullopt;
    }
    std::vector<PathAssignment> paths;
    for (std::size_t pos = 0; pos < model.column_ids.size(); ++pos) {
        if (master.lambda[pos] < 1.0 - config.integrality_tol) {
            continue;
        }
        const Column& c = pool[model.column_ids[pos]];
        paths.push_back(PathAssignment{c.origin, c.vehicle_class, c.arcs, c.hops, c.refuel});
    }
    Solution candidate = assemble_solution(scenario, std::move(paths), config.refuel_convention);
    candidate.objective = true_objective(candidate, scenario);
    return candidate;
}

}  // namespace

namespace {

using Parents = std::vector<std::vector<ArcIndex>>;

// Per-class parent arcs of a solution, with move generation and scoring by the true objective.
class TreeEditor {
public:
    struct Move {
        std::size_t k;
        int node;
        ArcIndex arc;
    };

    TreeEditor(const Scenario& scenario, RefuelConvention convention)
        : scenario_(scenario), net_(scenario.network), convention_(convention), movers_(origins(scenario)) {}

    Parents parents_of(const Solution& s) const {
        Parents par(scenario_.classes.size(), std::vector<ArcIndex>(net_.node_count(), -1));
        for (std::size_t k = 0; k < par.size(); ++k) {
            for (ArcIndex a : s.classes[k].tree) {
                par[k][static_cast<std::size_t>(net_.tail_index(a))] = a;
            }
        }
        return par;
    }

    // nullopt when a walk cycles, a range rule fails or two classes oppose each other
    std::optional<Solution> evaluate(const Parents& par) const {
        const std::size_t K = par.size();
        for (const auto& [a, b] : net_.antiparallel_pairs()) {
            bool fwd = false, back = false;
            for (std::size_t k = 0; k < K; ++k) {
                fwd = fwd || par[k][static_cast<std::size_t>(net_.tail_index(a))] == a;
                back = back || par[k][static_cast<std::size_t>(net_.tail_index(b))] == b;
            }
            if (fwd && back) {
                return std::nullopt;
            }
        }
        const int root = net_.index_of(scenario_.root());
        std::vector<PathAssignment> paths;
        for (std::size_t k = 0; k < K; ++k) {
            const VehicleClass& vc = scenario_.classes[k];
            for (NodeId o : movers_) {
                PathAssignment p{o, static_cast<int>(k), {}, 0, false};
                int u = net_.index_of(o);
                bool station = vc.is_station(o);
                while (u != root) {
                    if (p.arcs.size() > net_.node_count()) {
                        return std::nullopt;
                    }
                    const ArcIndex a = par[k][static_cast<std::size_t>(u)];
                    p.arcs.push_back(a);
                    p.hops += net_.arc(a).hop_weight();
                    u = net_.head_index(a);
                    station = station || vc.is_station(net_.id_of(u));
                }
                if (!path_feasible(p.hops, station, vc.tau_hops, convention_)) {
                    return std::nullopt;
                }
                paths.push_back(std::move(p));
            }
        }
        Solution s = assemble_solution(scenario_, std::move(paths), convention_);
        s.objective = true_objective(s, scenario_);
        return s;
    }

    std::vector<Move> moves(const Parents& par) const {
        std::vector<Move> out;
        for (std::size_t k = 0; k < par.size(); ++k) {
            for (NodeId o : movers_) {
                if (net_.is_real_shelter(o)) {
                    continue;
                }
                const int u = net_.index_of(o);
                for (ArcIndex a : net_.out_arcs(u)) {
                    if (a != par[k][static_cast<std::size_t>(u)]) {
                        out.push_back({k, u, a});
                    }
                }
            }
        }
        return out;
    }

    static void apply(Parents& par, const Move& m) { par[m.k][static_cast<std::size_t>(m.node)] = m.arc; }

    // Best single re-point first; pairs of re-points only once no single one helps.
    Solution descend(Solution best, bool pairs) const {
        Parents parent = parents_of(best);
        auto better = [](const Solution& cand, double reference) {
            return cand.objective.total < reference - 1e-9 * std::max(1.0, std::abs(reference));
        };
        while (true) {
            const std::vector<Move> all = moves(parent);
            std::optional<Solution> improved;
            std::vector<Move> chosen;
            for (const Move& m : all) {
                Parents trial = parent;
                apply(trial, m);
                std::optional<Solution> cand = evaluate(trial);
                if (cand && better(*cand, improved ? improved->objective.total : best.objective.total)) {
                    improved = std::move(cand);
                    chosen = {m};
                }
            }
            for (std::size_t i = 0; pairs && !improved && i < all.size(); ++i) {
                for (std::size_t j = i + 1; j < all.size(); ++j) {
                    if (all[i].k == all[j].k && all[i].node == all[j].node) {
                        continue;
                    }
                    Parents trial = parent;
                    apply(trial, all[i]);
                    apply(trial, all[j]);
                    std::optional<Solution> cand = evaluate(trial);
                    if (cand && better(*cand, improved ? improved->objective.total : best.objective.total)) {
                        improved = std::move(cand);
                        chosen = {all[i], all[j]};
                    }
                }
            }
            if (!improved) {
                return best;
            }
            for (const Move& m : chosen) {
                apply(parent, m);
            }
            improved->diagnostics = best.diagnostics;
            best = std::move(*improved);
        }
    }

private:
    const Scenario& scenario_;
    const Network& net_;
    RefuelConvention convention_;
    std::vector<NodeId> movers_;
};

// Trees grown from the master's columns, tightest range class first and
// heaviest demand first within a class. Each origin takes its highest-weight
// column that keeps every newly placed node range-feasible and opposes no
// arc already used by any class; a path stops where it meets the tree.
std::optional<Solution> round_master(const Scenario& scenario, const ColumnPool& pool, const RmpModel& model,
                                     const MasterSolution& master, RefuelConvention convention) {
    if (master.status != lp::LpStatus::Optimal) {
        return std::nullopt;
    }
    const Network& net = scenario.network;
    const std::size_t K = scenario.classes.size();
    const int root = net.index_of(scenario.root());
    std::map<std::pair<NodeId, int>, std::vector<std::pair<double, int>>> options;  // (-lambda, pool id)
    for (std::size_t pos = 0; pos < model.column_ids.size(); ++pos) {
        const Column& c = pool[model.column_ids[pos]];
        if (!c.is_dummy) {
            options[{c.origin, c.vehicle_class}].push_back({-master.lambda[pos], model.column_ids[pos]});
        }
    }
    for (auto& [key, list] : options) {
        std::sort(list.begin(), list.end());
    }

    std::vector<std::size_t> class_order(K);
    for (std::size_t k = 0; k < K; ++k) {
        class_order[k] = k;
    }
    std::stable_sort(class_order.begin(), class_order.end(), [&](std::size_t a, std::size_t b) {
        return scenario.classes[a].tau_hops < scenario.classes[b].tau_hops;
    });

    Parents par(K, std::vector<ArcIndex>(net.node_count(), -1));
    std::vector<char> used(net.arc_count(), 0);  // by any class
    for (std::size_t k : class_order) {
        const VehicleClass& vc = scenario.classes[k];
        auto feasible_from = [&](int u) {
            int hops = 0;
            bool station = vc.is_station(net.id_of(u));
            for (std::size_t steps = 0; u != root; ++steps) {
                const ArcIndex a = par[k][static_cast<std::size_t>(u)];
                if (a < 0 || steps > net.node_count()) {
                    return false;
                }
                hops += net.arc(a).hop_weight();
                u = net.head_index(a);
                station = station || vc.is_station(net.id_of(u));
            }
            return path_feasible(hops, station, vc.tau_hops, convention);
        };
        std::vector<NodeId> order = origins(scenario);
        std::stable_sort(order.begin(), order.end(),
                         [&](NodeId a, NodeId b) { return vc.demand_at(a) > vc.demand_at(b); });
        for (NodeId o : order) {
            if (par[k][static_cast<std::size_t>(net.index_of(o))] >= 0) {
                continue;
            }
            bool placed = false;
            for (const auto& [weight, id] : options[{o, static_cast<int>(k)}]) {
                std::vector<ArcIndex> laid;
                bool ok = true;
                for (ArcIndex a : pool[id].arcs) {
                    const std::size_t u = static_cast<std::size_t>(net.tail_index(a));
                    if (par[k][u] >= 0) {
                        break;
                    }
                    const ArcIndex r = net.reverse_of(a);
                    if (r >= 0 && used[static_cast<std::size_t>(r)]) {
                        ok = false;
                        break;
                    }
                    par[k][u] = a;
                    laid.push_back(a);
                }
                for (std::size_t i = 0; ok && i < laid.size(); ++i) {
                    ok = feasible_from(net.tail_index(laid[i]));
                }
                if (ok) {
                    for (ArcIndex a : laid) {
                        used[static_cast<std::size_t>(a)] = 1;
                    }
                    placed = true;
                    break;
                }
                for (ArcIndex a : laid) {
                    par[k][static_cast<std::size_t>(net.tail_index(a))] = -1;
                }
            }
            if (!placed) {
                return std::nullopt;
            }
        }
    }
    std::optional<Solution> s = TreeEditor(scenario, convention).evaluate(par);
    if (s) {
        s->status = SolveStatus::OptimalHeuristic;
    }
    return s;
}

}  // namespace

Solution polish(const Scenario& scenario, Solution start, RefuelConvention convention) {
    if (!start.feasible()) {
        return start;
    }
    return TreeEditor(scenario, convention).descend(std::move(start), true);
}

Solution kick_search(const Scenario& scenario, Solution start, RefuelConvention convention, int rounds,
                     std::uint64_t seed) {
    if (!start.feasible()) {
        return start;
    }
    const TreeEditor editor(scenario, convention);
    Solution best = editor.descend(std::move(start), true);
    std::mt19937_64 rng(seed);
    for (int round = 0; round < rounds; ++round) {
        Parents par = editor.parents_of(best);
        const int size = 2 + static_cast<int>(rng() % 3);
        int applied = 0;
        for (int draw = 0; draw < 40 && applied < size; ++draw) {
            const auto all = editor.moves(par);
            if (all.empty()) {
                break;
            }
            Parents trial = par;
            TreeEditor::apply(trial, all[rng() % all.size()]);
            if (editor.evaluate(trial)) {
                par = std::move(trial);
                ++applied;
            }
        }
        std::optional<Solution> kicked = editor.evaluate(par);
        if (!kicked) {
            continue;
        }
        kicked->status = best.status;
        kicked->diagnostics = best.diagnostics;
        Solution local = editor.descend(std::move(*kicked), false);
        if (local.objective.total < best.objective.total - 1e-9 * std::max(1.0, std::abs(best.objective.total))) {
            best = editor.descend(std::move(local), true);
        }
    }
    return best;
}

SearchNode make_root_node(const Scenario& scenario, ColumnPool& pool) {
    SearchNode root;
    for (std::size_t k = 0; k < scenario.classes.size(); ++k) {
        for (NodeId o : origins(scenario)) {
            root.column_ids.push_back(pool.add(make_dummy_column(o, static_cast<int>(k))));
        }
    }
    root.flow_estimate.assign(scenario.network.arc_count(), 0.0);
    return root;
}

ColgenResult column_generation(SearchNode& node, ColumnPool& pool, const Scenario& scenario,
                               const SearchConfig& config) {
    const Network& net = scenario.network;
    ColgenResult r;
    r.arc_times = arc_times_at(net, node.flow_estimate);

    std::vector<PricingKey> keys;
    {
        std::set<PricingKey> settled;
        for (int id : node.branch.lambda_fixed_one) {
            settled.insert({pool[id].origin, pool[id].vehicle_class});
        }
        for (std::size_t k = 0; k < scenario.classes.size(); ++k) {
            for (NodeId o : origins(scenario)) {
                if (!settled.contains({o, static_cast<int>(k)})) {
                    keys.push_back({o, static_cast<int>(k)});
                }
            }
        }
    }
    std::set<int> in_node(node.column_ids.begin(), node.column_ids.end());

    double previous = std::nan("");
    int stagnant = 0;
    int cut_rounds = 0;
    int refreshes = 0;
    const int refresh_budget = std::max(1, config.max_colgen_iters / 2);
    lp::Basis warm = node.basis;
    const bool trace = std::getenv("EVACTREE_TRACE") != nullptr;
    while (true) {
        r.model = build_rmp(scenario, pool, node.column_ids, r.arc_times, node.branch, node.cuts);
        r.master = solve_master(scenario, pool, r.model, config.integrality_tol, warm.empty() ? nullptr : &warm);
        ++r.iterations;
        if (trace) {
            std::fprintf(stderr, "colgen %d: %s obj=%.6g columns=%zu lp_iters=%d\n", r.iterations,
                         lp::to_string(r.master.status), r.master.objective, node.column_ids.size(),
                         r.master.lp_iterations);
        }
        if (r.master.status != lp::LpStatus::Optimal) {
            node.status = NodeStatus::Infeasible;
            return r;
        }
        warm = r.master.basis;
        // every integral master met along the way is a tree worth scoring
        if (auto candidate = integral_candidate(scenario, pool, r.model, r.master, config)) {
            if (!r.best_candidate || candidate->objective.total < r.best_candidate->objective.total) {
                r.best_candidate = std::move(candidate);
            }
        }
        if (r.iterations >= config.max_colgen_iters) {
            break;
        }

        PricingInput in{&scenario, &r.arc_times, &r.master.duals, &node.branch, config.refuel_convention};
        const auto priced = price_all(in, pool, keys, config.threads);
        bool added = false;
        for (const auto& [key, result] : priced) {
            if (!result.column || !(result.reduced_cost < -config.reduced_cost_tol)) {
                continue;
            }
            const int id = pool.add(*result.column);
            if (in_node.insert(id).second) {
                node.column_ids.push_back(id);
                added = true;
            }
        }
        // refresh t̂ from the damped flow estimate
        // Diminishing steps: the first refresh keeps `damping` of the old estimate,
        // later ones shrink like 2/(n+1) so all-or-nothing flow swings die out.
        double shift = 0.0;
        std::vector<double> times = r.arc_times;
        if (refreshes < refresh_budget) {
            ++refreshes;
            const double n = ++node.time_updates;
            const double step = (1.0 - config.damping) * 2.0 / (n + 1.0);
            for (std::size_t a = 0; a < net.arc_count(); ++a) {
                node.flow_estimate[a] = (1.0 - step) * node.flow_estimate[a] + step * r.master.v[a];
            }
            times = arc_times_at(net, node.flow_estimate);
            for (std::size_t a = 0; a < times.size(); ++a) {
                shift = std::max(shift, std::abs(times[a] - r.arc_times[a]) / std::max(1e-9, std::abs(times[a])));
            }
        }
        const bool times_changed = shift > 1e-12;
        const bool times_settled = shift <= 1e-6 || refreshes >= refresh_budget;

        if (!added && times_settled) {
            if (cut_rounds < 50) {
                std::vector<CycleCut> violated;
                for (CycleCut& cut : separate_cycles(net, static_cast<int>(scenario.classes.size()), r.master.x)) {
                    double lhs = 0.0;
                    for (ArcIndex a : cut.arcs) {
                        lhs += r.master.x[static_cast<std::size_t>(cut.vehicle_class * r.model.arc_count + a)];
                    }
                    if (lhs > static_cast<double>(cut.arcs.size()) - 1.0 + 1e-6 &&
                        std::find(node.cuts.begin(), node.cuts.end(), cut) == node.cuts.end()) {
                        violated.push_back(std::move(cut));
                    }
                }
                if (!violated.empty()) {
                    ++cut_rounds;
                    node.cuts.insert(node.cuts.end(), violated.begin(), violated.end());
                    continue;
                }
            }
            r.converged = true;
            break;
        }
        r.arc_times = std::move(times);

        const double obj = r.master.objective;
        if (times_changed && !std::isnan(previous) &&
            std::abs(obj - previous) < 1e-6 * std::max(1.0, std::abs(obj))) {
            if (++stagnant >= 3) {
                break;
            }
        } else {
            stagnant = 0;
        }
        previous = obj;
    }
    node.basis = warm;
    node.lp_objective = r.master.objective;
    return r;
}

std::vector<SearchNode> branch(const SearchNode& node, const ColgenResult& result, const ColumnPool& pool,
                               const Scenario& scenario, const SearchConfig& config) {
    const Network& net = scenario.network;
    const int K = static_cast<int>(scenario.classes.size());
    const MasterSolution& ms = result.master;
    const double tol = config.integrality_tol;

    auto make_child = [&](BranchState state) {
        SearchNode child;
        child.branch = std::move(state);
        child.column_ids = node.column_ids;
        child.cuts = node.cuts;
        child.flow_estimate = node.flow_estimate;
        child.time_updates = node.time_updates;
        child.basis = node.basis;
        child.bound = node.lp_objective;
        child.depth = node.depth + 1;
        return child;
    };

    std::vector<SearchNode> children;
    int pick = -1;
    double best_distance = kInfinity;
    for (std::size_t pos = 0; pos < result.model.column_ids.size(); ++pos) {
        const int id = result.model.column_ids[pos];
        if (pool[id].is_dummy) {
            continue;
        }
        const double value = ms.lambda[pos];
        if (std::min(value, 1.0 - value) <= tol) {
            continue;
        }
        const double distance = std::abs(value - 0.5);
        if (distance < best_distance || (distance == best_distance && id < pick)) {
            best_distance = distance;
            pick = id;
        }
    }
    if (pick >= 0) {
        BranchState one = node.branch;
        one.lambda_fixed_one.insert(pick);
        bool consistent = true;
        for (ArcIndex a : pool[pick].arcs) {
            auto [it, inserted] = one.x_fixed.emplace(ArcClass{a, pool[pick].vehicle_class}, 1);
            if (!inserted && it->second != 1) {
                consistent = false;
            }
        }
        if (consistent && one.conflict(net, K).empty()) {
            children.push_back(make_child(std::move(one)));
        }
        BranchState zero = node.branch;
        zero.lambda_fixed_zero.insert(pick);
        if (zero.conflict(net, K).empty()) {
            children.push_back(make_child(std::move(zero)));
        }
        return children;
    }

    const std::vector<ArcClass> candidates =
        tree_conflicts(scenario, pool, result.model, ms.lambda, tol);
    ArcClass chosen{-1, -1};
    double best_score = -kInfinity;
    for (const ArcClass& ak : candidates) {
        if (node.branch.x_fixed.contains(ak)) {
            continue;
        }
        const double x = ms.x[static_cast<std::size_t>(ak.second * result.model.arc_count + ak.first)];
        const double score = result.arc_times[static_cast<std::size_t>(ak.first)] * x;
        if (score > best_score || (score == best_score && ak < chosen)) {
            best_score = score;
            chosen = ak;
        }
    }
    if (chosen.first < 0) {
        return children;
    }
    for (int value : {1, 0}) {
        BranchState state = node.branch;
        state.x_fixed[chosen] = value;
        if (state.conflict(net, K).empty()) {
            children.push_back(make_child(std::move(state)));
        }
    }
    return children;
}

Solution solve(const Scenario& scenario, const SearchConfig& config) {
    const auto started = std::chrono::steady_clock::now();
    ColumnPool pool;
    Diagnostics diag;

    struct Entry {
        double bound;
        int depth;
        long sequence;
        std::size_t index;
    };
    auto worse = [](const Entry& a, const Entry& b) {
        if (a.bound != b.bound) return a.bound > b.bound;
        if (a.depth != b.depth) return a.depth < b.depth;
        return a.sequence > b.sequence;
    };
    std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> frontier(worse);
    std::vector<SearchNode> storage;
    long sequence = 0;
    storage.push_back(make_root_node(scenario, pool));
    frontier.push(Entry{0.0, 0, sequence++, 0});

    std::optional<Solution> incumbent;
    bool node_cap_hit = false;
    int since_improvement = 0;
    auto pruned_by_incumbent = [&](double value) {
        if (!incumbent) {
            return false;
        }
        const double inc = incumbent->objective.total;
        return value >= inc - 1e-9 * std::max(1.0, std::abs(inc));
    };

    while (!frontier.empty()) {
        if (diag.nodes_explored >= config.max_nodes) {
            node_cap_hit = true;
            break;
        }
        if (incumbent && config.stall_nodes > 0 && since_improvement >= config.stall_nodes) {
            break;
        }
        const Entry entry = frontier.top();
        frontier.pop();
        SearchNode node = std::move(storage[entry.index]);
        if (pruned_by_incumbent(node.bound)) {
            continue;
        }
        ++diag.nodes_explored;
        ColgenResult result = column_generation(node, pool, scenario, config);
        diag.colgen_iterations += result.iterations;
        if (auto rounded = round_master(scenario, pool, result.model, result.master, config.refuel_convention)) {
            if (!result.best_candidate || rounded->objective.total < result.best_candidate->objective.total) {
                result.best_candidate = std::move(rounded);
            }
        }
        if (result.best_candidate) {
            Solution candidate = polish(scenario, std::move(*result.best_candidate), config.refuel_convention);
            if (!incumbent || candidate.objective.total < incumbent->objective.total -
                                                              1e-9 * std::max(1.0, incumbent->objective.total)) {
                incumbent = std::move(candidate);
                since_improvement = -1;
            }
        }
        ++since_improvement;
        if (node.status == NodeStatus::Infeasible || result.master.uses_dummy) {
            continue;
        }
        if (pruned_by_incumbent(node.lp_objective)) {
            continue;
        }
        if (result.master.integral) {
            continue;
        }
        for (SearchNode& child : branch(node, result, pool, scenario, config)) {
            storage.push_back(std::move(child));
            frontier.push(Entry{storage.back().bound, storage.back().depth, sequence++, storage.size() - 1});
        }
    }

    if (incumbent) {
        incumbent = kick_search(scenario, std::move(*incumbent), config.refuel_convention, config.kick_rounds,
                                config.seed);
    }
    Solution out = incumbent ? std::move(*incumbent)
                             : empty_solution(scenario, node_cap_hit ? SolveStatus::ExhaustedNoSolution
                                                                     : SolveStatus::Infeasible);
    out.convention = config.refuel_convention;
    for (std::size_t id = 0; id < pool.size(); ++id) {
        if (!pool[static_cast<int>(id)].is_dummy) {
            ++diag.columns_generated;
        }
    }
    diag.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    out.diagnostics = diag;
    return out;
}

}  // namespace evactree
