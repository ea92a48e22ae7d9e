// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "evactree/evalcheck.hpp"
#include "evactree/pricing.hpp"
#include "evactree/search.hpp"

using namespace evactree;

namespace {

const std::string kDataDir = EVACTREE_DATA_DIR;

// Reference values from the published experiments (hours of evacuation time).
constexpr double kRefConventional = 8515702.8;
constexpr double kRefTau4 = 9139048.22;
constexpr double kRefTau3 = 34398226.33;
constexpr double kRefCaseB = 20650642.05;
constexpr double kRefTau4Ratio = kRefTau4 / kRefConventional;  // 1.0732
constexpr double kRefTau3Ratio = kRefTau3 / kRefTau4;          // 3.764
constexpr double kRefCaseRatio = 2.425;

struct Diag {
    int nodes;
    int columns;
};
const std::map<std::string, Diag> kRefDiag = {
    {"conventional", {6, 385}}, {"tau4", {3, 91}}, {"tau3", {6, 288}}, {"case B", {10, 558}}};

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& why) {
        if (!ok) {
            pass = false;
            detail << " [" << why << "]";
        }
    }
};

int failures = 0;

void report(int id, const std::string& title, Outcome& o) {
    std::cout << "criterion " << id << " " << (o.pass ? "PASS" : "FAIL") << ": " << title << " |"
              << o.detail.str() << std::endl;
    if (!o.pass) ++failures;
}

std::string fmt(double v, int precision = 4) {
    std::ostringstream s;
    s.precision(precision);
    s << v;
    return s.str();
}

SearchConfig config() { return load_config_file(kDataDir + "/default_config.json"); }

struct Run {
    Scenario scenario;
    Solution solution;
};

std::map<std::string, Run> runs;
std::vector<std::pair<Solution, Scenario>> all_outputs;  // every solve() result, for the validator criterion

const Run& solve_named(const std::string& name, Scenario scenario) {
    auto it = runs.find(name);
    if (it != runs.end()) return it->second;
    const auto start = std::chrono::steady_clock::now();
    Solution sol = solve(scenario, config());
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "  solved " << name << ": " << to_string(sol.status) << " objective " << fmt(sol.objective.total, 8)
              << " nodes " << sol.diagnostics.nodes_explored << " columns " << sol.diagnostics.columns_generated
              << " (" << fmt(secs, 3) << " s)" << std::endl;
    all_outputs.emplace_back(sol, scenario);
    return runs.emplace(name, Run{std::move(scenario), std::move(sol)}).first->second;
}

Scenario sioux(const std::string& file) { return load_scenario_file(kDataDir + "/" + file); }

Scenario with_tau(Scenario s, int tau) {
    for (VehicleClass& c : s.classes) c.tau_hops = tau;
    s.label += " tau=" + std::to_string(tau);
    return s;
}

// ---------------------------------------------------------------------------
// random instances

Arc road(NodeId t, NodeId h, double t0, double cap, double alpha) {
    Arc a;
    a.tail = t;
    a.head = h;
    a.free_flow_time = t0;
    a.capacity = cap;
    a.length = 1.0;
    a.bpr_alpha = alpha;
    return a;
}

struct RandomBase {
    std::vector<NodeId> ids;
    std::vector<Arc> arcs;
    std::vector<ClassSpec> classes;
    NodeId shelter = 0;
};

// At most 6 base nodes plus the super root, within the oracle limit.
RandomBase random_base(std::mt19937& rng) {
    std::uniform_real_distribution<double> time(0.5, 4.0);
    std::uniform_real_distribution<double> cap(5.0, 60.0);
    RandomBase b;
    const int nodes = 3 + static_cast<int>(rng() % 4);
    for (int i = 1; i <= nodes; ++i) b.ids.push_back(i);
    for (NodeId i = 1; i <= nodes; ++i) {
        for (NodeId j = 1; j <= nodes; ++j) {
            if (i == j) continue;
            if (j == i + 1 || rng() % 100 < 35) b.arcs.push_back(road(i, j, time(rng), cap(rng), 0.0));
        }
    }
    const int classes = rng() % 3 == 0 ? 2 : 1;
    for (int k = 0; k < classes; ++k) {
        ClassSpec c;
        c.name = "class " + std::to_string(k);
        const int range = static_cast<int>(rng() % 5);
        c.tau_hops = range == 4 ? kUnlimitedHops : range + 1;
        c.refuel_min_per_hop = 15.0 * static_cast<double>(rng() % 3);
        for (NodeId i = 1; i < nodes; ++i) {
            if (rng() % 3 == 0) c.stations.push_back(i);
        }
        std::map<NodeId, double> q;
        for (NodeId i = 1; i < nodes; ++i) q[i] = static_cast<double>(rng() % 30);
        c.demand = q;
        b.classes.push_back(c);
    }
    b.shelter = nodes;
    return b;
}

Scenario instantiate(const RandomBase& b, double alpha) {
    std::vector<Arc> arcs = b.arcs;
    for (Arc& a : arcs) a.bpr_alpha = alpha;
    return build_scenario(Network(b.ids, arcs), {b.shelter}, b.classes);
}

// ---------------------------------------------------------------------------

void criterion_1() {
    const Run& conv = solve_named("conventional", sioux("sioux_falls_conventional.json"));
    const Run& tau4 = solve_named("tau4", sioux("sioux_falls_tau4.json"));
    Outcome o;
    o.require(conv.solution.feasible() && tau4.solution.feasible(), "a solve was not feasible");
    const double ratio = tau4.solution.objective.total / conv.solution.objective.total;
    o.detail << " tau4/conventional = " << fmt(ratio) << " (reference " << fmt(kRefTau4Ratio) << " +- 0.05)";
    o.require(std::abs(ratio - kRefTau4Ratio) <= 0.05, "ratio out of band");
    report(1, "refuelling-needs ratio at range 4", o);
}

void criterion_2() {
    const Run& tau4 = solve_named("tau4", sioux("sioux_falls_tau4.json"));
    const Run& tau3 = solve_named("tau3", sioux("sioux_falls_tau3.json"));
    Outcome o;
    o.require(tau3.solution.feasible() && tau4.solution.feasible(), "a solve was not feasible");
    const double ratio = tau3.solution.objective.total / tau4.solution.objective.total;
    o.detail << " tau3/tau4 = " << fmt(ratio) << " (reference " << fmt(kRefTau3Ratio) << " +- 15%)";
    o.require(std::abs(ratio / kRefTau3Ratio - 1.0) <= 0.15, "ratio out of band");
    report(2, "short-range blow-up at range 3", o);
}

void criterion_3() {
    const Run& conv = solve_named("conventional", sioux("sioux_falls_conventional.json"));
    Outcome o;
    const double base = conv.solution.objective.total;
    double worst = 0.0, previous = kInfinity;
    for (int tau = 8; tau <= 15; ++tau) {
        const Run& r = solve_named("tau" + std::to_string(tau), with_tau(sioux("sioux_falls_tau4.json"), tau));
        if (!r.solution.feasible()) {
            o.require(false, "range " + std::to_string(tau) + " infeasible");
            continue;
        }
        const double obj = r.solution.objective.total;
        worst = std::max(worst, std::abs(obj / base - 1.0));
        o.require(std::abs(obj / base - 1.0) <= 0.005, "range " + std::to_string(tau) + " off conventional");
        o.require(obj <= previous * 1.02, "range " + std::to_string(tau) + " increases");
        previous = obj;
    }
    o.detail << " worst deviation from conventional over ranges 8..15 = " << fmt(100 * worst, 3) << "%";
    report(3, "long ranges converge to the conventional plan", o);
}

void criterion_4() {
    Outcome o;
    const Run& zero = solve_named("tau0", sioux("sioux_falls_tau0.json"));
    const Run& one = solve_named("tau1", with_tau(sioux("sioux_falls_tau4.json"), 1));
    o.require(zero.solution.status == SolveStatus::Infeasible, "range 0 not reported infeasible");
    o.require(one.solution.status == SolveStatus::Infeasible, "range 1 not reported infeasible");

    // range 0 on random positive-demand instances
    std::mt19937 rng(404);
    int checked = 0;
    for (int trial = 0; trial < 40; ++trial) {
        RandomBase b = random_base(rng);
        for (ClassSpec& c : b.classes) c.tau_hops = 0;
        (*b.classes[0].demand)[1] = 1.0 + static_cast<double>(rng() % 10);
        const Scenario s = instantiate(b, 0.15);
        const Solution got = solve(s, config());
        o.require(got.status == SolveStatus::Infeasible, "random range-0 instance solved");
        ++checked;
    }
    o.detail << " Sioux Falls range 0: " << to_string(zero.solution.status) << ", range 1: "
             << to_string(one.solution.status) << ", random range-0 instances: " << checked;
    report(4, "infeasibility detection", o);
}

void criterion_5() {
    Outcome o;
    std::mt19937 rng(5150);
    int instances = 0, feasible = 0, exact = 0, congested = 0;
    double worst_exact = 0.0, worst_gap = 0.0, best_gap = 0.0;
    while (instances < 220) {
        const RandomBase b = random_base(rng);
        ++instances;
        const Scenario flat = instantiate(b, 0.0);
        const Solution best = oracle_solve(flat);
        const Solution got = solve(flat, config());
        all_outputs.emplace_back(got, flat);
        if (best.feasible() != got.feasible()) {
            o.require(false, "feasibility disagrees on instance " + std::to_string(instances));
            continue;
        }
        if (!best.feasible()) continue;
        ++feasible;
        const double rel = std::abs(got.objective.total - best.objective.total) / std::max(1.0, best.objective.total);
        worst_exact = std::max(worst_exact, rel);
        if (rel <= 1e-9) ++exact;

        const Scenario busy = instantiate(b, 0.15);
        const Solution best_busy = oracle_solve(busy);
        const Solution got_busy = solve(busy, config());
        all_outputs.emplace_back(got_busy, busy);
        if (!got_busy.feasible()) {
            o.require(false, "congested twin infeasible on instance " + std::to_string(instances));
            continue;
        }
        ++congested;
        const double gap = (got_busy.objective.total - best_busy.objective.total) /
                           std::max(1.0, best_busy.objective.total);
        worst_gap = std::max(worst_gap, gap);
        best_gap = std::min(best_gap, gap);
    }
    o.require(instances >= 200, "suite too small");
    o.require(exact == feasible, "congestion-free objective differs from the oracle");
    o.require(best_gap >= -1e-9, "beat the exhaustive optimum");
    o.require(worst_gap <= 0.10, "more than 10% above the oracle");
    o.detail << " " << instances << " instances, " << feasible << " feasible, " << exact
             << " exact (worst rel " << fmt(worst_exact, 3) << "); congested gap in [" << fmt(best_gap, 3) << ", "
             << fmt(worst_gap, 3) << "] over " << congested;
    report(5, "oracle equivalence", o);
}

// Exhaustive simple-path enumeration; returns every feasible path with its reduced cost.
std::vector<std::pair<double, std::vector<ArcIndex>>> enumerate_paths(const Scenario& s, NodeId origin,
                                                                      const std::vector<double>& t,
                                                                      const DualPrices& d) {
    const Network& n = s.network;
    const VehicleClass& vc = s.classes[0];
    const int root = n.index_of(s.root());
    std::vector<std::pair<double, std::vector<ArcIndex>>> out;
    std::vector<ArcIndex> path;
    std::vector<char> seen(n.node_count(), 0);
    std::function<void(int)> dfs = [&](int v) {
        if (v == root) {
            const Column c = make_column(s, origin, 0, path);
            bool station = false;
            for (NodeId x : column_nodes(s, c)) station = station || vc.is_station(x);
            if (path_feasible(c.hops, station, vc.tau_hops)) out.emplace_back(reduced_cost(s, c, t, d), path);
            return;
        }
        seen[static_cast<std::size_t>(v)] = 1;
        for (ArcIndex a : n.out_arcs(v)) {
            const int w = n.head_index(a);
            if (seen[static_cast<std::size_t>(w)]) continue;
            path.push_back(a);
            dfs(w);
            path.pop_back();
        }
        seen[static_cast<std::size_t>(v)] = 0;
    };
    dfs(n.index_of(origin));
    return out;
}

void criterion_6() {
    Outcome o;
    std::mt19937 rng(6006);
    std::uniform_real_distribution<double> time(0.2, 4.0);
    std::uniform_real_distribution<double> dual(-2.0, 3.0);
    int instances = 0, priced = 0, none = 0, negative_arcs = 0;
    while (instances < 520) {
        const int nodes = 3 + static_cast<int>(rng() % 5);  // plus the super root: at most 8
        std::vector<NodeId> ids;
        std::vector<Arc> arcs;
        for (int i = 1; i <= nodes; ++i) ids.push_back(i);
        for (NodeId i = 1; i <= nodes; ++i) {
            for (NodeId j = 1; j <= nodes; ++j) {
                if (i != j && rng() % 100 < 45) arcs.push_back(road(i, j, time(rng), 100.0, 0.15));
            }
        }
        ClassSpec c;
        const int range = static_cast<int>(rng() % 6);
        c.tau_hops = range == 5 ? kUnlimitedHops : range;
        c.refuel_min_per_hop = 30.0 * static_cast<double>(rng() % 3);
        for (NodeId i = 1; i < nodes; ++i) {
            if (rng() % 4 == 0) c.stations.push_back(i);
        }
        std::map<NodeId, double> q;
        for (NodeId i = 1; i < nodes; ++i) q[i] = static_cast<double>(rng() % 6);
        c.demand = q;
        Scenario s;
        try {
            s = build_scenario(Network(ids, arcs), {nodes}, {c});
        } catch (const ConfigError&) {
            continue;  // a demand node cannot reach the shelter
        }
        ++instances;
        std::vector<double> t;
        for (const Arc& a : s.network.arcs()) t.push_back(a.uncapacitated ? 0.0 : a.free_flow_time);
        DualPrices d;
        d.arc_count = static_cast<int>(s.network.arc_count());
        d.pi.resize(s.network.arc_count());
        d.usage.resize(s.network.arc_count());
        for (double& p : d.pi) p = dual(rng);
        for (double& u : d.usage) u = rng() % 2 ? dual(rng) : 0.0;
        for (NodeId org : origins(s)) d.mu[{org, 0}] = 10.0 * dual(rng);
        for (std::size_t a = 0; a < t.size(); ++a) {
            if (t[a] - d.pi[a] < 0.0) ++negative_arcs;
        }

        const PricingInput in{&s, &t, &d, nullptr};
        for (NodeId org : origins(s)) {
            const PricingResult r = solve_pricing(in, org, 0);
            const auto all = enumerate_paths(s, org, t, d);
            if (all.empty()) {
                o.require(!r.column, "column returned where no feasible path exists");
                ++none;
                continue;
            }
            ++priced;
            if (!r.column) {
                o.require(false, "missed a feasible path");
                continue;
            }
            double best = kInfinity;
            for (const auto& [rc, p] : all) best = std::min(best, rc);
            const double tol = 1e-9 * std::max(1.0, std::abs(best));
            o.require(std::abs(r.reduced_cost - best) <= tol, "reduced cost differs");
            // the returned path is one of the optimal ones, and the only one when the optimum is unique
            int optimal = 0;
            bool found = false;
            for (const auto& [rc, p] : all) {
                if (std::abs(rc - best) <= tol) {
                    ++optimal;
                    found = found || p == r.column->arcs;
                }
            }
            o.require(found, "returned path is not an optimal enumerated path");
        }
    }
    o.require(instances >= 500, "suite too small");
    o.require(negative_arcs > 0, "no negative reduced arc weights drawn");
    o.detail << " " << instances << " instances, " << priced << " priced pairs, " << none
             << " without a feasible path, " << negative_arcs << " negative reduced arc weights";
    report(6, "pricing against exhaustive path enumeration", o);
}

ArcIndex find_arc(const Network& n, NodeId t, NodeId h) {
    for (std::size_t a = 0; a < n.arc_count(); ++a) {
        if (n.arc(static_cast<ArcIndex>(a)).tail == t && n.arc(static_cast<ArcIndex>(a)).head == h) {
            return static_cast<ArcIndex>(a);
        }
    }
    return -1;
}

ArcIndex tree_arc_of(const Scenario& s, const SolutionClass& c, NodeId node) {
    for (ArcIndex a : c.tree) {
        if (s.network.arc(a).tail == node) return a;
    }
    return -1;
}

void replace_tree_arc(SolutionClass& c, ArcIndex from, ArcIndex to) {
    std::replace(c.tree.begin(), c.tree.end(), from, to);
    std::sort(c.tree.begin(), c.tree.end());
}

void criterion_7() {
    Outcome o;
    solve_named("case A", sioux("sioux_falls_case_a.json"));
    solve_named("case B", sioux("sioux_falls_case_b.json"));
    int passed = 0;
    for (const auto& [sol, scenario] : all_outputs) {
        if (!sol.feasible()) continue;
        const ValidationReport r = validate_solution(sol, scenario);
        if (r.pass()) {
            ++passed;
        } else {
            o.require(false, "solve output of " + scenario.label + " fails: " + r.to_json());
        }
    }
    o.detail << " " << passed << " feasible solve outputs validated;";

    const Run& base = solve_named("tau4", sioux("sioux_falls_tau4.json"));
    const Run& multi = solve_named("case B", sioux("sioux_falls_case_b.json"));
    const Scenario& s = base.scenario;
    const Network& n = s.network;
    const Solution& good = base.solution;
    if (!good.feasible() || !multi.solution.feasible()) {
        o.require(false, "reference solves infeasible, tamperings skipped");
        report(7, "validator soundness", o);
        return;
    }

    struct Tamper {
        std::string name;
        std::string family;
        std::function<std::pair<Solution, Scenario>()> make;
    };
    // node 10 is a heavy origin several hops from the shelter
    const NodeId v = 10;
    const ArcIndex own = tree_arc_of(s, good.classes[0], v);
    auto other_out = [&](NodeId node, ArcIndex not_this) {
        for (ArcIndex a : n.out_arcs(n.index_of(node))) {
            if (a != not_this && !n.arc(a).uncapacitated) return a;
        }
        return ArcIndex{-1};
    };
    const ArcIndex alt = other_out(v, own);

    std::vector<Tamper> tampers = {
        {"redirect one tree arc", "tree-flow",
         [&] {
             Solution t = good;
             replace_tree_arc(t.classes[0], own, alt);
             return std::pair{t, s};
         }},
        {"drop the station visited by a refuelling origin", "station-access",
         [&] {
             Scenario changed = s;
             for (const PathAssignment& p : good.paths) {
                 if (!p.refuel) continue;
                 for (ArcIndex a : p.arcs) changed.classes[0].stations.erase(n.arc(a).head);
                 changed.classes[0].stations.erase(p.origin);
                 break;
             }
             return std::pair{good, changed};
         }},
        {"split one origin's flow over two arcs", "conservation",
         [&] {
             Solution t = good;
             const double half = 0.5 * t.classes[0].flow[static_cast<std::size_t>(own)];
             t.classes[0].flow[static_cast<std::size_t>(own)] -= half;
             t.classes[0].flow[static_cast<std::size_t>(alt)] += half;
             t.total_flow[static_cast<std::size_t>(own)] -= half;
             t.total_flow[static_cast<std::size_t>(alt)] += half;
             return std::pair{t, s};
         }},
        {"create a contraflow pair between classes", "contraflow",
         [&] {
             const Scenario& m = multi.scenario;
             Solution t = multi.solution;
             for (ArcIndex a : t.classes[0].tree) {
                 const Arc& arc = m.network.arc(a);
                 if (arc.uncapacitated || arc.head == m.root()) continue;
                 const ArcIndex back = find_arc(m.network, arc.head, arc.tail);
                 if (back < 0) continue;
                 replace_tree_arc(t.classes[1], tree_arc_of(m, t.classes[1], arc.head), back);
                 break;
             }
             return std::pair{t, m};
         }},
        {"break a depth label", "hop-label",
         [&] {
             Solution t = good;
             for (PathAssignment& p : t.paths) {
                 if (p.origin == v) p.hops += 1;
             }
             return std::pair{t, s};
         }},
        {"flip a refuel flag", "refuel-flag",
         [&] {
             Solution t = good;
             for (PathAssignment& p : t.paths) {
                 if (p.origin == v) p.refuel = !p.refuel;
             }
             return std::pair{t, s};
         }},
        {"total flow out of step with class flows", "total-flow",
         [&] {
             Solution t = good;
             t.total_flow[static_cast<std::size_t>(own)] += 100.0;
             return std::pair{t, s};
         }},
        {"second out-arc at one node", "out-degree",
         [&] {
             Solution t = good;
             t.classes[0].tree.push_back(alt);
             std::sort(t.classes[0].tree.begin(), t.classes[0].tree.end());
             return std::pair{t, s};
         }},
        {"two-node cycle in the tree", "reach-root",
         [&] {
             Solution t = good;
             const NodeId next = n.arc(own).head;
             const ArcIndex back = find_arc(n, next, v);
             replace_tree_arc(t.classes[0], tree_arc_of(s, t.classes[0], next), back);
             return std::pair{t, s};
         }},
        {"truncated flow vector", "schema",
         [&] {
             Solution t = good;
             t.classes[0].flow.pop_back();
             return std::pair{t, s};
         }},
    };

    int caught = 0;
    for (const Tamper& tp : tampers) {
        const auto [sol, scenario] = tp.make();
        const ValidationReport r = validate_solution(sol, scenario);
        if (!r.pass() && r.has_family(tp.family)) {
            ++caught;
        } else {
            o.require(false, tp.name + " not flagged as " + tp.family);
        }
    }
    o.require(alt >= 0 && own >= 0, "tamper anchor arcs missing");
    o.detail << " " << caught << "/" << tampers.size() << " tamperings caught under the expected family";
    report(7, "validator soundness", o);
}

void criterion_8() {
    Outcome o;
    const Run& a = solve_named("case A", sioux("sioux_falls_case_a.json"));
    const Run& b = solve_named("case B", sioux("sioux_falls_case_b.json"));
    o.require(a.solution.feasible() && b.solution.feasible(), "a case solve was not feasible");
    if (b.solution.feasible()) {
        o.require(!validate_solution(b.solution, b.scenario).has_family("contraflow"), "contraflow in case B");
        // independent pairwise check over the two trees
        const Network& n = b.scenario.network;
        int opposed = 0;
        for (ArcIndex x : b.solution.classes[0].tree) {
            for (ArcIndex y : b.solution.classes[1].tree) {
                if (n.arc(x).tail == n.arc(y).head && n.arc(x).head == n.arc(y).tail) ++opposed;
            }
        }
        o.require(opposed == 0, "opposed arc pair between class trees");
        o.detail << " opposed pairs " << opposed << ";";
    }
    const double ratio = b.solution.objective.total / a.solution.objective.total;
    o.require(ratio > 1.0, "case B not worse than case A");
    o.require(std::abs(ratio / kRefCaseRatio - 1.0) <= 0.25, "ratio out of band");
    o.detail << " caseB/caseA = " << fmt(ratio) << " (reference " << kRefCaseRatio << " +- 25%)";
    report(8, "two-class interaction", o);
}

void criterion_9() {
    Outcome o;
    const std::vector<std::pair<std::string, double>> refs = {{"conventional", kRefConventional},
                                                              {"tau4", kRefTau4},
                                                              {"tau3", kRefTau3},
                                                              {"case B", kRefCaseB}};
    for (const auto& [name, ref] : refs) {
        const Solution& sol = runs.at(name).solution;
        const double f = sol.objective.total / ref;
        o.require(f >= 0.5 && f <= 2.0, name + " objective off by factor " + fmt(f, 3));
        const Diag d = kRefDiag.at(name);
        // order of magnitude: within a factor of ten
        const auto order = [](double got, double want) { return got <= 10 * want && 10 * got >= want; };
        o.require(order(sol.diagnostics.nodes_explored, d.nodes), name + " node count off by an order");
        o.require(order(sol.diagnostics.columns_generated, d.columns), name + " column count off by an order");
        o.detail << " " << name << " x" << fmt(f, 3) << " (nodes " << sol.diagnostics.nodes_explored << "/"
                 << d.nodes << ", columns " << sol.diagnostics.columns_generated << "/" << d.columns << ");";
    }
    report(9, "magnitudes and diagnostics", o);
}

void sioux_falls_notes() {
    const Solution& tau4 = runs.at("tau4").solution;
    int refuel_origins = 0;
    for (const PathAssignment& p : tau4.paths) refuel_origins += p.refuel ? 1 : 0;
    std::cout << "  info: range-4 plan routes " << refuel_origins << " origins through a station (published plan: 12); "
              << "ingested demand " << fmt(runs.at("tau4").scenario.total_demand(), 7) << " vehicles" << std::endl;
}

}  // namespace

int main() {
    std::cout.setf(std::ios::unitbuf);
    const std::vector<std::pair<int, std::function<void()>>> criteria = {
        {1, criterion_1}, {2, criterion_2}, {3, criterion_3}, {4, criterion_4}, {5, criterion_5},
        {6, criterion_6}, {7, criterion_7}, {8, criterion_8}, {9, criterion_9}};
    for (const auto& [id, run] : criteria) {
        try {
            run();
        } catch (const std::exception& e) {
            std::cout << "criterion " << id << " FAIL: exception " << e.what() << std::endl;
            ++failures;
        }
    }
    sioux_falls_notes();
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
