#include "evactree/master.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace evactree {

Column make_column(const Scenario& scenario, NodeId origin, int vehicle_class, std::vector<ArcIndex> arcs,
                   RefuelConvention convention) {
    const Network& net = scenario.network;
    Column c;
    c.origin = origin;
    c.vehicle_class = vehicle_class;
    c.arcs = std::move(arcs);
    for (ArcIndex a : c.arcs) {
        c.hops += net.arc(a).hop_weight();
    }
    const VehicleClass& vc = scenario.classes.at(static_cast<std::size_t>(vehicle_class));
    c.refuel = refuel_required(c.hops, vc.tau_hops, convention);
    return c;
}

Column make_dummy_column(NodeId origin, int vehicle_class) {
    Column c;
    c.origin = origin;
    c.vehicle_class = vehicle_class;
    c.is_dummy = true;
    return c;
}

std::vector<NodeId> column_nodes(const Scenario& scenario, const Column& column) {
    std::vector<NodeId> nodes{column.origin};
    for (ArcIndex a : column.arcs) {
        nodes.push_back(scenario.network.arc(a).head);
    }
    return nodes;
}

double column_cost(const Scenario& scenario, const Column& column, const std::vector<double>& arc_times) {
    if (column.is_dummy) {
        return kDummyColumnCost;
    }
    const VehicleClass& vc = scenario.classes.at(static_cast<std::size_t>(column.vehicle_class));
    const double q = vc.demand_at(column.origin);
    double time = 0.0;
    for (ArcIndex a : column.arcs) {
        time += arc_times[static_cast<std::size_t>(a)];
    }
    double cost = q * time;
    if (column.refuel) {
        cost += q * vc.refuel_rate() * column.hops;
    }
    return cost;
}

int ColumnPool::add(const Column& column) {
    auto key = std::make_tuple(column.origin, column.vehicle_class, column.is_dummy, column.arcs);
    auto it = index_.find(key);
    if (it != index_.end()) {
        return it->second;
    }
    const int id = static_cast<int>(columns_.size());
    columns_.push_back(column);
    index_.emplace(std::move(key), id);
    return id;
}

std::optional<int> ColumnPool::find(const Column& column) const {
    auto it = index_.find(std::make_tuple(column.origin, column.vehicle_class, column.is_dummy, column.arcs));
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::string BranchState::conflict(const Network& network, int class_count) const {
    for (int id : lambda_fixed_one) {
        if (lambda_fixed_zero.contains(id)) {
            return "column " + std::to_string(id) + " fixed to both 0 and 1";
        }
    }
    std::map<std::pair<int, int>, ArcIndex> chosen;  // (tail index, class) -> arc fixed to 1
    for (const auto& [key, value] : x_fixed) {
        const auto [a, k] = key;
        if (k < 0 || k >= class_count || a < 0 || a >= static_cast<int>(network.arc_count())) {
            return "fixing on unknown arc/class";
        }
        const NodeId tail = network.arc(a).tail;
        if (network.is_real_shelter(tail) && !network.arc(a).uncapacitated && value == 1) {
            return "shelter " + std::to_string(tail) + " must leave through its root arc";
        }
        if (value != 1) {
            continue;
        }
        auto [it, inserted] = chosen.emplace(std::make_pair(network.tail_index(a), k), a);
        if (!inserted && it->second != a) {
            return "two out-arcs fixed to 1 at node " + std::to_string(tail);
        }
        const ArcIndex rev = network.reverse_of(a);
        if (rev >= 0) {
            for (int q = 0; q < class_count; ++q) {
                auto r = x_fixed.find({rev, q});
                if (r != x_fixed.end() && r->second == 1) {
                    return "contraflow between arcs " + std::to_string(a) + " and " + std::to_string(rev);
                }
            }
        }
    }
    // every non-root node needs some out-arc that is not fixed to 0
    const NodeId root = *network.shelter();
    for (int k = 0; k < class_count; ++k) {
        for (std::size_t i = 0; i < network.node_count(); ++i) {
            if (network.id_of(static_cast<int>(i)) == root) {
                continue;
            }
            bool open = false;
            for (ArcIndex a : network.out_arcs(static_cast<int>(i))) {
                auto f = x_fixed.find({a, k});
                if (f == x_fixed.end() || f->second == 1) {
                    open = true;
                    break;
                }
            }
            if (!open) {
                return "every out-arc of node " + std::to_string(network.id_of(static_cast<int>(i))) +
                       " fixed to 0";
            }
        }
    }
    return {};
}

std::vector<char> BranchState::forbidden_arcs(const Network& network, int vehicle_class) const {
    std::vector<char> forbidden(network.arc_count(), 0);
    auto close_other_out_arcs = [&](ArcIndex keep) {
        for (ArcIndex b : network.out_arcs(network.tail_index(keep))) {
            if (b != keep) {
                forbidden[static_cast<std::size_t>(b)] = 1;
            }
        }
    };
    for (std::size_t a = 0; a < network.arc_count(); ++a) {
        const Arc& arc = network.arc(static_cast<ArcIndex>(a));
        if (arc.uncapacitated && network.is_real_shelter(arc.tail)) {
            close_other_out_arcs(static_cast<ArcIndex>(a));
        }
    }
    for (const auto& [key, value] : x_fixed) {
        const auto [a, k] = key;
        if (value == 0) {
            if (k == vehicle_class) {
                forbidden[static_cast<std::size_t>(a)] = 1;
            }
            continue;
        }
        if (k == vehicle_class) {
            close_other_out_arcs(a);
        }
        const ArcIndex rev = network.reverse_of(a);
        if (rev >= 0) {
            forbidden[static_cast<std::size_t>(rev)] = 1;
        }
    }
    return forbidden;
}

RmpModel build_rmp(const Scenario& scenario, const ColumnPool& pool, const std::vector<int>& column_ids,
                   const std::vector<double>& fixed_times, const BranchState& branch,
                   const std::vector<CycleCut>& cuts) {
    using lp::Sense;
    const Network& net = scenario.network;
    const int A = static_cast<int>(net.arc_count());
    const int K = static_cast<int>(scenario.classes.size());
    const NodeId root = scenario.root();
    const std::vector<NodeId> origin_list = origins(scenario);
    const double big_m = scenario.total_demand();

    RmpModel m;
    m.arc_count = A;
    m.class_count = K;
    m.column_ids = column_ids;
    lp::LinearProgram& lp = m.lp;

    std::vector<std::vector<char>> forbidden;
    for (int k = 0; k < K; ++k) {
        forbidden.push_back(branch.forbidden_arcs(net, k));
    }

    for (int k = 0; k < K; ++k) {
        for (int a = 0; a < A; ++a) {
            double lo = 0.0, hi = 1.0;
            const Arc& arc = net.arc(a);
            if (arc.uncapacitated && net.is_real_shelter(arc.tail)) {
                lo = hi = 1.0;
            }
            auto it = branch.x_fixed.find({a, k});
            if (it != branch.x_fixed.end()) {
                lo = hi = static_cast<double>(it->second);
            } else if (forbidden[static_cast<std::size_t>(k)][static_cast<std::size_t>(a)]) {
                hi = 0.0;
            }
            lp.add_variable(lo, hi, 0.0);
        }
    }
    for (int k = 0; k < K; ++k) {
        for (int a = 0; a < A; ++a) {
            lp.add_variable(0.0, kInfinity, 0.0);
        }
    }
    for (int a = 0; a < A; ++a) {
        lp.add_variable(0.0, kInfinity, 0.0);
    }

    // rows are collected per family, then laid out in a fixed order
    std::vector<std::vector<std::pair<int, double>>> linking(static_cast<std::size_t>(K * A));
    std::vector<std::vector<std::pair<int, double>>> usage(static_cast<std::size_t>(K * A));
    std::map<std::pair<NodeId, int>, std::vector<std::pair<int, double>>> convexity;
    for (int k = 0; k < K; ++k) {
        for (NodeId o : origin_list) {
            convexity[{o, k}];
        }
    }

    std::vector<bool> zero_demand_class(static_cast<std::size_t>(K), false);
    for (int k = 0; k < K; ++k) {
        for (NodeId o : origin_list) {
            if (scenario.classes[static_cast<std::size_t>(k)].demand_at(o) <= 0.0) {
                zero_demand_class[static_cast<std::size_t>(k)] = true;
            }
        }
    }

    for (std::size_t pos = 0; pos < column_ids.size(); ++pos) {
        const Column& c = pool[column_ids[pos]];
        const int var = m.lambda_var(pos);
        double lo = 0.0, hi = 1.0;
        if (branch.lambda_fixed_one.contains(column_ids[pos])) {
            lo = 1.0;
        }
        if (branch.lambda_fixed_zero.contains(column_ids[pos])) {
            hi = 0.0;
        }
        for (ArcIndex a : c.arcs) {
            if (forbidden[static_cast<std::size_t>(c.vehicle_class)][static_cast<std::size_t>(a)]) {
                hi = 0.0;
            }
        }
        if (lo > hi) {
            lo = hi;  // contradictory fixings leave the node infeasible through convexity
        }
        const int added = lp.add_variable(lo, hi, column_cost(scenario, c, fixed_times));
        (void)added;
        auto conv = convexity.find({c.origin, c.vehicle_class});
        if (conv == convexity.end()) {
            throw std::invalid_argument("column for non-origin node " + std::to_string(c.origin));
        }
        conv->second.emplace_back(var, 1.0);
        const double q = scenario.classes[static_cast<std::size_t>(c.vehicle_class)].demand_at(c.origin);
        for (ArcIndex a : c.arcs) {
            const auto slot = static_cast<std::size_t>(c.vehicle_class * A + a);
            if (q > 0.0) {
                linking[slot].emplace_back(var, q);
            }
            if (zero_demand_class[static_cast<std::size_t>(c.vehicle_class)]) {
                usage[slot].emplace_back(var, 1.0);
            }
        }
    }
    for (const auto& [key, entries] : convexity) {
        if (entries.empty()) {
            throw std::invalid_argument("no column for origin " + std::to_string(key.first) + ", class " +
                                        std::to_string(key.second));
        }
    }

    m.linking_row.assign(static_cast<std::size_t>(K * A), -1);
    m.usage_row.assign(static_cast<std::size_t>(K * A), -1);
    for (int k = 0; k < K; ++k) {
        for (int a = 0; a < A; ++a) {
            auto row = linking[static_cast<std::size_t>(k * A + a)];
            row.emplace_back(m.f_var(a, k), -1.0);
            m.linking_row[static_cast<std::size_t>(k * A + a)] = lp.add_row(std::move(row), Sense::Equal, 0.0);
        }
    }
    for (auto& [key, entries] : convexity) {
        m.convexity_row[key] = lp.add_row(entries, Sense::Equal, 1.0);
    }
    for (int k = 0; k < K; ++k) {
        for (int a = 0; a < A; ++a) {
            lp.add_row({{m.f_var(a, k), 1.0}, {m.x_var(a, k), -big_m}}, Sense::LessEqual, 0.0);
        }
    }
    const double origin_count = static_cast<double>(origin_list.size());
    for (int k = 0; k < K; ++k) {
        if (!zero_demand_class[static_cast<std::size_t>(k)]) {
            continue;
        }
        for (int a = 0; a < A; ++a) {
            auto row = usage[static_cast<std::size_t>(k * A + a)];
            row.emplace_back(m.x_var(a, k), -origin_count);
            m.usage_row[static_cast<std::size_t>(k * A + a)] = lp.add_row(std::move(row), Sense::LessEqual, 0.0);
        }
    }
    for (int k = 0; k < K; ++k) {
        for (std::size_t i = 0; i < net.node_count(); ++i) {
            if (net.id_of(static_cast<int>(i)) == root) {
                continue;
            }
            std::vector<std::pair<int, double>> row;
            for (ArcIndex a : net.out_arcs(static_cast<int>(i))) {
                row.emplace_back(m.x_var(a, k), 1.0);
            }
            lp.add_row(std::move(row), Sense::Equal, 1.0);
        }
    }
    for (const auto& [a, b] : net.antiparallel_pairs()) {
        for (int k = 0; k < K; ++k) {
            for (int q = 0; q < K; ++q) {
                lp.add_row({{m.x_var(a, k), 1.0}, {m.x_var(b, q), 1.0}}, Sense::LessEqual, 1.0);
            }
        }
    }
    for (int a = 0; a < A; ++a) {
        std::vector<std::pair<int, double>> row{{m.v_var(a), 1.0}};
        for (int k = 0; k < K; ++k) {
            row.emplace_back(m.f_var(a, k), -1.0);
        }
        lp.add_row(std::move(row), Sense::Equal, 0.0);
    }
    for (const CycleCut& cut : cuts) {
        std::vector<std::pair<int, double>> row;
        for (ArcIndex a : cut.arcs) {
            row.emplace_back(m.x_var(a, cut.vehicle_class), 1.0);
        }
        lp.add_row(std::move(row), Sense::LessEqual, static_cast<double>(cut.arcs.size()) - 1.0);
    }
    return m;
}

std::vector<CycleCut> separate_cycles(const Network& network, int class_count, const std::vector<double>& x_values) {
    const int A = static_cast<int>(network.arc_count());
    const std::size_t n = network.node_count();
    std::vector<CycleCut> cuts;
    for (int k = 0; k < class_count; ++k) {
        std::vector<int> color(n, 0);  // 0 new, 1 on stack, 2 done
        std::vector<ArcIndex> stack_arcs;
        std::vector<int> stack_nodes;
        std::function<void(int)> dfs = [&](int u) {
            color[static_cast<std::size_t>(u)] = 1;
            stack_nodes.push_back(u);
            for (ArcIndex a : network.out_arcs(u)) {
                if (x_values[static_cast<std::size_t>(k * A + a)] <= 0.5) {
                    continue;
                }
                const int w = network.head_index(a);
                if (color[static_cast<std::size_t>(w)] == 1) {
                    CycleCut cut;
                    cut.vehicle_class = k;
                    auto pos = std::find(stack_nodes.begin(), stack_nodes.end(), w) - stack_nodes.begin();
                    cut.arcs.assign(stack_arcs.begin() + pos, stack_arcs.end());
                    cut.arcs.push_back(a);
                    cuts.push_back(std::move(cut));
                } else if (color[static_cast<std::size_t>(w)] == 0) {
                    stack_arcs.push_back(a);
                    dfs(w);
                    stack_arcs.pop_back();
                }
            }
            stack_nodes.pop_back();
            color[static_cast<std::size_t>(u)] = 2;
        };
        for (std::size_t i = 0; i < n; ++i) {
            if (color[i] == 0) {
                dfs(static_cast<int>(i));
            }
        }
    }
    return cuts;
}

DualPrices extract_duals(const RmpModel& model, const lp::LpSolution& solution) {
    if (solution.status != lp::LpStatus::Optimal) {
        throw std::logic_error(std::string("duals requested from a ") + lp::to_string(solution.status) +
                               " master solve");
    }
    DualPrices d;
    d.arc_count = model.arc_count;
    const std::size_t n = static_cast<std::size_t>(model.arc_count * model.class_count);
    d.pi.assign(n, 0.0);
    d.usage.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        d.pi[i] = solution.dual[static_cast<std::size_t>(model.linking_row[i])];
        if (model.usage_row[i] >= 0) {
            d.usage[i] = solution.dual[static_cast<std::size_t>(model.usage_row[i])];
        }
    }
    for (const auto& [key, row] : model.convexity_row) {
        d.mu[key] = solution.dual[static_cast<std::size_t>(row)];
    }
    return d;
}

double reduced_cost(const Scenario& scenario, const Column& column, const std::vector<double>& arc_times,
                    const DualPrices& duals) {
    double rc = column_cost(scenario, column, arc_times) - duals.mu.at({column.origin, column.vehicle_class});
    const double q = scenario.classes[static_cast<std::size_t>(column.vehicle_class)].demand_at(column.origin);
    for (ArcIndex a : column.arcs) {
        rc -= q * duals.pi_at(a, column.vehicle_class) + duals.usage_at(a, column.vehicle_class);
    }
    return rc;
}

std::vector<ArcClass> tree_conflicts(const Scenario& scenario, const ColumnPool& pool, const RmpModel& model,
                                     const std::vector<double>& lambda, double tol) {
    const Network& net = scenario.network;
    const int K = model.class_count;
    std::set<ArcClass> used;
    for (std::size_t pos = 0; pos < model.column_ids.size(); ++pos) {
        if (lambda[pos] <= tol) {
            continue;
        }
        const Column& c = pool[model.column_ids[pos]];
        for (ArcIndex a : c.arcs) {
            used.insert({a, c.vehicle_class});
        }
    }
    std::set<ArcClass> conflicts;
    std::map<std::pair<int, int>, std::vector<ArcIndex>> out_used;
    for (const auto& [a, k] : used) {
        out_used[{net.tail_index(a), k}].push_back(a);
    }
    for (const auto& [key, arcs] : out_used) {
        if (arcs.size() > 1) {
            for (ArcIndex a : arcs) {
                conflicts.insert({a, key.second});
            }
        }
    }
    for (const auto& [a, k] : used) {
        const ArcIndex rev = net.reverse_of(a);
        if (rev < 0) {
            continue;
        }
        for (int q = 0; q < K; ++q) {
            if (used.contains({rev, q})) {
                conflicts.insert({a, k});
                conflicts.insert({rev, q});
            }
        }
    }
    return {conflicts.begin(), conflicts.end()};
}

MasterSolution solve_master(const Scenario& scenario, const ColumnPool& pool, const RmpModel& model,
                            double integrality_tol, const lp::Basis* warm_start) {
    lp::SimplexEngine engine;
    const lp::LpSolution sol = engine.solve(model.lp, warm_start);
    MasterSolution ms;
    ms.status = sol.status;
    ms.lp_iterations = sol.iterations;
    if (sol.status != lp::LpStatus::Optimal) {
        return ms;
    }
    const int A = model.arc_count;
    const int K = model.class_count;
    ms.objective = sol.objective;
    ms.x.resize(static_cast<std::size_t>(K * A));
    ms.f.resize(static_cast<std::size_t>(K * A));
    ms.v.resize(static_cast<std::size_t>(A));
    for (int k = 0; k < K; ++k) {
        for (int a = 0; a < A; ++a) {
            ms.x[static_cast<std::size_t>(k * A + a)] = sol.primal[static_cast<std::size_t>(model.x_var(a, k))];
            ms.f[static_cast<std::size_t>(k * A + a)] =
                std::max(0.0, sol.primal[static_cast<std::size_t>(model.f_var(a, k))]);
        }
    }
    for (int a = 0; a < A; ++a) {
        ms.v[static_cast<std::size_t>(a)] = std::max(0.0, sol.primal[static_cast<std::size_t>(model.v_var(a))]);
    }
    ms.lambda.resize(model.column_ids.size());
    bool lambda_integral = true;
    for (std::size_t pos = 0; pos < model.column_ids.size(); ++pos) {
        const double value = sol.primal[static_cast<std::size_t>(model.lambda_var(pos))];
        ms.lambda[pos] = value;
        if (std::min(value, 1.0 - value) > integrality_tol) {
            lambda_integral = false;
        }
        if (pool[model.column_ids[pos]].is_dummy && value >= 1.0 - integrality_tol) {
            ms.uses_dummy = true;
        }
    }
    ms.duals = extract_duals(model, sol);
    ms.basis = sol.basis;
    ms.integral = lambda_integral && !ms.uses_dummy &&
                  tree_conflicts(scenario, pool, model, ms.lambda, integrality_tol).empty();
    return ms;
}

}  // namespace evactree
