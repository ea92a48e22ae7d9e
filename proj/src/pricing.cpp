#include "evactree/pricing.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <thread>

#include <boost/dynamic_bitset.hpp>

namespace evactree {

namespace {

struct Label {
    int node = 0;  // node index
    int hops = 0;
    bool station = false;
    double cost = 0.0;
    boost::dynamic_bitset<> visited;
    int parent = -1;
    ArcIndex via = -1;
    bool alive = true;
};

bool dominates(const Label& a, const Label& b) {
    return a.cost <= b.cost && a.hops <= b.hops && (a.station || !b.station) && a.visited.is_subset_of(b.visited);
}

std::vector<ArcIndex> path_of(const std::vector<Label>& labels, int idx) {
    std::vector<ArcIndex> arcs;
    for (int i = idx; labels[static_cast<std::size_t>(i)].parent >= 0; i = labels[static_cast<std::size_t>(i)].parent) {
        arcs.push_back(labels[static_cast<std::size_t>(i)].via);
    }
    std::reverse(arcs.begin(), arcs.end());
    return arcs;
}

}  // namespace

PricingResult solve_pricing(const PricingInput& input, NodeId origin, int vehicle_class,
                            const std::vector<Column>& forbidden) {
    const Scenario& sc = *input.scenario;
    const Network& net = sc.network;
    const VehicleClass& vc = sc.classes.at(static_cast<std::size_t>(vehicle_class));
    const std::vector<double>& times = *input.arc_times;
    const DualPrices& duals = *input.duals;
    const double q = vc.demand_at(origin);
    const double mu = duals.mu.at({origin, vehicle_class});
    const int root = net.index_of(sc.root());
    const std::size_t n = net.node_count();
    const std::size_t allowed_dominators = forbidden.size() + 1;

    static const BranchState kNoBranch;
    const std::vector<char> blocked =
        (input.branch ? *input.branch : kNoBranch).forbidden_arcs(net, vehicle_class);

    std::vector<double> weight(net.arc_count());
    for (std::size_t a = 0; a < net.arc_count(); ++a) {
        const auto ai = static_cast<ArcIndex>(a);
        weight[a] = q * (times[a] - duals.pi_at(ai, vehicle_class)) - duals.usage_at(ai, vehicle_class);
    }

    std::vector<Label> labels;
    std::vector<std::vector<int>> at_node(n);
    std::vector<int> at_root;
    std::deque<int> queue;

    Label start;
    start.node = net.index_of(origin);
    start.station = vc.is_station(origin);
    start.visited.resize(n);
    start.visited.set(static_cast<std::size_t>(start.node));
    labels.push_back(std::move(start));
    at_node[static_cast<std::size_t>(labels[0].node)].push_back(0);
    queue.push_back(0);

    auto count_dominators = [&](const Label& l, int self) {
        std::size_t count = 0;
        for (int j : at_node[static_cast<std::size_t>(l.node)]) {
            if (j != self && labels[static_cast<std::size_t>(j)].alive && dominates(labels[static_cast<std::size_t>(j)], l)) {
                if (++count >= allowed_dominators) {
                    break;
                }
            }
        }
        return count;
    };

    while (!queue.empty()) {
        const int cur = queue.front();
        queue.pop_front();
        if (!labels[static_cast<std::size_t>(cur)].alive) {
            continue;
        }
        const int u = labels[static_cast<std::size_t>(cur)].node;
        for (ArcIndex a : net.out_arcs(u)) {
            if (blocked[static_cast<std::size_t>(a)]) {
                continue;
            }
            const int w = net.head_index(a);
            const Label& from = labels[static_cast<std::size_t>(cur)];
            if (from.visited.test(static_cast<std::size_t>(w))) {
                continue;
            }
            Label next;
            next.node = w;
            next.hops = from.hops + net.arc(a).hop_weight();
            next.station = from.station || vc.is_station(net.id_of(w));
            next.cost = from.cost + weight[static_cast<std::size_t>(a)];
            next.visited = from.visited;
            next.visited.set(static_cast<std::size_t>(w));
            next.parent = cur;
            next.via = a;
            if (w == root) {
                labels.push_back(std::move(next));
                at_root.push_back(static_cast<int>(labels.size()) - 1);
                continue;
            }
            if (count_dominators(next, -1) >= allowed_dominators) {
                continue;
            }
            labels.push_back(std::move(next));
            const int idx = static_cast<int>(labels.size()) - 1;
            auto& bucket = at_node[static_cast<std::size_t>(w)];
            bucket.push_back(idx);
            for (int j : bucket) {
                Label& other = labels[static_cast<std::size_t>(j)];
                if (j == idx || !other.alive || !dominates(labels[static_cast<std::size_t>(idx)], other)) {
                    continue;
                }
                if (allowed_dominators == 1 || count_dominators(other, j) >= allowed_dominators) {
                    other.alive = false;
                }
            }
            std::erase_if(bucket, [&](int j) { return !labels[static_cast<std::size_t>(j)].alive; });
            queue.push_back(idx);
        }
    }

    PricingResult best;
    std::vector<ArcIndex> best_arcs;
    int best_hops = 0;
    for (int idx : at_root) {
        const Label& l = labels[static_cast<std::size_t>(idx)];
        if (!path_feasible(l.hops, l.station, vc.tau_hops, input.convention)) {
            continue;
        }
        const bool refuel = refuel_required(l.hops, vc.tau_hops, input.convention);
        const double rc = l.cost + (refuel ? q * vc.refuel_rate() * l.hops : 0.0) - mu;
        if (rc > best.reduced_cost) {
            continue;
        }
        std::vector<ArcIndex> arcs = path_of(labels, idx);
        if (rc == best.reduced_cost &&
            (l.hops > best_hops || (l.hops == best_hops && arcs >= best_arcs))) {
            continue;
        }
        const bool is_forbidden = std::any_of(forbidden.begin(), forbidden.end(), [&](const Column& c) {
            return c.arcs == arcs;
        });
        if (is_forbidden) {
            continue;
        }
        best.reduced_cost = rc;
        best_arcs = std::move(arcs);
        best_hops = l.hops;
        best.column = Column{};
    }
    if (best.column) {
        best.column = make_column(sc, origin, vehicle_class, best_arcs, input.convention);
    }
    return best;
}

std::map<PricingKey, PricingResult> price_all(const PricingInput& input, const ColumnPool& pool,
                                              const std::vector<PricingKey>& keys, int threads) {
    std::map<PricingKey, std::vector<Column>> forbidden;
    if (input.branch) {
        for (int id : input.branch->lambda_fixed_zero) {
            const Column& c = pool[id];
            if (!c.is_dummy) {
                forbidden[{c.origin, c.vehicle_class}].push_back(c);
            }
        }
    }
    std::vector<PricingResult> results(keys.size());
    auto work = [&](std::size_t i) {
        auto it = forbidden.find(keys[i]);
        static const std::vector<Column> kNone;
        results[i] = solve_pricing(input, keys[i].first, keys[i].second, it == forbidden.end() ? kNone : it->second);
    };
    const int workers = std::max(1, std::min<int>(threads, static_cast<int>(keys.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < keys.size(); ++i) {
            work(i);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool_threads;
        for (int t = 0; t < workers; ++t) {
            pool_threads.emplace_back([&] {
                for (std::size_t i = next++; i < keys.size(); i = next++) {
                    work(i);
                }
            });
        }
        for (auto& t : pool_threads) {
            t.join();
        }
    }
    std::map<PricingKey, PricingResult> out;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        out.emplace(keys[i], std::move(results[i]));
    }
    return out;
}

}  // namespace evactree
