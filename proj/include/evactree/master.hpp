#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "evactree/lp.hpp"
#include "evactree/scenario.hpp"

namespace evactree {

inline constexpr double kDummyColumnCost = 1e9;

/// One origin-to-root path for one vehicle class.
struct Column {
    NodeId origin = 0;
    int vehicle_class = 0;
    std::vector<ArcIndex> arcs;  // origin -> root, in order
    int hops = 0;
    bool refuel = false;  // the path needs a station (and visits one)
    bool is_dummy = false;

    friend bool operator==(const Column&, const Column&) = default;
};

/// Builds a column from an arc sequence; hops count real arcs only.
Column make_column(const Scenario& scenario, NodeId origin, int vehicle_class, std::vector<ArcIndex> arcs,
                   RefuelConvention convention = RefuelConvention::AtLeast);
Column make_dummy_column(NodeId origin, int vehicle_class);

/// Nodes visited by a column, origin first.
std::vector<NodeId> column_nodes(const Scenario& scenario, const Column& column);

/// q_o^k * sum of arc times + q_o^k * r^k * hops when the column refuels.
double column_cost(const Scenario& scenario, const Column& column, const std::vector<double>& arc_times);

/// Append-only column store; identical columns share one id.
class ColumnPool {
public:
    int add(const Column& column);
    std::optional<int> find(const Column& column) const;
    const Column& operator[](int id) const { return columns_.at(static_cast<std::size_t>(id)); }
    std::size_t size() const { return columns_.size(); }

private:
    std::vector<Column> columns_;
    std::map<std::tuple<NodeId, int, bool, std::vector<ArcIndex>>, int> index_;
};

using ArcClass = std::pair<ArcIndex, int>;

struct BranchState {
    std::set<int> lambda_fixed_one;   // column ids
    std::set<int> lambda_fixed_zero;  // column ids (forbidden paths)
    std::map<ArcClass, int> x_fixed;  // (arc, class) -> 0 | 1

    /// Empty when consistent, otherwise a description of the first conflict.
    std::string conflict(const Network& network, int class_count) const;

    /// Arcs a path of class k may not use under these fixings.
    std::vector<char> forbidden_arcs(const Network& network, int vehicle_class) const;
};

struct CycleCut {
    int vehicle_class = 0;
    std::vector<ArcIndex> arcs;  // sum of x over arcs <= |arcs| - 1

    friend bool operator==(const CycleCut&, const CycleCut&) = default;
};

/// Restricted master LP together with its row/variable layout.
struct RmpModel {
    lp::LinearProgram lp;
    int arc_count = 0;
    int class_count = 0;
    std::vector<int> column_ids;  // lambda order
    std::vector<int> linking_row;      // [k * A + a]
    std::vector<int> usage_row;        // [k * A + a], -1 when absent
    std::map<std::pair<NodeId, int>, int> convexity_row;

    int x_var(ArcIndex a, int k) const { return k * arc_count + a; }
    int f_var(ArcIndex a, int k) const { return (class_count + k) * arc_count + a; }
    int v_var(ArcIndex a) const { return 2 * class_count * arc_count + a; }
    int lambda_var(std::size_t position) const {
        return (2 * class_count + 1) * arc_count + static_cast<int>(position);
    }
};

/// Throws std::invalid_argument when some (origin, class) has no column.
RmpModel build_rmp(const Scenario& scenario, const ColumnPool& pool, const std::vector<int>& column_ids,
                   const std::vector<double>& fixed_times, const BranchState& branch,
                   const std::vector<CycleCut>& cuts);

/// Directed cycles in the support {x > 0.5}, one cut per cycle found.
std::vector<CycleCut> separate_cycles(const Network& network, int class_count,
                                      const std::vector<double>& x_values);

struct DualPrices {
    std::vector<double> pi;     // [k * A + a], linking rows
    std::vector<double> usage;  // [k * A + a], usage rows (0 when absent)
    std::map<std::pair<NodeId, int>, double> mu;
    int arc_count = 0;

    double pi_at(ArcIndex a, int k) const { return pi[static_cast<std::size_t>(k * arc_count + a)]; }
    double usage_at(ArcIndex a, int k) const { return usage[static_cast<std::size_t>(k * arc_count + a)]; }
};

DualPrices extract_duals(const RmpModel& model, const lp::LpSolution& solution);

/// Reduced cost of a column against the given duals.
double reduced_cost(const Scenario& scenario, const Column& column, const std::vector<double>& arc_times,
                    const DualPrices& duals);

struct MasterSolution {
    lp::LpStatus status = lp::LpStatus::Infeasible;
    std::vector<double> lambda;  // per model column position
    std::vector<double> x, f;    // [k * A + a]
    std::vector<double> v;       // per arc
    DualPrices duals;
    double objective = 0.0;
    int lp_iterations = 0;
    bool integral = false;
    bool uses_dummy = false;  // some dummy column at value 1
    lp::Basis basis;
};

/// Solves the restricted master, optionally warm-started.
MasterSolution solve_master(const Scenario& scenario, const ColumnPool& pool, const RmpModel& model,
                            double integrality_tol = 1e-6, const lp::Basis* warm_start = nullptr);

/// Arcs of (class, arc) pairs whose used paths conflict: a node with two used
/// out-arcs in a class, or an anti-parallel pair used in opposite directions.
std::vector<ArcClass> tree_conflicts(const Scenario& scenario, const ColumnPool& pool, const RmpModel& model,
                                     const std::vector<double>& lambda, double tol);

}  // namespace evactree
