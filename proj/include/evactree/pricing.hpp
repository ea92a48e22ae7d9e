#pragma once

#include <map>
#include <optional>
#include <vector>

#include "evactree/master.hpp"

namespace evactree {

struct PricingResult {
    std::optional<Column> column;
    double reduced_cost = kInfinity;
};

struct PricingInput {
    const Scenario* scenario = nullptr;
    const std::vector<double>* arc_times = nullptr;  // t̂ per arc
    const DualPrices* duals = nullptr;
    const BranchState* branch = nullptr;  // may be null
    RefuelConvention convention = RefuelConvention::AtLeast;
};

/// Minimum reduced-cost elementary origin->root path of one class, skipping
/// the forbidden paths. Label correcting with (cost, hops, station, visited)
/// dominance; with F forbidden paths a label is dropped only when F + 1 kept
/// labels dominate it, so a non-forbidden optimum always survives.
PricingResult solve_pricing(const PricingInput& input, NodeId origin, int vehicle_class,
                            const std::vector<Column>& forbidden = {});

using PricingKey = std::pair<NodeId, int>;  // (origin, class)

/// Prices every (origin, class) pair. Forbidden paths come from the branch
/// state's lambda_fixed_zero set. Results are keyed, so evaluation order
/// (and thread count) does not affect them.
std::map<PricingKey, PricingResult> price_all(const PricingInput& input, const ColumnPool& pool,
                                              const std::vector<PricingKey>& keys, int threads = 1);

}  // namespace evactree
