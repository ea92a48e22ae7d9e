#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "evactree/solution.hpp"

namespace evactree {

/// Travel uses BPR times at the solution's own total flows; refuel is charged
/// per origin from its path's hop count. Throws std::invalid_argument when the
/// stored flows disagree with the paths.
ObjectiveBreakdown true_objective(const Solution& solution, const Scenario& scenario);

struct Violation {
    std::string family;    // "out-degree", "contraflow", "station-access", ...
    std::string location;  // e.g. "node 4 class 0"
    double magnitude = 0.0;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool pass() const { return violations.empty(); }
    bool has_family(const std::string& family) const;
    std::string to_json() const;
};

/// Checks the arc formulation directly on a solution; never throws on content.
ValidationReport validate_solution(const Solution& solution, const Scenario& scenario);

class OracleRefusal : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kOracleMaxNodes = 7;
inline constexpr std::size_t kOracleMaxClasses = 2;

/// Exhaustive optimum over per-class arborescences and their products.
Solution oracle_solve(const Scenario& scenario, RefuelConvention convention = RefuelConvention::AtLeast);

}  // namespace evactree
