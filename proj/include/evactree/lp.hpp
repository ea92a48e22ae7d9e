#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "evactree/network.hpp"

namespace evactree::lp {

enum class Sense { LessEqual, Equal, GreaterEqual };

struct Variable {
    double lower = 0.0;
    double upper = kInfinity;
    double cost = 0.0;
    std::string name;
};

struct Row {
    std::vector<std::pair<int, double>> coefficients;  // (variable, value)
    Sense sense = Sense::LessEqual;
    double rhs = 0.0;
    std::string name;
};

/// Minimisation LP in row form.
struct LinearProgram {
    std::vector<Variable> variables;
    std::vector<Row> rows;

    int add_variable(double lower, double upper, double cost, std::string name = {});
    int add_row(std::vector<std::pair<int, double>> coefficients, Sense sense, double rhs, std::string name = {});

    /// Throws std::invalid_argument when bounds or coefficient indices are inconsistent.
    void validate() const;

    /// Fixed plain-text layout for debugging.
    std::string dump() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

const char* to_string(LpStatus status);

struct Tolerances {
    double feasibility = 1e-7;
    double optimality = 1e-6;  // reduced-cost termination
    double pivot = 1e-9;
};

/// Simplex basis snapshot used for warm starts. Column indices live in the
/// solver's internal space: structurals, then one slack per row, then one
/// artificial per row.
struct Basis {
    int structural_count = 0;
    int row_count = 0;
    std::vector<int> basic;                 // size row_count
    std::vector<std::int8_t> at_upper;      // size structural_count + row_count
    std::vector<std::int8_t> artificial_sign;  // size row_count

    bool empty() const { return basic.empty(); }
};

struct LpSolution {
    LpStatus status = LpStatus::IterationLimit;
    std::vector<double> primal;          // per variable
    std::vector<double> dual;            // per row; reduced cost = c - A^T dual
    std::vector<double> reduced_cost;    // per variable
    double objective = 0.0;
    int iterations = 0;
    Basis basis;
};

class LpEngine {
public:
    virtual ~LpEngine() = default;
    virtual LpSolution solve(const LinearProgram& lp, const Basis* warm_start = nullptr) = 0;
};

struct SimplexOptions {
    Tolerances tol;
    int max_iterations = 0;       // 0: automatic, 50 * (rows + columns) + 1000
    int refactor_interval = 100;
};

/// Bounded-variable primal revised simplex on a geometrically scaled copy of
/// the problem. Dantzig pricing with an EXPAND ratio test (growing feasibility
/// tolerance) against degenerate stalling; a singular basis falls back to a
/// cold phase-1 restart.
class SimplexEngine final : public LpEngine {
public:
    explicit SimplexEngine(SimplexOptions options = {}) : options_(options) {}
    LpSolution solve(const LinearProgram& lp, const Basis* warm_start = nullptr) override;

private:
    SimplexOptions options_;
};

LpSolution solve_lp(const LinearProgram& lp);

/// Max violation of row/bound feasibility for a primal point.
double primal_residual(const LinearProgram& lp, const std::vector<double>& x);

}  // namespace evactree::lp
