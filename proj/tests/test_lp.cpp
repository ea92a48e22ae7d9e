#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "evactree/lp.hpp"

using namespace evactree;
using namespace evactree::lp;

namespace {

// Solves a dense square system by Gaussian elimination; false if singular.
bool dense_solve(std::vector<std::vector<double>> A, std::vector<double> b, std::vector<double>& x) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r) {
            if (std::abs(A[r][c]) > std::abs(A[p][c])) p = r;
        }
        if (std::abs(A[p][c]) < 1e-10) return false;
        std::swap(A[p], A[c]);
        std::swap(b[p], b[c]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            const double f = A[r][c] / A[c][c];
            for (std::size_t k = c; k < n; ++k) A[r][k] -= f * A[c][k];
            b[r] -= f * b[c];
        }
    }
    x.resize(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / A[i][i];
    return true;
}

// Minimum over all basic feasible points of a box-bounded LP.
double vertex_enumeration(const LinearProgram& lp) {
    const int n = static_cast<int>(lp.variables.size());
    struct Hyperplane {
        std::vector<double> a;
        double rhs;
    };
    std::vector<Hyperplane> planes;
    for (const Row& r : lp.rows) {
        Hyperplane h{std::vector<double>(static_cast<std::size_t>(n), 0.0), r.rhs};
        for (auto [j, v] : r.coefficients) h.a[static_cast<std::size_t>(j)] += v;
        planes.push_back(h);
    }
    for (int j = 0; j < n; ++j) {
        for (double bound : {lp.variables[static_cast<std::size_t>(j)].lower, lp.variables[static_cast<std::size_t>(j)].upper}) {
            Hyperplane h{std::vector<double>(static_cast<std::size_t>(n), 0.0), bound};
            h.a[static_cast<std::size_t>(j)] = 1.0;
            planes.push_back(h);
        }
    }
    double best = kInfinity;
    std::vector<int> pick(static_cast<std::size_t>(n));
    const int P = static_cast<int>(planes.size());
    std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == n) {
            std::vector<std::vector<double>> A;
            std::vector<double> b;
            for (int i : pick) {
                A.push_back(planes[static_cast<std::size_t>(i)].a);
                b.push_back(planes[static_cast<std::size_t>(i)].rhs);
            }
            std::vector<double> x;
            if (!dense_solve(A, b, x)) return;
            if (primal_residual(lp, x) > 1e-7) return;
            double obj = 0.0;
            for (int j = 0; j < n; ++j) obj += lp.variables[static_cast<std::size_t>(j)].cost * x[static_cast<std::size_t>(j)];
            best = std::min(best, obj);
            return;
        }
        for (int i = start; i < P; ++i) {
            pick[static_cast<std::size_t>(depth)] = i;
            rec(i + 1, depth + 1);
        }
    };
    rec(0, 0);
    return best;
}

void check_optimality_certificate(const LinearProgram& lp, const LpSolution& s) {
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(primal_residual(lp, s.primal) <= 1e-7);
    // dual objective with bound multipliers: b'y + sum over reduced costs at bounds
    double dual_obj = 0.0;
    for (std::size_t i = 0; i < lp.rows.size(); ++i) dual_obj += lp.rows[i].rhs * s.dual[i];
    for (std::size_t j = 0; j < lp.variables.size(); ++j) {
        const double d = s.reduced_cost[j];
        const Variable& v = lp.variables[j];
        if (d > 1e-9) dual_obj += d * v.lower;
        if (d < -1e-9) dual_obj += d * v.upper;
    }
    CHECK(std::abs(dual_obj - s.objective) <= 1e-7 * std::max(1.0, std::abs(s.objective)));
    for (std::size_t i = 0; i < lp.rows.size(); ++i) {
        const Row& r = lp.rows[i];
        double lhs = 0.0;
        for (auto [j, a] : r.coefficients) lhs += a * s.primal[static_cast<std::size_t>(j)];
        CHECK(std::abs(s.dual[i] * (lhs - r.rhs)) <= 1e-6);
        if (r.sense == Sense::LessEqual) CHECK(s.dual[i] <= 1e-9);
        if (r.sense == Sense::GreaterEqual) CHECK(s.dual[i] >= -1e-9);
    }
    for (std::size_t j = 0; j < lp.variables.size(); ++j) {
        const Variable& v = lp.variables[j];
        const double x = s.primal[j];
        const double d = s.reduced_cost[j];
        if (x > v.lower + 1e-7 && x < v.upper - 1e-7) CHECK(std::abs(d) <= 1e-6);
        if (std::abs(x - v.lower) <= 1e-7 && v.lower != v.upper) CHECK(d >= -1e-6);
        if (std::abs(x - v.upper) <= 1e-7 && v.lower != v.upper) CHECK(d <= 1e-6);
    }
}

}  // namespace

TEST_CASE("one-variable lp") {
    LinearProgram lp;
    const int x = lp.add_variable(0.0, kInfinity, 1.0, "x");
    lp.add_row({{x, 1.0}}, Sense::GreaterEqual, 1.0);
    const LpSolution s = solve_lp(lp);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.primal[0] == doctest::Approx(1.0));
    CHECK(s.dual[0] == doctest::Approx(1.0));
    CHECK(s.objective == doctest::Approx(1.0));
}

TEST_CASE("empty feasible set is infeasible") {
    LinearProgram lp;
    const int x = lp.add_variable(0.0, kInfinity, 0.0);
    lp.add_row({{x, 1.0}}, Sense::LessEqual, 1.0);
    lp.add_row({{x, 1.0}}, Sense::GreaterEqual, 2.0);
    CHECK(solve_lp(lp).status == LpStatus::Infeasible);
}

TEST_CASE("unbounded ray") {
    LinearProgram lp;
    const int x = lp.add_variable(0.0, kInfinity, -1.0);
    const int y = lp.add_variable(0.0, kInfinity, 0.0);
    lp.add_row({{x, 1.0}, {y, -1.0}}, Sense::LessEqual, 3.0);
    CHECK(solve_lp(lp).status == LpStatus::Unbounded);
}

TEST_CASE("2x2 transportation problem matches vertex enumeration") {
    LinearProgram lp;
    // cost matrix indexed (demand, supply); read row-wise as (supply, demand) the optimum is 6
    const double cost[2][2] = {{1, 2}, {3, 1}};
    int v[2][2];
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) v[i][j] = lp.add_variable(0.0, 10.0, cost[j][i]);
    lp.add_row({{v[0][0], 1}, {v[0][1], 1}}, Sense::Equal, 3.0);
    lp.add_row({{v[1][0], 1}, {v[1][1], 1}}, Sense::Equal, 2.0);
    lp.add_row({{v[0][0], 1}, {v[1][0], 1}}, Sense::Equal, 2.0);
    lp.add_row({{v[0][1], 1}, {v[1][1], 1}}, Sense::Equal, 3.0);
    const double oracle = vertex_enumeration(lp);
    CHECK(oracle == doctest::Approx(7.0));
    const LpSolution s = solve_lp(lp);
    check_optimality_certificate(lp, s);
    CHECK(s.objective == doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("negative lower bounds and free-standing equality") {
    LinearProgram lp;
    const int x = lp.add_variable(-5.0, 5.0, 1.0);
    const int y = lp.add_variable(-2.0, 3.0, -2.0);
    lp.add_row({{x, 1.0}, {y, 1.0}}, Sense::Equal, 0.5);
    const LpSolution s = solve_lp(lp);
    check_optimality_certificate(lp, s);
    CHECK(s.objective == doctest::Approx(vertex_enumeration(lp)));
}

TEST_CASE("randomized lps agree with vertex enumeration") {
    std::mt19937 rng(20240611);
    std::uniform_real_distribution<double> coef(-3.0, 3.0);
    std::uniform_int_distribution<int> small(0, 2);
    int checked = 0;
    for (int trial = 0; trial < 150; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 5);
        const int m = 1 + static_cast<int>(rng() % 4);
        LinearProgram lp;
        std::vector<double> x0;
        for (int j = 0; j < n; ++j) {
            const double lo = small(rng) == 0 ? -2.0 : 0.0;
            const double hi = lo + 1.0 + 4.0 * std::abs(coef(rng));
            lp.add_variable(lo, hi, coef(rng));
            x0.push_back(lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(rng));
        }
        for (int i = 0; i < m; ++i) {
            std::vector<std::pair<int, double>> row;
            double lhs = 0.0;
            for (int j = 0; j < n; ++j) {
                if (rng() % 3 == 0) continue;
                const double a = std::round(coef(rng) * 4.0) / 4.0;
                if (a == 0.0) continue;
                row.emplace_back(j, a);
                lhs += a * x0[static_cast<std::size_t>(j)];
            }
            const int kind = small(rng);
            if (kind == 0) lp.add_row(row, Sense::LessEqual, lhs + std::abs(coef(rng)));
            else if (kind == 1) lp.add_row(row, Sense::GreaterEqual, lhs - std::abs(coef(rng)));
            else lp.add_row(row, Sense::Equal, lhs);
        }
        const double oracle = vertex_enumeration(lp);
        const LpSolution s = solve_lp(lp);
        CAPTURE(trial);
        CAPTURE(lp.dump());
        check_optimality_certificate(lp, s);
        CHECK(std::abs(s.objective - oracle) <= 1e-6 * std::max(1.0, std::abs(oracle)));
        ++checked;
    }
    CHECK(checked == 150);
}

TEST_CASE("degenerate assignment polytope terminates") {
    // 5x5 assignment LP is highly degenerate.
    const int n = 5;
    LinearProgram lp;
    std::mt19937 rng(7);
    std::vector<std::vector<int>> v(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) v[i][j] = lp.add_variable(0.0, kInfinity, static_cast<double>(rng() % 4));
    for (int i = 0; i < n; ++i) {
        std::vector<std::pair<int, double>> r, c;
        for (int j = 0; j < n; ++j) {
            r.emplace_back(v[i][j], 1.0);
            c.emplace_back(v[j][i], 1.0);
        }
        lp.add_row(r, Sense::Equal, 1.0);
        lp.add_row(c, Sense::Equal, 1.0);
    }
    const LpSolution s = solve_lp(lp);
    check_optimality_certificate(lp, s);
}

TEST_CASE("warm start after appending columns") {
    LinearProgram lp;
    const int a = lp.add_variable(0.0, kInfinity, 10.0);
    lp.add_row({{a, 1.0}}, Sense::Equal, 1.0);
    lp.add_row({{a, 2.0}}, Sense::LessEqual, 5.0);
    SimplexEngine engine;
    const LpSolution first = engine.solve(lp);
    REQUIRE(first.status == LpStatus::Optimal);
    CHECK(first.objective == doctest::Approx(10.0));

    const int b = lp.add_variable(0.0, kInfinity, 3.0);
    lp.rows[0].coefficients.emplace_back(b, 1.0);
    lp.rows[1].coefficients.emplace_back(b, 1.0);
    const LpSolution warm = engine.solve(lp, &first.basis);
    check_optimality_certificate(lp, warm);
    CHECK(warm.objective == doctest::Approx(3.0));
    CHECK(warm.primal[1] == doctest::Approx(1.0));
}

TEST_CASE("iteration limit is reported") {
    LinearProgram lp;
    std::vector<std::pair<int, double>> row;
    for (int j = 0; j < 6; ++j) row.emplace_back(lp.add_variable(0.0, 1.0, -1.0 - j), 1.0);
    lp.add_row(row, Sense::GreaterEqual, 2.0);
    lp.add_row(row, Sense::LessEqual, 3.0);
    SimplexOptions opt;
    opt.max_iterations = 1;
    SimplexEngine engine(opt);
    const LpSolution s = engine.solve(lp);
    CHECK(s.status == LpStatus::IterationLimit);
    CHECK(s.primal.size() == 6);
}

TEST_CASE("validate rejects bad indices and bounds") {
    LinearProgram lp;
    lp.add_variable(1.0, 0.0, 0.0);
    CHECK_THROWS_AS(lp.validate(), std::invalid_argument);
    LinearProgram lp2;
    lp2.add_variable(0.0, 1.0, 0.0);
    lp2.add_row({{3, 1.0}}, Sense::LessEqual, 1.0);
    CHECK_THROWS_AS(lp2.validate(), std::invalid_argument);
    CHECK(lp2.dump().find("ROWS 1") != std::string::npos);
}
