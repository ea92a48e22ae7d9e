#include "evactree/lp.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace evactree::lp {

int LinearProgram::add_variable(double lower, double upper, double cost, std::string name) {
    variables.push_back(Variable{lower, upper, cost, std::move(name)});
    return static_cast<int>(variables.size()) - 1;
}

int LinearProgram::add_row(std::vector<std::pair<int, double>> coefficients, Sense sense, double rhs,
                           std::string name) {
    rows.push_back(Row{std::move(coefficients), sense, rhs, std::move(name)});
    return static_cast<int>(rows.size()) - 1;
}

void LinearProgram::validate() const {
    for (std::size_t j = 0; j < variables.size(); ++j) {
        const Variable& v = variables[j];
        if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper || v.lower == kInfinity ||
            v.upper == -kInfinity || !std::isfinite(v.cost)) {
            throw std::invalid_argument("variable " + std::to_string(j) + " has inconsistent bounds or cost");
        }
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!std::isfinite(rows[i].rhs)) {
            throw std::invalid_argument("row " + std::to_string(i) + " has a non-finite right-hand side");
        }
        for (const auto& [j, a] : rows[i].coefficients) {
            if (j < 0 || static_cast<std::size_t>(j) >= variables.size() || !std::isfinite(a)) {
                throw std::invalid_argument("row " + std::to_string(i) + " references an invalid variable");
            }
        }
    }
}

std::string LinearProgram::dump() const {
    std::ostringstream out;
    out << std::setprecision(12);
    out << "VARIABLES " << variables.size() << "\n";
    for (std::size_t j = 0; j < variables.size(); ++j) {
        const Variable& v = variables[j];
        out << j << ' ' << (v.name.empty() ? "-" : v.name) << ' ' << v.lower << ' ' << v.upper << ' ' << v.cost
            << "\n";
    }
    out << "ROWS " << rows.size() << "\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Row& r = rows[i];
        out << i << ' ' << (r.name.empty() ? "-" : r.name) << ' '
            << (r.sense == Sense::LessEqual ? "<=" : r.sense == Sense::Equal ? "=" : ">=") << ' ' << r.rhs;
        for (const auto& [j, a] : r.coefficients) {
            out << ' ' << j << ':' << a;
        }
        out << "\n";
    }
    return out.str();
}

const char* to_string(LpStatus status) {
    switch (status) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
        case LpStatus::IterationLimit: return "iteration-limit";
    }
    return "unknown";
}

double primal_residual(const LinearProgram& lp, const std::vector<double>& x) {
    double worst = 0.0;
    for (std::size_t j = 0; j < lp.variables.size(); ++j) {
        worst = std::max(worst, lp.variables[j].lower - x[j]);
        worst = std::max(worst, x[j] - lp.variables[j].upper);
    }
    for (const Row& r : lp.rows) {
        double lhs = 0.0;
        for (const auto& [j, a] : r.coefficients) {
            lhs += a * x[static_cast<std::size_t>(j)];
        }
        if (r.sense != Sense::GreaterEqual) {
            worst = std::max(worst, lhs - r.rhs);
        }
        if (r.sense != Sense::LessEqual) {
            worst = std::max(worst, r.rhs - lhs);
        }
    }
    return worst;
}

namespace {

enum State : std::int8_t { kBasic, kAtLower, kAtUpper, kAtZero };

class Simplex {
public:
    Simplex(const LinearProgram& lp, const SimplexOptions& options);
    LpSolution run(const Basis* warm);

private:
    using SparseColumn = std::vector<std::pair<int, double>>;

    template <typename F>
    void for_each_entry(int j, F&& f) const {
        if (j < n_) {
            for (const auto& [i, a] : cols_[static_cast<std::size_t>(j)]) {
                f(i, a);
            }
        } else if (j < n_ + m_) {
            f(j - n_, 1.0);
        } else {
            f(j - n_ - m_, static_cast<double>(art_sign_[static_cast<std::size_t>(j - n_ - m_)]));
        }
    }

    bool is_artificial(int j) const { return j >= n_ + m_; }
    double& binv(int i, int k) { return binv_[static_cast<std::size_t>(k) * m_ + i]; }

    void scale();
    void set_nonbasic_default(int j);
    bool cold_start();
    bool warm_start(const Basis& warm);
    bool factorize();
    void compute_basic_values();
    void btran(const std::vector<double>& cost, std::vector<double>& y) const;
    void ftran(int q, std::vector<double>& alpha) const;
    double reduced_cost(int j, const std::vector<double>& cost, const std::vector<double>& y) const;
    void pivot(int r, int q, const std::vector<double>& alpha);
    LpStatus iterate(const std::vector<double>& cost, bool phase_one);
    void snap_nonbasic();
    void drive_out_artificials();
    bool primal_feasible() const;

    const LinearProgram& lp_;
    SimplexOptions opt_;
    int n_ = 0, m_ = 0, total_ = 0;
    std::vector<SparseColumn> cols_;
    std::vector<double> lo_, up_, b_;
    std::vector<double> row_scale_, col_scale_;
    std::vector<std::int8_t> art_sign_;
    std::vector<int> basic_, pos_;
    std::vector<std::int8_t> state_;
    std::vector<double> x_;
    std::vector<double> binv_;
    int iterations_ = 0;
    int max_iterations_ = 0;
    int since_refactor_ = 0;
    bool restart_ = false;  // singular basis or feasibility lost; solve again from a slack basis
};

Simplex::Simplex(const LinearProgram& lp, const SimplexOptions& options) : lp_(lp), opt_(options) {
    n_ = static_cast<int>(lp.variables.size());
    m_ = static_cast<int>(lp.rows.size());
    total_ = n_ + 2 * m_;
    cols_.assign(static_cast<std::size_t>(n_), {});
    b_.resize(static_cast<std::size_t>(m_));
    lo_.resize(static_cast<std::size_t>(total_));
    up_.resize(static_cast<std::size_t>(total_));
    for (int i = 0; i < m_; ++i) {
        const Row& row = lp.rows[static_cast<std::size_t>(i)];
        b_[static_cast<std::size_t>(i)] = row.rhs;
        for (const auto& [j, a] : row.coefficients) {
            if (a != 0.0) {
                cols_[static_cast<std::size_t>(j)].emplace_back(i, a);
            }
        }
        const auto s = static_cast<std::size_t>(n_ + i);
        switch (row.sense) {
            case Sense::LessEqual: lo_[s] = 0.0; up_[s] = kInfinity; break;
            case Sense::GreaterEqual: lo_[s] = -kInfinity; up_[s] = 0.0; break;
            case Sense::Equal: lo_[s] = 0.0; up_[s] = 0.0; break;
        }
        lo_[static_cast<std::size_t>(n_ + m_ + i)] = 0.0;
        up_[static_cast<std::size_t>(n_ + m_ + i)] = kInfinity;
    }
    scale();
    for (int i = 0; i < m_; ++i) {
        b_[static_cast<std::size_t>(i)] *= row_scale_[static_cast<std::size_t>(i)];
    }
    for (int j = 0; j < n_; ++j) {
        // x = col_scale * x_scaled
        const double c = col_scale_[static_cast<std::size_t>(j)];
        lo_[static_cast<std::size_t>(j)] = lp.variables[static_cast<std::size_t>(j)].lower / c;
        up_[static_cast<std::size_t>(j)] = lp.variables[static_cast<std::size_t>(j)].upper / c;
    }
    art_sign_.assign(static_cast<std::size_t>(m_), 1);
    basic_.assign(static_cast<std::size_t>(m_), -1);
    pos_.assign(static_cast<std::size_t>(total_), -1);
    state_.assign(static_cast<std::size_t>(total_), kAtLower);
    x_.assign(static_cast<std::size_t>(total_), 0.0);
    binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
    max_iterations_ = opt_.max_iterations > 0 ? opt_.max_iterations : 50 * (m_ + n_) + 1000;
}

// Geometric-mean row and column scaling rounded to powers of two.
void Simplex::scale() {
    row_scale_.assign(static_cast<std::size_t>(m_), 1.0);
    col_scale_.assign(static_cast<std::size_t>(n_), 1.0);
    auto pow2 = [](double v) { return std::exp2(std::round(std::log2(v))); };
    for (int pass = 0; pass < 4; ++pass) {
        std::vector<double> lo(static_cast<std::size_t>(m_), kInfinity), hi(static_cast<std::size_t>(m_), 0.0);
        for (int j = 0; j < n_; ++j) {
            for (const auto& [i, a] : cols_[static_cast<std::size_t>(j)]) {
                const double v = std::abs(a) * row_scale_[static_cast<std::size_t>(i)] * col_scale_[static_cast<std::size_t>(j)];
                lo[static_cast<std::size_t>(i)] = std::min(lo[static_cast<std::size_t>(i)], v);
                hi[static_cast<std::size_t>(i)] = std::max(hi[static_cast<std::size_t>(i)], v);
            }
        }
        for (int i = 0; i < m_; ++i) {
            if (hi[static_cast<std::size_t>(i)] > 0.0) {
                row_scale_[static_cast<std::size_t>(i)] /= std::sqrt(lo[static_cast<std::size_t>(i)] * hi[static_cast<std::size_t>(i)]);
            }
        }
        for (int j = 0; j < n_; ++j) {
            double cl = kInfinity, ch = 0.0;
            for (const auto& [i, a] : cols_[static_cast<std::size_t>(j)]) {
                const double v = std::abs(a) * row_scale_[static_cast<std::size_t>(i)] * col_scale_[static_cast<std::size_t>(j)];
                cl = std::min(cl, v);
                ch = std::max(ch, v);
            }
            if (ch > 0.0) {
                col_scale_[static_cast<std::size_t>(j)] /= std::sqrt(cl * ch);
            }
        }
    }
    for (double& r : row_scale_) {
        r = pow2(r);
    }
    for (double& c : col_scale_) {
        c = pow2(c);
    }
    for (int j = 0; j < n_; ++j) {
        for (auto& [i, a] : cols_[static_cast<std::size_t>(j)]) {
            a *= row_scale_[static_cast<std::size_t>(i)] * col_scale_[static_cast<std::size_t>(j)];
        }
    }
}

void Simplex::set_nonbasic_default(int j) {
    const auto u = static_cast<std::size_t>(j);
    if (std::isfinite(lo_[u])) {
        state_[u] = kAtLower;
        x_[u] = lo_[u];
    } else if (std::isfinite(up_[u])) {
        state_[u] = kAtUpper;
        x_[u] = up_[u];
    } else {
        state_[u] = kAtZero;
        x_[u] = 0.0;
    }
    pos_[u] = -1;
}

bool Simplex::cold_start() {
    for (int j = 0; j < total_; ++j) {
        set_nonbasic_default(j);
    }
    std::vector<double> residual = b_;
    for (int j = 0; j < n_; ++j) {
        const double v = x_[static_cast<std::size_t>(j)];
        if (v != 0.0) {
            for (const auto& [i, a] : cols_[static_cast<std::size_t>(j)]) {
                residual[static_cast<std::size_t>(i)] -= a * v;
            }
        }
    }
    std::fill(binv_.begin(), binv_.end(), 0.0);
    for (int i = 0; i < m_; ++i) {
        const double r = residual[static_cast<std::size_t>(i)];
        const int slack = n_ + i;
        const int art = n_ + m_ + i;
        if (r >= lo_[static_cast<std::size_t>(slack)] && r <= up_[static_cast<std::size_t>(slack)]) {
            basic_[static_cast<std::size_t>(i)] = slack;
            pos_[static_cast<std::size_t>(slack)] = i;
            state_[static_cast<std::size_t>(slack)] = kBasic;
            x_[static_cast<std::size_t>(slack)] = r;
            binv(i, i) = 1.0;
        } else {
            // slack stays at its nearest bound (0 for every sense)
            art_sign_[static_cast<std::size_t>(i)] = r >= 0.0 ? 1 : -1;
            basic_[static_cast<std::size_t>(i)] = art;
            pos_[static_cast<std::size_t>(art)] = i;
            state_[static_cast<std::size_t>(art)] = kBasic;
            x_[static_cast<std::size_t>(art)] = std::abs(r);
            binv(i, i) = static_cast<double>(art_sign_[static_cast<std::size_t>(i)]);
        }
    }
    since_refactor_ = 0;
    return std::any_of(basic_.begin(), basic_.end(), [&](int j) { return is_artificial(j); });
}

bool Simplex::warm_start(const Basis& warm) {
    if (warm.row_count != m_ || warm.structural_count > n_ ||
        static_cast<int>(warm.basic.size()) != m_) {
        return false;
    }
    const int old_n = warm.structural_count;
    auto map_index = [&](int j) { return j < old_n ? j : j + (n_ - old_n); };
    for (int j = 0; j < total_; ++j) {
        set_nonbasic_default(j);
    }
    for (int i = 0; i < m_; ++i) {
        art_sign_[static_cast<std::size_t>(i)] = warm.artificial_sign[static_cast<std::size_t>(i)];
        // artificials never carry value outside phase one
        up_[static_cast<std::size_t>(n_ + m_ + i)] = 0.0;
    }
    auto restore_state = [&](int old_j, int j) {
        const auto u = static_cast<std::size_t>(j);
        if (warm.at_upper[static_cast<std::size_t>(old_j)] && std::isfinite(up_[u])) {
            state_[u] = kAtUpper;
            x_[u] = up_[u];
        }
    };
    for (int j = 0; j < old_n; ++j) {
        restore_state(j, j);
    }
    for (int i = 0; i < m_; ++i) {
        restore_state(old_n + i, n_ + i);
    }
    for (int i = 0; i < m_; ++i) {
        const int j = map_index(warm.basic[static_cast<std::size_t>(i)]);
        if (j < 0 || j >= total_ || pos_[static_cast<std::size_t>(j)] != -1) {
            return false;
        }
        basic_[static_cast<std::size_t>(i)] = j;
        pos_[static_cast<std::size_t>(j)] = i;
        state_[static_cast<std::size_t>(j)] = kBasic;
    }
    if (!factorize()) {
        return false;
    }
    compute_basic_values();
    return primal_feasible();
}

bool Simplex::primal_feasible() const {
    for (int i = 0; i < m_; ++i) {
        const auto j = static_cast<std::size_t>(basic_[static_cast<std::size_t>(i)]);
        if (x_[j] < lo_[j] - opt_.tol.feasibility || x_[j] > up_[j] + opt_.tol.feasibility) {
            return false;
        }
    }
    return true;
}

bool Simplex::factorize() {
    // Gauss-Jordan inversion of the basis matrix with partial pivoting, row-major
    // so that row operations touch only the nonzeros of the pivot row.
    const auto m = static_cast<std::size_t>(m_);
    std::vector<double> B(m * m, 0.0);
    std::vector<double> inv(m * m, 0.0);
    for (int k = 0; k < m_; ++k) {
        for_each_entry(basic_[static_cast<std::size_t>(k)],
                       [&](int i, double a) { B[static_cast<std::size_t>(i) * m + static_cast<std::size_t>(k)] = a; });
    }
    for (std::size_t i = 0; i < m; ++i) {
        inv[i * m + i] = 1.0;
    }
    std::vector<std::size_t> nz_b, nz_i;
    for (std::size_t c = 0; c < m; ++c) {
        std::size_t best = m;
        double best_abs = 0.0;
        for (std::size_t r = c; r < m; ++r) {
            const double v = std::abs(B[r * m + c]);
            if (v > best_abs) {
                best_abs = v;
                best = r;
            }
        }
        if (best == m || best_abs < 1e-11) {
            return false;
        }
        if (best != c) {
            std::swap_ranges(B.begin() + static_cast<std::ptrdiff_t>(best * m),
                             B.begin() + static_cast<std::ptrdiff_t>((best + 1) * m),
                             B.begin() + static_cast<std::ptrdiff_t>(c * m));
            std::swap_ranges(inv.begin() + static_cast<std::ptrdiff_t>(best * m),
                             inv.begin() + static_cast<std::ptrdiff_t>((best + 1) * m),
                             inv.begin() + static_cast<std::ptrdiff_t>(c * m));
        }
        double* pb = &B[c * m];
        double* pi = &inv[c * m];
        const double piv = pb[c];
        nz_b.clear();
        nz_i.clear();
        for (std::size_t k = 0; k < m; ++k) {
            if (pb[k] != 0.0) {
                pb[k] /= piv;
                nz_b.push_back(k);
            }
            if (pi[k] != 0.0) {
                pi[k] /= piv;
                nz_i.push_back(k);
            }
        }
        for (std::size_t r = 0; r < m; ++r) {
            if (r == c) {
                continue;
            }
            double* rb = &B[r * m];
            const double f = rb[c];
            if (f == 0.0) {
                continue;
            }
            double* ri = &inv[r * m];
            for (std::size_t k : nz_b) {
                rb[k] -= f * pb[k];
            }
            for (std::size_t k : nz_i) {
                ri[k] -= f * pi[k];
            }
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t k = 0; k < m; ++k) {
            binv_[k * m + i] = inv[i * m + k];
        }
    }
    since_refactor_ = 0;
    return true;
}

void Simplex::compute_basic_values() {
    std::vector<double> rhs = b_;
    for (int j = 0; j < total_; ++j) {
        if (state_[static_cast<std::size_t>(j)] == kBasic) {
            continue;
        }
        const double v = x_[static_cast<std::size_t>(j)];
        if (v != 0.0) {
            for_each_entry(j, [&](int i, double a) { rhs[static_cast<std::size_t>(i)] -= a * v; });
        }
    }
    for (int i = 0; i < m_; ++i) {
        x_[static_cast<std::size_t>(basic_[static_cast<std::size_t>(i)])] = 0.0;
    }
    for (int k = 0; k < m_; ++k) {
        const double r = rhs[static_cast<std::size_t>(k)];
        if (r == 0.0) {
            continue;
        }
        const double* col = &binv_[static_cast<std::size_t>(k) * m_];
        for (int i = 0; i < m_; ++i) {
            x_[static_cast<std::size_t>(basic_[static_cast<std::size_t>(i)])] += col[i] * r;
        }
    }
}

void Simplex::btran(const std::vector<double>& cost, std::vector<double>& y) const {
    y.assign(static_cast<std::size_t>(m_), 0.0);
    std::vector<double> cb(static_cast<std::size_t>(m_));
    for (int i = 0; i < m_; ++i) {
        cb[static_cast<std::size_t>(i)] = cost[static_cast<std::size_t>(basic_[static_cast<std::size_t>(i)])];
    }
    for (int k = 0; k < m_; ++k) {
        const double* col = &binv_[static_cast<std::size_t>(k) * m_];
        double s = 0.0;
        for (int i = 0; i < m_; ++i) {
            s += cb[static_cast<std::size_t>(i)] * col[i];
        }
        y[static_cast<std::size_t>(k)] = s;
    }
}

void Simplex::ftran(int q, std::vector<double>& alpha) const {
    alpha.assign(static_cast<std::size_t>(m_), 0.0);
    for_each_entry(q, [&](int k, double a) {
        const double* col = &binv_[static_cast<std::size_t>(k) * m_];
        for (int i = 0; i < m_; ++i) {
            alpha[static_cast<std::size_t>(i)] += col[i] * a;
        }
    });
}

double Simplex::reduced_cost(int j, const std::vector<double>& cost, const std::vector<double>& y) const {
    double d = cost[static_cast<std::size_t>(j)];
    for_each_entry(j, [&](int i, double a) { d -= a * y[static_cast<std::size_t>(i)]; });
    return d;
}

void Simplex::pivot(int r, int q, const std::vector<double>& alpha) {
    const double ar = alpha[static_cast<std::size_t>(r)];
    std::vector<int> nz;
    nz.reserve(static_cast<std::size_t>(m_));
    for (int i = 0; i < m_; ++i) {
        if (i != r && alpha[static_cast<std::size_t>(i)] != 0.0) {
            nz.push_back(i);
        }
    }
    for (int k = 0; k < m_; ++k) {
        double* col = &binv_[static_cast<std::size_t>(k) * m_];
        const double pr = col[r] / ar;
        col[r] = pr;
        if (pr == 0.0) {
            continue;
        }
        for (int i : nz) {
            col[i] -= alpha[static_cast<std::size_t>(i)] * pr;
        }
    }
    const int leaving = basic_[static_cast<std::size_t>(r)];
    pos_[static_cast<std::size_t>(leaving)] = -1;
    basic_[static_cast<std::size_t>(r)] = q;
    pos_[static_cast<std::size_t>(q)] = r;
    state_[static_cast<std::size_t>(q)] = kBasic;
    ++since_refactor_;
}

void Simplex::snap_nonbasic() {
    for (int j = 0; j < total_; ++j) {
        const auto u = static_cast<std::size_t>(j);
        if (state_[u] == kAtLower) {
            x_[u] = lo_[u];
        } else if (state_[u] == kAtUpper) {
            x_[u] = up_[u];
        }
    }
}

// Primal simplex with the EXPAND anti-degeneracy ratio test: the working
// feasibility tolerance grows a little every iteration so each step is strictly
// positive, and nonbasic variables are snapped back to their bounds whenever
// the tolerance is reset.
LpStatus Simplex::iterate(const std::vector<double>& cost, bool phase_one) {
    std::vector<double> y, alpha;
    const double ftol = opt_.tol.feasibility;
    const double tol0 = 0.5 * ftol;
    const int expand_period = 10000;
    const double tol_step = (ftol - tol0) / expand_period;
    double working_tol = tol0;
    int optimality_checks = 0;

    auto reset = [&]() {
        if (!factorize()) {
            return false;
        }
        snap_nonbasic();
        compute_basic_values();
        working_tol = tol0;
        return true;
    };

    while (true) {
        if (iterations_ >= max_iterations_) {
            return LpStatus::IterationLimit;
        }
        if (since_refactor_ >= opt_.refactor_interval) {
            if (!factorize()) {
                restart_ = true;
                return LpStatus::Infeasible;
            }
            compute_basic_values();
        }
        if (working_tol >= ftol) {
            if (!reset() || (!phase_one && !primal_feasible())) {
                restart_ = true;  // caller restarts from phase one
                return LpStatus::Infeasible;
            }
        }
        btran(cost, y);
        double cb_norm = 0.0;
        for (int i = 0; i < m_; ++i) {
            cb_norm = std::max(cb_norm, std::abs(cost[static_cast<std::size_t>(basic_[static_cast<std::size_t>(i)])]));
        }
        // Absolute tolerance, widened only for very large basic costs (artificial 1e9 columns).
        const double dtol = opt_.tol.optimality + 1e-12 * cb_norm;

        int q = -1;
        double best = 0.0;
        double dq = 0.0;
        for (int j = 0; j < total_; ++j) {
            const auto u = static_cast<std::size_t>(j);
            const std::int8_t st = state_[u];
            if (st == kBasic || is_artificial(j) || lo_[u] == up_[u]) {
                continue;
            }
            const double d = reduced_cost(j, cost, y);
            double score = 0.0;
            if (st == kAtLower && d < -dtol) {
                score = -d;
            } else if (st == kAtUpper && d > dtol) {
                score = d;
            } else if (st == kAtZero && std::abs(d) > dtol) {
                score = std::abs(d);
            } else {
                continue;
            }
            if (score > best) {
                best = score;
                q = j;
                dq = d;
            }
        }
        if (q < 0) {
            if ((since_refactor_ > 0 || working_tol > tol0) && optimality_checks < 3) {
                ++optimality_checks;
                if (!reset() || (!phase_one && !primal_feasible())) {
                    restart_ = true;
                    return LpStatus::Infeasible;
                }
                continue;
            }
            return LpStatus::Optimal;
        }

        const double dir = dq < 0.0 ? 1.0 : -1.0;
        ftran(q, alpha);
        const auto uq = static_cast<std::size_t>(q);
        double flip = kInfinity;
        if (std::isfinite(lo_[uq]) && std::isfinite(up_[uq])) {
            flip = state_[uq] == kAtLower ? up_[uq] - x_[uq] : x_[uq] - lo_[uq];
        }

        working_tol += tol_step;
        // pass one: largest step keeping every basic variable within the working tolerance
        double relaxed = kInfinity;
        for (int i = 0; i < m_; ++i) {
            const double a = alpha[static_cast<std::size_t>(i)];
            if (std::abs(a) <= opt_.tol.pivot) {
                continue;
            }
            const double delta = dir * a;
            const auto j = static_cast<std::size_t>(basic_[static_cast<std::size_t>(i)]);
            if (delta > 0.0 && std::isfinite(lo_[j])) {
                relaxed = std::min(relaxed, (x_[j] - lo_[j] + working_tol) / delta);
            } else if (delta < 0.0 && std::isfinite(up_[j])) {
                relaxed = std::min(relaxed, (up_[j] - x_[j] + working_tol) / -delta);
            }
        }
        // pass two: among rows blocking before that step, the largest pivot
        int r = -1;
        double theta = kInfinity;
        double best_pivot = 0.0;
        if (std::isfinite(relaxed)) {
            for (int i = 0; i < m_; ++i) {
                const double a = alpha[static_cast<std::size_t>(i)];
                if (std::abs(a) <= opt_.tol.pivot) {
                    continue;
                }
                const double delta = dir * a;
                const auto j = static_cast<std::size_t>(basic_[static_cast<std::size_t>(i)]);
                double t = kInfinity;
                if (delta > 0.0 && std::isfinite(lo_[j])) {
                    t = (x_[j] - lo_[j]) / delta;
                } else if (delta < 0.0 && std::isfinite(up_[j])) {
                    t = (up_[j] - x_[j]) / -delta;
                }
                if (t <= relaxed && std::abs(a) > best_pivot) {
                    best_pivot = std::abs(a);
                    r = i;
                    theta = t;
                }
            }
            if (r >= 0) {
                theta = std::max(theta, tol_step / best_pivot);
            }
        }

        if (r < 0 && !std::isfinite(flip)) {
            return phase_one ? LpStatus::Infeasible : LpStatus::Unbounded;
        }
        ++iterations_;

        if (flip <= theta) {
            // Bound flip, basis unchanged.
            for (int i = 0; i < m_; ++i) {
                x_[static_cast<std::size_t>(basic_[static_cast<std::size_t>(i)])] -= flip * dir * alpha[static_cast<std::size_t>(i)];
            }
            if (state_[uq] == kAtLower) {
                state_[uq] = kAtUpper;
                x_[uq] = up_[uq];
            } else {
                state_[uq] = kAtLower;
                x_[uq] = lo_[uq];
            }
            continue;
        }

        for (int i = 0; i < m_; ++i) {
            x_[static_cast<std::size_t>(basic_[static_cast<std::size_t>(i)])] -= theta * dir * alpha[static_cast<std::size_t>(i)];
        }
        x_[uq] += dir * theta;

        const auto leaving = static_cast<std::size_t>(basic_[static_cast<std::size_t>(r)]);
        const double delta = dir * alpha[static_cast<std::size_t>(r)];
        pivot(r, q, alpha);
        // the leaving variable keeps its (possibly slightly infeasible) value until the next reset
        state_[leaving] = (lo_[leaving] == up_[leaving] || delta > 0.0) ? kAtLower : kAtUpper;
        if (is_artificial(static_cast<int>(leaving))) {
            up_[leaving] = 0.0;  // an artificial that leaves never returns
            x_[leaving] = 0.0;
        }
    }
}

void Simplex::drive_out_artificials() {
    std::vector<double> alpha;
    for (int r = 0; r < m_; ++r) {
        const int j = basic_[static_cast<std::size_t>(r)];
        if (!is_artificial(j)) {
            continue;
        }
        // row r of B^-1 A over non-artificial nonbasic columns
        int best = -1;
        double best_abs = 1e-7;
        for (int c = 0; c < n_ + m_; ++c) {
            if (state_[static_cast<std::size_t>(c)] == kBasic) {
                continue;
            }
            double v = 0.0;
            for_each_entry(c, [&](int k, double a) { v += binv_[static_cast<std::size_t>(k) * m_ + r] * a; });
            if (std::abs(v) > best_abs) {
                best_abs = std::abs(v);
                best = c;
            }
        }
        if (best < 0) {
            continue;  // redundant row: the artificial stays basic, fixed at zero
        }
        ftran(best, alpha);
        pivot(r, best, alpha);
        state_[static_cast<std::size_t>(j)] = kAtLower;
        x_[static_cast<std::size_t>(j)] = 0.0;
    }
    compute_basic_values();
}

LpSolution Simplex::run(const Basis* warm) {
    LpSolution sol;
    bool warm_ok = false;
    if (warm && !warm->empty()) {
        warm_ok = warm_start(*warm);
    }
    auto phase_one = [&]() {
        LpStatus st = LpStatus::Optimal;
        for (int attempt = 0;; ++attempt) {
            restart_ = false;
            for (int i = 0; i < m_; ++i) {
                up_[static_cast<std::size_t>(n_ + m_ + i)] = kInfinity;
            }
            if (!cold_start()) {
                st = LpStatus::Optimal;
                break;
            }
            std::vector<double> phase_cost(static_cast<std::size_t>(total_), 0.0);
            for (int i = 0; i < m_; ++i) {
                phase_cost[static_cast<std::size_t>(n_ + m_ + i)] = 1.0;
            }
            st = iterate(phase_cost, true);
            if (!restart_) {
                break;
            }
            if (attempt == 2) {
                throw std::runtime_error("simplex: basis became singular repeatedly");
            }
        }
        double infeasibility = 0.0;
        for (int i = 0; i < m_; ++i) {
            infeasibility += x_[static_cast<std::size_t>(n_ + m_ + i)];
        }
        double bnorm = 1.0;
        for (double v : b_) {
            bnorm = std::max(bnorm, std::abs(v));
        }
        if (st == LpStatus::Optimal && infeasibility > opt_.tol.feasibility * bnorm) {
            st = LpStatus::Infeasible;
        }
        for (int i = 0; i < m_; ++i) {
            up_[static_cast<std::size_t>(n_ + m_ + i)] = 0.0;
        }
        if (st == LpStatus::Optimal) {
            drive_out_artificials();
        }
        return st;
    };

    LpStatus status = warm_ok ? LpStatus::Optimal : phase_one();
    std::vector<double> cost(static_cast<std::size_t>(total_), 0.0);
    for (int j = 0; j < n_; ++j) {
        cost[static_cast<std::size_t>(j)] = lp_.variables[static_cast<std::size_t>(j)].cost * col_scale_[static_cast<std::size_t>(j)];
    }
    for (int attempt = 0; status == LpStatus::Optimal; ++attempt) {
        restart_ = false;
        status = iterate(cost, false);
        if (!restart_) {
            break;
        }
        if (attempt == 2) {
            throw std::runtime_error("simplex: basis became singular repeatedly");
        }
        status = phase_one();
    }

    sol.status = status;
    sol.iterations = iterations_;
    sol.primal.resize(static_cast<std::size_t>(n_));
    for (int j = 0; j < n_; ++j) {
        sol.primal[static_cast<std::size_t>(j)] = x_[static_cast<std::size_t>(j)] * col_scale_[static_cast<std::size_t>(j)];
    }
    std::vector<double> y;
    btran(cost, y);
    sol.reduced_cost.resize(static_cast<std::size_t>(n_));
    for (int j = 0; j < n_; ++j) {
        sol.reduced_cost[static_cast<std::size_t>(j)] = reduced_cost(j, cost, y) / col_scale_[static_cast<std::size_t>(j)];
    }
    sol.dual.resize(static_cast<std::size_t>(m_));
    for (int i = 0; i < m_; ++i) {
        sol.dual[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i)] * row_scale_[static_cast<std::size_t>(i)];
    }
    sol.objective = 0.0;
    for (int j = 0; j < n_; ++j) {
        sol.objective += lp_.variables[static_cast<std::size_t>(j)].cost * sol.primal[static_cast<std::size_t>(j)];
    }
    if (status == LpStatus::Optimal) {
        sol.basis.structural_count = n_;
        sol.basis.row_count = m_;
        sol.basis.basic = basic_;
        sol.basis.at_upper.resize(static_cast<std::size_t>(n_ + m_));
        for (int j = 0; j < n_ + m_; ++j) {
            sol.basis.at_upper[static_cast<std::size_t>(j)] = state_[static_cast<std::size_t>(j)] == kAtUpper ? 1 : 0;
        }
        sol.basis.artificial_sign = art_sign_;
    }
    return sol;
}

}  // namespace

LpSolution SimplexEngine::solve(const LinearProgram& lp, const Basis* warm_start) {
    lp.validate();
    Simplex simplex(lp, options_);
    return simplex.run(warm_start);
}

LpSolution solve_lp(const LinearProgram& lp) {
    SimplexEngine engine;
    return engine.solve(lp);
}

}  // namespace evactree::lp
