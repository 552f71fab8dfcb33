#include "voi/lp.hpp"

#include <algorithm>
#include <limits>

namespace voi {
namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kCostEps = 1e-10;
constexpr double kFeasEps = 1e-9;

struct Tableau {
    std::size_t m, n;          // rows, structural columns
    std::size_t total;         // structural + artificial columns
    std::vector<double> t;     // m x (total + 1), last column is rhs
    std::vector<std::size_t> basis;

    double& at(std::size_t i, std::size_t j) { return t[i * (total + 1) + j]; }
    double rhs(std::size_t i) const { return t[i * (total + 1) + total]; }

    void pivot(std::size_t row, std::size_t col, std::vector<double>& red, double& obj) {
        const double piv = at(row, col);
        for (std::size_t j = 0; j <= total; ++j) at(row, j) /= piv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == row) continue;
            const double f = at(i, col);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= total; ++j) at(i, j) -= f * at(row, j);
            at(i, col) = 0.0;
        }
        const double f = red[col];
        if (f != 0.0) {
            for (std::size_t j = 0; j < total; ++j) red[j] -= f * at(row, j);
            obj += f * t[row * (total + 1) + total];
            red[col] = 0.0;
        }
        basis[row] = col;
    }
};

// Runs simplex iterations on the given reduced-cost row until optimal.
// `allow` masks out columns that may never enter (artificials in phase 2).
LpResult::Status iterate(Tableau& tab, std::vector<double>& red, double& obj,
                         const std::vector<char>& allow) {
    const std::size_t iter_cap = 50 * (tab.m + tab.total) + 200;
    const std::size_t bland_after = 10 * (tab.m + tab.total) + 50;
    for (std::size_t iter = 0; iter < iter_cap; ++iter) {
        const bool bland = iter > bland_after;
        std::size_t enter = tab.total;
        double best = -kCostEps;
        for (std::size_t j = 0; j < tab.total; ++j) {
            if (!allow[j]) continue;
            if (red[j] < best) {
                best = red[j];
                enter = j;
                if (bland) break;
            }
        }
        if (enter == tab.total) return LpResult::Status::Optimal;

        std::size_t leave = tab.m;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < tab.m; ++i) {
            const double a = tab.at(i, enter);
            if (a <= kPivotEps) continue;
            const double ratio = tab.rhs(i) / a;
            if (ratio < best_ratio - 1e-12 ||
                (ratio < best_ratio + 1e-12 &&
                 (leave == tab.m || tab.basis[i] < tab.basis[leave]))) {
                best_ratio = ratio;
                leave = i;
            }
        }
        if (leave == tab.m) return LpResult::Status::Unbounded;
        tab.pivot(leave, enter, red, obj);
    }
    return LpResult::Status::IterationLimit;
}

LpResult run(const Matrix& A, const Vec& b, const Vec* c) {
    const std::size_t m = A.rows;
    const std::size_t n = A.cols;
    Tableau tab;
    tab.m = m;
    tab.n = n;
    tab.total = n + m;
    tab.t.assign(m * (tab.total + 1), 0.0);
    tab.basis.resize(m);

    for (std::size_t i = 0; i < m; ++i) {
        double scale = std::abs(b[i]);
        for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(A.at(i, j)));
        if (scale <= 0.0 || !std::isfinite(scale)) scale = 1.0;
        double sgn = (b[i] < 0.0) ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n; ++j) tab.at(i, j) = sgn * A.at(i, j) / scale;
        tab.at(i, n + i) = 1.0;
        tab.at(i, tab.total) = sgn * b[i] / scale;
        tab.basis[i] = n + i;
    }

    // Phase 1: minimize the sum of artificials.
    std::vector<double> red(tab.total, 0.0);
    double obj = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += tab.at(i, j);
        red[j] = -s;
    }
    for (std::size_t i = 0; i < m; ++i) obj += tab.rhs(i);

    std::vector<char> allow(tab.total, 1);
    LpResult res;
    auto st = iterate(tab, red, obj, allow);
    if (st != LpResult::Status::Optimal) {
        res.status = st;
        return res;
    }
    if (obj > kFeasEps) {
        res.status = LpResult::Status::Infeasible;
        res.objective = obj;
        return res;
    }

    // Drive basic artificials out (or detect redundant rows and park them).
    for (std::size_t i = 0; i < m; ++i) {
        if (tab.basis[i] < n) continue;
        std::size_t col = tab.total;
        for (std::size_t j = 0; j < n; ++j) {
            if (std::abs(tab.at(i, j)) > 1e-7) {
                col = j;
                break;
            }
        }
        if (col < tab.total) tab.pivot(i, col, red, obj);
        // Otherwise the row is redundant; the artificial stays basic at ~0 and
        // is frozen out of pivoting below.
    }

    if (!c) {
        res.status = LpResult::Status::Optimal;
        res.objective = 0.0;
        res.x.assign(n, 0.0);
        for (std::size_t i = 0; i < m; ++i)
            if (tab.basis[i] < n) res.x[tab.basis[i]] = std::max(0.0, tab.rhs(i));
        return res;
    }

    // Phase 2: original objective, artificials blocked.
    for (std::size_t j = n; j < tab.total; ++j) allow[j] = 0;
    for (std::size_t j = 0; j < tab.total; ++j) {
        double r = (j < n) ? (*c)[j] : 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const std::size_t bj = tab.basis[i];
            const double cb = (bj < n) ? (*c)[bj] : 0.0;
            if (cb != 0.0) r -= cb * tab.at(i, j);
        }
        red[j] = r;
    }
    obj = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t bj = tab.basis[i];
        if (bj < n) obj += (*c)[bj] * tab.rhs(i);
    }

    st = iterate(tab, red, obj, allow);
    res.status = st;
    if (st != LpResult::Status::Optimal) return res;
    res.x.assign(n, 0.0);
    double value = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        if (tab.basis[i] < n) {
            res.x[tab.basis[i]] = std::max(0.0, tab.rhs(i));
            value += (*c)[tab.basis[i]] * res.x[tab.basis[i]];
        }
    }
    res.objective = value;
    return res;
}

}  // namespace

LpResult lp_solve(const Matrix& A, const Vec& b, const Vec& c) { return run(A, b, &c); }

bool lp_feasible(const Matrix& A, const Vec& b, double* residual) {
    LpResult r = run(A, b, nullptr);
    if (residual) *residual = (r.status == LpResult::Status::Infeasible) ? r.objective : 0.0;
    if (r.status == LpResult::Status::IterationLimit)
        throw Error(ErrorKind::ConvergenceFailure, "simplex iteration limit in feasibility solve");
    return r.status == LpResult::Status::Optimal;
}

}  // namespace voi
