#ifndef VOI_LP_HPP
#define VOI_LP_HPP

#include "voi/common.hpp"

namespace voi {

// Dense two-phase simplex for desk-scale problems:
//   min c.x   s.t.   A x = b,  x >= 0.
// Rows are equilibrated internally; coefficients may span wide magnitudes.
struct LpResult {
    enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };
    Status status = Status::IterationLimit;
    Vec x;
    double objective = 0.0;
};

LpResult lp_solve(const Matrix& A, const Vec& b, const Vec& c);

// Phase-1 only: does {x >= 0 : A x = b} contain a point?  `residual` receives
// the attained infeasibility level (scaled L1) when non-null.
bool lp_feasible(const Matrix& A, const Vec& b, double* residual = nullptr);

}  // namespace voi

#endif
