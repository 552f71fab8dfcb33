#include "doctest.h"
#include "voi/lp.hpp"

using namespace voi;

TEST_CASE("feasibility of a simple convex combination") {
    // Is (1,1) a combination of (0,0) and (2,2)?
    Matrix A(3, 2);
    A.at(0, 0) = 0.0; A.at(0, 1) = 2.0;
    A.at(1, 0) = 0.0; A.at(1, 1) = 2.0;
    A.at(2, 0) = 1.0; A.at(2, 1) = 1.0;
    CHECK(lp_feasible(A, {1.0, 1.0, 1.0}));
    // (3,3) is outside the segment.
    CHECK_FALSE(lp_feasible(A, {3.0, 3.0, 1.0}));
}

TEST_CASE("phase-2 optimization on a triangle") {
    // min -x0 subject to x0 + x1 + x2 = 1, x >= 0  -> x0 = 1.
    Matrix A(1, 3);
    A.at(0, 0) = A.at(0, 1) = A.at(0, 2) = 1.0;
    LpResult r = lp_solve(A, {1.0}, {-1.0, 0.0, 0.0});
    REQUIRE(r.status == LpResult::Status::Optimal);
    CHECK(r.objective == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("bounded LP with slack rows") {
    // max x1 over { x1 <= 0.8, x1 >= 1/3 } inside the simplex coordinates:
    // variables p0, p1, two slacks; rows: p1 + s1 = 0.8; -p1 + s2 = -1/3;
    // p0 + p1 = 1.
    Matrix A(3, 4);
    A.at(0, 1) = 1.0; A.at(0, 2) = 1.0;
    A.at(1, 1) = -1.0; A.at(1, 3) = 1.0;
    A.at(2, 0) = 1.0; A.at(2, 1) = 1.0;
    Vec b = {0.8, -1.0 / 3.0, 1.0};
    LpResult r = lp_solve(A, b, {0.0, -1.0, 0.0, 0.0});
    REQUIRE(r.status == LpResult::Status::Optimal);
    CHECK(-r.objective == doctest::Approx(0.8).epsilon(1e-12));

    LpResult rmin = lp_solve(A, b, {0.0, 1.0, 0.0, 0.0});
    REQUIRE(rmin.status == LpResult::Status::Optimal);
    CHECK(rmin.objective == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("infeasible equality system") {
    // x0 = 1 and x0 = 2 simultaneously.
    Matrix A(2, 1);
    A.at(0, 0) = 1.0;
    A.at(1, 0) = 1.0;
    CHECK_FALSE(lp_feasible(A, {1.0, 2.0}));
}

TEST_CASE("wide-magnitude rows are equilibrated") {
    // Same segment test but scaled by 1e40.
    Matrix A(3, 2);
    A.at(0, 0) = 0.0; A.at(0, 1) = 2e40;
    A.at(1, 0) = 0.0; A.at(1, 1) = 2e40;
    A.at(2, 0) = 1.0; A.at(2, 1) = 1.0;
    CHECK(lp_feasible(A, {1e40, 1e40, 1.0}));
    CHECK_FALSE(lp_feasible(A, {3e40, 3e40, 1.0}));
}
