#include "voi/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "voi/lp.hpp"

namespace voi {

Belief Belief::from(Vec probs) {
    if (probs.size() < 2)
        throw Error(ErrorKind::ValidationError, "belief needs at least two states");
    double sum = 0.0;
    for (double& x : probs) {
        if (!std::isfinite(x))
            throw Error(ErrorKind::ValidationError, "belief entry not finite");
        if (x < -tol::feas)
            throw Error(ErrorKind::ValidationError, "belief entry below -tol_feas");
        if (x < 0.0) x = 0.0;
        sum += x;
    }
    if (std::abs(sum - 1.0) > tol::feas)
        throw Error(ErrorKind::ValidationError, "belief mass differs from 1 beyond tol_feas");
    return Belief(std::move(probs));
}

Belief Belief::unchecked(Vec probs) { return Belief(std::move(probs)); }

Belief belief2(double t) { return Belief::from({1.0 - t, t}); }

bool BeliefPolytope::contains(const Belief& q, double tolerance) const {
    for (const Halfspace& h : halfspaces) {
        const double slack = dot(h.normal, q.probs()) - h.offset;
        if (slack > tolerance * (1.0 + norm2(h.normal))) return false;
    }
    return true;
}

namespace {

void check_common_dimension(const std::vector<Action>& points) {
    if (points.empty()) throw Error(ErrorKind::EmptyInput, "no payoff vectors given");
    const std::size_t k = points.front().size();
    if (k < 2) throw Error(ErrorKind::DimensionMismatch, "state dimension must be >= 2");
    for (const Action& a : points) {
        if (a.size() != k)
            throw Error(ErrorKind::DimensionMismatch, "payoff vectors of mixed dimension");
        if (!all_finite(a.payoffs))
            throw Error(ErrorKind::ValidationError, "payoff entry not finite");
    }
}

// Feasibility of x in conv(points).
bool in_convex_hull(const std::vector<Action>& points, const Vec& x) {
    if (points.empty()) return false;
    const std::size_t k = x.size();
    const std::size_t n = points.size();
    Matrix A(k + 1, n);
    Vec b(k + 1);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < k; ++i) A.at(i, j) = points[j].payoffs[i];
        A.at(k, j) = 1.0;
    }
    for (std::size_t i = 0; i < k; ++i) b[i] = x[i];
    b[k] = 1.0;
    return lp_feasible(A, b);
}

}  // namespace

ActionSet hull_reduce(std::vector<Action> points) {
    check_common_dimension(points);

    // Exact duplicates first; keeps the LP count down.
    std::vector<Action> unique;
    unique.reserve(points.size());
    for (const Action& a : points) {
        bool seen = false;
        for (const Action& u : unique)
            if (u.payoffs == a.payoffs) {
                seen = true;
                break;
            }
        if (!seen) unique.push_back(a);
    }

    std::vector<Action> kept = std::move(unique);
    for (std::size_t i = 0; i < kept.size();) {
        std::vector<Action> others;
        others.reserve(kept.size() - 1);
        for (std::size_t j = 0; j < kept.size(); ++j)
            if (j != i) others.push_back(kept[j]);
        if (!others.empty() && in_convex_hull(others, kept[i].payoffs)) {
            kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
            ++i;
        }
    }
    return ActionSet{std::move(kept), true};
}

SupportResult support_function(const ActionSet& A, const SignedMeasure& s) {
    if (A.vertices.empty()) throw Error(ErrorKind::EmptyInput, "empty action set");
    if (s.size() != A.dim())
        throw Error(ErrorKind::DimensionMismatch, "direction dimension mismatch");
    double best = -std::numeric_limits<double>::infinity();
    for (const Action& a : A.vertices) best = std::max(best, dot(s, a.payoffs));
    SupportResult r;
    r.value = best;
    const double band = tol::face(best);
    for (const Action& a : A.vertices)
        if (dot(s, a.payoffs) >= best - band) r.argmax.push_back(a);
    return r;
}

ActionSet exposed_face(const ActionSet& A, const SignedMeasure& s) {
    SupportResult r = support_function(A, s);
    return ActionSet{std::move(r.argmax), A.reduced};
}

bool hull_contains(const ActionSet& A, const Action& a, double) {
    if (A.vertices.empty()) return false;
    if (a.size() != A.dim())
        throw Error(ErrorKind::DimensionMismatch, "point dimension mismatch");
    return in_convex_hull(A.vertices, a.payoffs);
}

BeliefPolytope revealed_beliefs(const ActionSet& A, const Action& a) {
    if (!hull_contains(A, a))
        throw Error(ErrorKind::NotMember, "action lies outside the hull");
    BeliefPolytope P;
    P.dim = A.dim();
    for (const Action& other : A.vertices) {
        Vec normal = sub(other.payoffs, a.payoffs);
        if (norm2(normal) == 0.0) continue;
        P.halfspaces.push_back(Halfspace{std::move(normal), 0.0});
    }
    return P;
}

bool polytope_is_empty(const BeliefPolytope& P) {
    const std::size_t k = P.dim;
    const std::size_t m = P.halfspaces.size();
    Matrix A(m + 1, k + m);
    Vec b(m + 1);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < k; ++j) A.at(i, j) = P.halfspaces[i].normal[j];
        A.at(i, k + i) = 1.0;  // slack
        b[i] = P.halfspaces[i].offset;
    }
    for (std::size_t j = 0; j < k; ++j) A.at(m, j) = 1.0;
    b[m] = 1.0;
    return !lp_feasible(A, b);
}

bool polytope_interval(const BeliefPolytope& P, double& lo, double& hi) {
    lo = 0.0;
    hi = 1.0;
    for (const Halfspace& h : P.halfspaces) {
        const double base = h.normal[0];
        const double coef = h.normal[1] - h.normal[0];
        const double scale = 1.0 + std::abs(base) + std::abs(coef);
        if (std::abs(coef) <= tol::feas * scale) {
            if (base > h.offset + tol::feas * scale) return false;
            continue;
        }
        const double bound = (h.offset - base) / coef;
        if (coef > 0.0)
            hi = std::min(hi, bound);
        else
            lo = std::max(lo, bound);
    }
    if (lo > hi) {
        if (lo - hi > tol::feas * (1.0 + std::abs(lo))) return false;
        lo = hi = 0.5 * (lo + hi);
    }
    return true;
}

namespace {

// Support value of P in direction g, via one bounded LP.
double polytope_support(const BeliefPolytope& P, const Vec& g) {
    const std::size_t k = P.dim;
    const std::size_t m = P.halfspaces.size();
    Matrix A(m + 1, k + m);
    Vec b(m + 1);
    Vec c(k + m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < k; ++j) A.at(i, j) = P.halfspaces[i].normal[j];
        A.at(i, k + i) = 1.0;
        b[i] = P.halfspaces[i].offset;
    }
    for (std::size_t j = 0; j < k; ++j) A.at(m, j) = 1.0;
    b[m] = 1.0;
    for (std::size_t j = 0; j < k; ++j) c[j] = -g[j];
    LpResult r = lp_solve(A, b, c);
    if (r.status != LpResult::Status::Optimal)
        throw Error(ErrorKind::ConvergenceFailure, "support LP did not solve");
    return -r.objective;
}

ProjectionResult project_interval(const Belief& q, const BeliefPolytope& P) {
    double lo = 0.0, hi = 1.0;
    if (!polytope_interval(P, lo, hi))
        throw Error(ErrorKind::EmptyPolytope, "projection target is empty");
    const double t = std::clamp(q[1], lo, hi);
    Belief point = belief2(t);
    return ProjectionResult{point, norm2(sub(q.probs(), point.probs()))};
}

}  // namespace

ProjectionResult project_onto_polytope(const Belief& q, const BeliefPolytope& P) {
    if (P.dim != q.size())
        throw Error(ErrorKind::DimensionMismatch, "belief/polytope dimension mismatch");
    if (P.contains(q)) return ProjectionResult{q, 0.0};
    if (P.dim == 2) return project_interval(q, P);
    if (polytope_is_empty(P))
        throw Error(ErrorKind::EmptyPolytope, "projection target is empty");

    const std::size_t k = P.dim;
    const std::size_t nsets = P.halfspaces.size() + 2;
    std::vector<Vec> corr(nsets, Vec(k, 0.0));
    Vec x = q.probs();
    Vec y(k), z(k);

    auto apply_set = [&](std::size_t s, const Vec& in, Vec& out) {
        out = in;
        if (s < P.halfspaces.size()) {
            const Halfspace& h = P.halfspaces[s];
            const double nn = dot(h.normal, h.normal);
            if (nn > 0.0) {
                const double viol = dot(h.normal, in) - h.offset;
                if (viol > 0.0)
                    for (std::size_t i = 0; i < k; ++i) out[i] = in[i] - viol / nn * h.normal[i];
            }
        } else if (s == P.halfspaces.size()) {
            double sum = 0.0;
            for (double v : in) sum += v;
            const double shift = (1.0 - sum) / static_cast<double>(k);
            for (std::size_t i = 0; i < k; ++i) out[i] = in[i] + shift;
        } else {
            for (std::size_t i = 0; i < k; ++i) out[i] = std::max(0.0, in[i]);
        }
    };

    const int max_sweeps = 20000;
    for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
        double move = 0.0;
        for (std::size_t s = 0; s < nsets; ++s) {
            for (std::size_t i = 0; i < k; ++i) y[i] = x[i] + corr[s][i];
            apply_set(s, y, z);
            for (std::size_t i = 0; i < k; ++i) {
                corr[s][i] = y[i] - z[i];
                move += std::abs(z[i] - x[i]);
            }
            x = z;
        }
        if (move < 1e-13 || sweep % 64 == 0 || sweep == max_sweeps) {
            bool feasible = true;
            for (const Halfspace& h : P.halfspaces)
                if (dot(h.normal, x) - h.offset > tol::feas * (1.0 + norm2(h.normal)))
                    feasible = false;
            if (feasible) {
                Vec g = sub(q.probs(), x);
                const double gap = polytope_support(P, g) - dot(g, x);
                if (gap <= tol::kkt * (1.0 + norm2(g))) break;
            }
            if (sweep == max_sweeps)
                throw Error(ErrorKind::ConvergenceFailure,
                            "projection did not reach the KKT residual target");
        }
    }

    double sum = 0.0;
    for (double& v : x) {
        v = std::max(0.0, v);
        sum += v;
    }
    for (double& v : x) v /= sum;
    Belief point = Belief::from(x);
    return ProjectionResult{point, norm2(sub(q.probs(), point.probs()))};
}

}  // namespace voi
