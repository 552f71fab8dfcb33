#ifndef VOI_GEOMETRY_HPP
#define VOI_GEOMETRY_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "voi/common.hpp"

namespace voi {

// A signed measure over the K states is a plain vector of R^K.
using SignedMeasure = Vec;

// Probability vector over the states.  Construction clamps slightly negative
// entries to zero and rejects vectors whose mass is not 1 within tol::feas.
class Belief {
public:
    static Belief from(Vec probs);
    // No validity checks; for callers that already guarantee the invariants.
    static Belief unchecked(Vec probs);

    const Vec& probs() const { return p_; }
    double operator[](std::size_t i) const { return p_[i]; }
    std::size_t size() const { return p_.size(); }

private:
    explicit Belief(Vec p) : p_(std::move(p)) {}
    Vec p_;
};

// K=2 convenience: the belief (1-t, t) with t the state-2 probability.
Belief belief2(double t);

struct Action {
    Vec payoffs;
    std::size_t size() const { return payoffs.size(); }
};

struct ActionSet {
    std::vector<Action> vertices;
    bool reduced = false;

    std::size_t dim() const { return vertices.empty() ? 0 : vertices.front().size(); }
};

// Halfspace <normal, p> <= offset.
struct Halfspace {
    SignedMeasure normal;
    double offset = 0.0;
};

// Convex subset of the simplex in H-representation.  The K simplex
// constraints (p >= 0, sum p = 1) are implicit and always enforced.
struct BeliefPolytope {
    std::size_t dim = 0;
    std::vector<Halfspace> halfspaces;

    bool contains(const Belief& q, double tolerance = tol::feas) const;
};

struct SupportResult {
    double value = 0.0;
    std::vector<Action> argmax;
};

struct ProjectionResult {
    Belief point;
    double distance = 0.0;
};

// Extreme points of conv(points); per-vertex LP redundancy tests.
ActionSet hull_reduce(std::vector<Action> points);

// sigma_A(s) = max over vertices of <s, a>, plus all maximizers within the
// relative face tolerance.
SupportResult support_function(const ActionSet& A, const SignedMeasure& s);

// Vertex set of the exposed face of A in direction s.
ActionSet exposed_face(const ActionSet& A, const SignedMeasure& s);

// Membership of `a` in conv(A) within `tolerance` (scaled phase-1 residual).
bool hull_contains(const ActionSet& A, const Action& a, double tolerance = tol::feas);

// Normal-cone slice of the simplex: all beliefs at which `a` is optimal.
// Throws NotMember when `a` lies outside the hull.
BeliefPolytope revealed_beliefs(const ActionSet& A, const Action& a);

bool polytope_is_empty(const BeliefPolytope& P);

// Euclidean projection of q onto P; optimality certified against an LP
// support oracle (KKT gap <= tol::kkt).  Throws EmptyPolytope.
ProjectionResult project_onto_polytope(const Belief& q, const BeliefPolytope& P);

// K=2 only: the polytope as an interval [lo, hi] in the state-2 coordinate.
// Returns false when empty.
bool polytope_interval(const BeliefPolytope& P, double& lo, double& hi);

}  // namespace voi

#endif
