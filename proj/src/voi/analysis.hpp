#ifndef VOI_ANALYSIS_HPP
#define VOI_ANALYSIS_HPP

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "voi/model.hpp"

namespace voi {

// Expected payoff of the best action at belief p (support function on the
// simplex).
double value_function(const ActionSet& A, const Belief& p);

// Exposed face of A in the direction of p: the optimal actions at p.
ActionSet optimal_actions(const ActionSet& A, const Belief& p);

// E[v_A(q)] - v_A(prior); nonnegative for valid structures.
double value_of_information(const ActionSet& A, const Prior& prior,
                            const InformationStructure& info);

// Beliefs at which every action optimal at the prior stays optimal.
BeliefPolytope confidence_set(const ActionSet& A, const Prior& prior);

// True iff some positive-weight atom leaves the confidence set.
bool is_valuable(const ActionSet& A, const Prior& prior, const InformationStructure& info);

// Affine dimension of the vertex set (rank threshold tol::rank).
int affine_dimension(const std::vector<Action>& vertices);

// Orthonormal basis of [span(face - face)]^perp; dimension K for singletons.
std::vector<Vec> indifference_kernel(const ActionSet& A, const Prior& prior);

// (1/n) sigma_{T-T}(s) with T a greedy affinely-spanning subset of the
// optimal face, n = |T|.  Requires a face with >= 2 vertices.
double indifference_seminorm(const ActionSet& A, const Prior& prior, const SignedMeasure& s);

struct BoundCertificate {
    enum class Theorem { T1, T2, T3 } theorem = Theorem::T1;
    double lower = 0.0;
    double voi = 0.0;
    double upper = 0.0;
    std::map<std::string, double> details;

    bool sandwich_ok() const {
        const double t = tol::cert(voi);
        return lower <= voi + t && voi <= upper + t;
    }
};

// Confidence-set sandwich: C_A E[d(q, conf)] >= VoI >= c * P{d(q, conf) >= eps}.
// The witness action is the centroid of the optimal face; c is the minimum of
// phi_a over a simplex grid of the complement region plus the structure's own
// outside atoms (which is what makes the bound exact).
BoundCertificate theorem1_bounds(const ActionSet& A, const Prior& prior,
                                 const InformationStructure& info, double epsilon,
                                 double grid_pitch = 1e-3);

// Tie-breaking sandwich for kink priors:
// ||A|| E||q-mu|| >= VoI_A >= VoI_face >= E seminorm(q-mu).
BoundCertificate theorem2_bounds(const ActionSet& A, const Prior& prior,
                                 const InformationStructure& info);

// Central second differences of `fn` along the tangent basis e_j - e_1,
// j = 2..K; returns the (K-1)x(K-1) tangent-space matrix.
using ValueFn = std::function<double(const Belief&)>;
Matrix numeric_hessian(const ValueFn& fn, const Belief& prior, double step);

enum class Regime { Confident, Undecided, Flexible, Other };
const char* regime_name(Regime r);

struct ClassifyOptions {
    double confident_radius = 1e-6;  // tangential ball that must fit in the confidence set
    double hessian_step = 1e-3;
    double eig_threshold = 1e-8;
};

struct RegimeReport {
    Regime regime = Regime::Other;
    int face_dim = 0;
    BeliefPolytope confidence;
    std::optional<Matrix> hessian;
    std::map<std::string, double> constants;
};

RegimeReport classify_prior(const ActionSet& A, const Prior& prior,
                            const ClassifyOptions& opts = {});

// K=2 decision bodies given in closed form through their value function on
// the state-2 coordinate t; `slope` is v'(t).
struct ScalarBody {
    std::function<double(double)> value;
    std::function<double(double)> slope;
};

ScalarBody quadratic_scoring_body();

double value_function(const ScalarBody& body, double t);
double value_of_information(const ScalarBody& body, const Prior& prior,
                            const InformationStructure& info);

// Quadratic sandwich for flexible priors, measured in the state-2 coordinate:
// c E[(q-mu)^2] <= VoI <= C E[(q-mu)^2], c/C = min/max of the chord-gap ratio
// g over a grid of recorded pitch plus the structure's atoms.
BoundCertificate theorem3_bounds(const ScalarBody& body, const Prior& prior,
                                 const InformationStructure& info, double grid_pitch = 1e-3);

// Uniform state-2 grid for K=2, barycentric lattice otherwise.
std::vector<Belief> simplex_grid(std::size_t K, double pitch);

}  // namespace voi

#endif
