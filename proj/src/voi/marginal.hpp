#ifndef VOI_MARGINAL_HPP
#define VOI_MARGINAL_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "voi/analysis.hpp"

namespace voi {

// Gauss-Hermite nodes/weights for weight exp(-x^2); weights sum to sqrt(pi).
void gauss_hermite(int n, Vec& nodes, Vec& weights);

enum class FamilyKind { Brownian, Poisson, BinarySplit };

struct InfoFamily {
    FamilyKind kind = FamilyKind::BinarySplit;
    double rho0 = 1.0;   // Poisson: intensity in state 1
    double rho1 = 2.0;   // Poisson: intensity in state 2 (> rho0)
    double alpha = 1.0;  // BinarySplit: posteriors at prior +/- theta^alpha
    int quad_nodes = 64;
    int max_successes = 4;
};

// Two-state posterior distribution after observing the family's signal for a
// horizon theta; Bayes plausibility restored exactly by a rank-1 weight
// adjustment.  Throws ThetaTooLarge / QuadratureResidual.
InformationStructure instantiate(const InfoFamily& family, const Prior& prior, double theta);

enum class MarginalClass { Zero, Finite, Infinite };
const char* marginal_class_name(MarginalClass c);

struct MarginalReport {
    std::vector<double> thetas;      // the thetas actually evaluated
    std::vector<double> voi_values;  // VoI per theta
    std::size_t skipped = 0;         // thetas dropped by the interior precondition
    std::optional<double> slope;     // log-log least squares over VoI > 1e-14
    MarginalClass classification = MarginalClass::Zero;
};

// Order of VoI(theta) as theta -> 0, classified by log-log slope with band
// +/- `band` around 1; exact zeros at the smallest thetas classify Zero
// directly.
MarginalReport marginal_voi(const ActionSet& A, const Prior& prior, const InfoFamily& family,
                            const std::vector<double>& theta_grid, double band = 0.1);

// Boundary of the quadratic scoring rule sampled on a uniform report grid.
ActionSet quadratic_scoring_grid_body(std::size_t points = 2001);

struct Table2Options {
    int quad_nodes = 64;
    int max_successes = 4;
    std::vector<double> theta_grid = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
    double band = 0.1;
};

struct Table2Row {
    std::string family;
    std::array<MarginalClass, 3> cells{};             // confident, undecided, flexible
    std::array<std::optional<double>, 3> slopes{};
    std::array<MarginalReport, 3> reports{};
};

// Cross product of the signal families with the three regime test problems
// (payoff-table polytope at priors 1/2 and 1/3, quadratic grid body at 1/2).
std::vector<Table2Row> table2_harness(const Table2Options& opts = {});

}  // namespace voi

#endif
