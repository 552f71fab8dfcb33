#ifndef VOI_INSURANCE_HPP
#define VOI_INSURANCE_HPP

#include <vector>

#include "voi/analysis.hpp"

namespace voi {

// CARA insuree facing total loss of a good under linear pricing
// P(I) = alpha*I + fee, utility u(w) = 1 - exp(-R w).
struct InsuranceParams {
    double alpha = 0.08;         // loading factor, in (0,1)
    double fee = 10.0;           // fixed fee, > 0
    double wealth = 1000.0;      // value of the insured good, > 0
    double risk_aversion = 10.0; // R > 0

    void validate() const;  // throws ValidationError
};

double premium(const InsuranceParams& p, double indemnity);

// Saturates at ~ -1e304 instead of overflowing for extreme -R*w.
double utility(const InsuranceParams& p, double w);

double expected_utility_no_insurance(const InsuranceParams& p, double loss_prob);
double expected_utility(const InsuranceParams& p, double loss_prob, double indemnity);

// Unconstrained maximizer of I -> U(p, I); positive iff loss_prob > p_hat.
double optimal_indemnity(const InsuranceParams& p, double loss_prob);

// Log-odds of p_hat, the zero of the optimal indemnity.  p_hat itself can lie
// below double underflow, its log-odds never do.
double indemnity_zero_logit(const InsuranceParams& p);

// Log-domain exponents: log(1 - U0(p)) and log(1 - max_{I>=0} U(p, I)).
// Everything decision-relevant compares these two numbers.
double log_one_minus_u0(const InsuranceParams& p, double loss_prob);
double log_one_minus_best(const InsuranceParams& p, double loss_prob);

// max_{I>=0} U(p,I) - U0(p); negative below the threshold, positive above.
// Saturates at +/-~1e304 when the true magnitude exceeds double range.
double delta(const InsuranceParams& p, double loss_prob);

// Threshold belief p*: root of delta on (p_hat, 1), bisection over
// [max(p_hat, 1e-6), 1 - 1e-6] to width 1e-13.  Throws ConvergenceFailure
// when delta has no sign change over that bracket (this happens for the
// paper's own headline parameters, where p* lies below double underflow).
double threshold(const InsuranceParams& p);

// v(q) = max{U0(q), max_I U(q,I)}; always in [0, 1], evaluated in log domain.
double insurance_value(const InsuranceParams& p, double q);

// One-half split value: v averaged over q = p +/- eps minus v(p).  Exactly
// 0.0 when no insurance stays optimal up to p + eps (v affine there).
double voi_epsilon(const InsuranceParams& p, double loss_prob, double eps);

// Hull of the no-insurance payoff point and the coverage curve sampled on the
// given indemnity grid (increasing, starting at 0).
ActionSet insurance_action_set(const InsuranceParams& p, const std::vector<double>& indemnity_grid);

// 2001 points over [0, 2*wealth].
std::vector<double> default_indemnity_grid(const InsuranceParams& p);

// Closed-form value curve for the generic scalar-body analysis (theorem 3,
// classification, CLI value grids).
ScalarBody insurance_body(const InsuranceParams& p);

}  // namespace voi

#endif
