#include "voi/insurance.hpp"

#include <algorithm>
#include <cmath>

namespace voi {
namespace {

constexpr double kExpCap = 700.0;  // exp(700) ~ 1e304, last safe exponent

double guarded_exp(double x) { return std::exp(std::min(x, kExpCap)); }

double log_sum_exp(double a, double b) {
    const double m = std::max(a, b);
    if (!std::isfinite(m)) return m;
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

void require_prob(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw Error(ErrorKind::DomainError, "loss probability must lie in (0, 1)");
}

}  // namespace

void InsuranceParams::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw Error(ErrorKind::ValidationError, "alpha must lie strictly in (0, 1)");
    if (!(fee > 0.0)) throw Error(ErrorKind::ValidationError, "fee must be positive");
    if (!(wealth > 0.0)) throw Error(ErrorKind::ValidationError, "wealth must be positive");
    if (!(risk_aversion > 0.0))
        throw Error(ErrorKind::ValidationError, "risk aversion must be positive");
}

double premium(const InsuranceParams& p, double indemnity) {
    if (indemnity < 0.0) throw Error(ErrorKind::DomainError, "negative indemnity");
    return p.alpha * indemnity + p.fee;
}

double utility(const InsuranceParams& p, double w) {
    return -std::expm1(std::min(-p.risk_aversion * w, kExpCap));
}

double log_one_minus_u0(const InsuranceParams& p, double loss_prob) {
    require_prob(loss_prob);
    return log_sum_exp(std::log(loss_prob),
                       std::log1p(-loss_prob) - p.risk_aversion * p.wealth);
}

double expected_utility_no_insurance(const InsuranceParams& p, double loss_prob) {
    require_prob(loss_prob);
    return (1.0 - loss_prob) * utility(p, p.wealth);
}

namespace {

// log(1 - U(p, I)); the two exponents carry the e^(R f) and e^(R (1-a) w)
// scale factors that overflow naive evaluation.
double log_one_minus_u_raw(const InsuranceParams& p, double loss_prob, double indemnity) {
    const double r = p.risk_aversion;
    const double e_loss = std::log(loss_prob) - r * ((1.0 - p.alpha) * indemnity - p.fee);
    const double e_no_loss =
        std::log1p(-loss_prob) - r * (p.wealth - p.alpha * indemnity - p.fee);
    return log_sum_exp(e_loss, e_no_loss);
}

}  // namespace

double expected_utility(const InsuranceParams& p, double loss_prob, double indemnity) {
    require_prob(loss_prob);
    if (indemnity < 0.0) throw Error(ErrorKind::DomainError, "negative indemnity");
    return -std::expm1(std::min(log_one_minus_u_raw(p, loss_prob, indemnity), kExpCap));
}

double optimal_indemnity(const InsuranceParams& p, double loss_prob) {
    require_prob(loss_prob);
    const double log_odds_against = std::log1p(-loss_prob) - std::log(loss_prob);
    const double log_loading = std::log(p.alpha) - std::log1p(-p.alpha);
    return p.wealth - (log_odds_against + log_loading) / p.risk_aversion;
}

double indemnity_zero_logit(const InsuranceParams& p) {
    return std::log(p.alpha) - std::log1p(-p.alpha) - p.risk_aversion * p.wealth;
}

double log_one_minus_best(const InsuranceParams& p, double loss_prob) {
    require_prob(loss_prob);
    const double logit = std::log(loss_prob) - std::log1p(-loss_prob);
    if (logit <= indemnity_zero_logit(p))
        return log_one_minus_u_raw(p, loss_prob, 0.0);
    return log_one_minus_u_raw(p, loss_prob, optimal_indemnity(p, loss_prob));
}

double delta(const InsuranceParams& p, double loss_prob) {
    const double a = log_one_minus_u0(p, loss_prob);
    const double b = log_one_minus_best(p, loss_prob);
    if (a >= b) return guarded_exp(a) * (-std::expm1(b - a));
    return -guarded_exp(b) * (-std::expm1(a - b));
}

double threshold(const InsuranceParams& p) {
    p.validate();
    auto sign = [&](double q) {
        return log_one_minus_u0(p, q) - log_one_minus_best(p, q);  // > 0 iff delta > 0
    };
    const double p_hat = 1.0 / (1.0 + std::exp(-indemnity_zero_logit(p)));
    double lo = std::max(p_hat, 1e-6);
    double hi = 1.0 - 1e-6;
    if (!(sign(lo) < 0.0))
        throw Error(ErrorKind::ConvergenceFailure,
                    "delta has no sign change over the bracket: already nonnegative at " +
                        std::to_string(lo));
    if (!(sign(hi) > 0.0))
        throw Error(ErrorKind::ConvergenceFailure,
                    "delta has no sign change over the bracket: still negative at 1-1e-6");
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        const double mid = 0.5 * (lo + hi);
        (sign(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double insurance_value(const InsuranceParams& p, double q) {
    return -std::expm1(std::min(log_one_minus_u0(p, q), log_one_minus_best(p, q)));
}

double voi_epsilon(const InsuranceParams& p, double loss_prob, double eps) {
    require_prob(loss_prob);
    if (!(eps > 0.0 && eps < std::min(loss_prob, 1.0 - loss_prob)))
        throw Error(ErrorKind::DomainError, "eps must satisfy 0 < eps < min(p, 1-p)");
    const double right = loss_prob + eps;
    // Single sign change of delta: if no insurance still wins at p + eps, the
    // value function is affine on [p - eps, p + eps] and the split is worthless.
    if (log_one_minus_u0(p, right) <= log_one_minus_best(p, right)) return 0.0;
    return 0.5 * insurance_value(p, right) + 0.5 * insurance_value(p, loss_prob - eps) -
           insurance_value(p, loss_prob);
}

ActionSet insurance_action_set(const InsuranceParams& p, const std::vector<double>& grid) {
    p.validate();
    if (grid.empty() || grid.front() != 0.0)
        throw Error(ErrorKind::InvalidInput, "indemnity grid must start at 0");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw Error(ErrorKind::InvalidInput, "indemnity grid must increase");

    std::vector<Action> points;
    points.reserve(grid.size() + 1);
    points.push_back(Action{{utility(p, p.wealth), utility(p, 0.0)}});
    for (double I : grid) {
        const double prem = premium(p, I);
        points.push_back(Action{{utility(p, p.wealth - prem), utility(p, I - prem)}});
    }
    return hull_reduce(std::move(points));
}

std::vector<double> default_indemnity_grid(const InsuranceParams& p) {
    std::vector<double> grid(2001);
    for (std::size_t i = 0; i < grid.size(); ++i)
        grid[i] = 2.0 * p.wealth * static_cast<double>(i) / 2000.0;
    return grid;
}

ScalarBody insurance_body(const InsuranceParams& p) {
    ScalarBody body;
    body.value = [p](double q) { return insurance_value(p, q); };
    body.slope = [p](double q) {
        const double a = log_one_minus_u0(p, q);
        const double b = log_one_minus_best(p, q);
        if (a <= b) return -utility(p, p.wealth);  // no-insurance branch
        // Envelope derivative of the insured branch: b(q) has the closed form
        // const + (1-alpha) log(1-q) + alpha log(q).
        const double bprime = -(1.0 - p.alpha) / (1.0 - q) + p.alpha / q;
        return -std::exp(b) * bprime;
    };
    return body;
}

}  // namespace voi
