#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "voi/insurance.hpp"

using namespace voi;
using namespace testutil;

namespace {

const InsuranceParams kPaper{0.08, 10.0, 1000.0, 10.0};
// Calibration with an interior threshold (p* ~ 0.35); see the report docs.
const InsuranceParams kBench{0.3, 29.0, 100.0, 0.02};

// Independent closed-form second derivative of the insured branch:
// v = 1 - e^b with b = const + (1-a) log(1-q) + a log(q).
double analytic_second_derivative(const InsuranceParams& p, double q) {
    const double b = log_one_minus_best(p, q);
    const double bp = -(1.0 - p.alpha) / (1.0 - q) + p.alpha / q;
    const double bpp = -(1.0 - p.alpha) / ((1.0 - q) * (1.0 - q)) - p.alpha / (q * q);
    return -std::exp(b) * (bpp + bp * bp);
}

double loglog_slope(const InsuranceParams& params, double p, const std::vector<double>& eps) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (double e : eps) {
        const double v = voi_epsilon(params, p, e);
        REQUIRE(v > 0.0);
        sx += std::log(e);
        sy += std::log(v);
        sxx += std::log(e) * std::log(e);
        sxy += std::log(e) * std::log(v);
        ++n;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("premium is linear with a fixed fee") {
    CHECK(premium(kPaper, 0.0) == doctest::Approx(10.0));
    CHECK(premium(kPaper, 100.0) == doctest::Approx(18.0));
    CHECK(premium(kPaper, 1000.0) == doctest::Approx(90.0));
    CHECK_THROWS_AS(premium(kPaper, -1.0), Error);
}

TEST_CASE("CARA utility values") {
    CHECK(utility(kPaper, 0.0) == 0.0);
    CHECK(utility(kPaper, 1000.0) == 1.0);  // 1 - e^-10000 rounds to 1 in doubles
    InsuranceParams unit{0.5, 1.0, 1.0, 1.0};
    CHECK(utility(unit, std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-15));
    // The log-domain exponent keeps what the double rounds away.
    CHECK(log_one_minus_u0(kPaper, 0.5) == doctest::Approx(std::log(0.5)).epsilon(1e-12));
}

TEST_CASE("expected utilities match the closed-form identity") {
    // U(p,0) - U0(p) = -(e^{Rf} - 1)(p + (1-p) e^{-R wealth}).
    for (const InsuranceParams& params : {kPaper, kBench}) {
        for (double p : {0.1, 0.5, 0.9}) {
            const double lhs =
                expected_utility(params, p, 0.0) - expected_utility_no_insurance(params, p);
            const double rhs =
                -std::expm1(params.risk_aversion * params.fee) *
                (p + (1.0 - p) * std::exp(-params.risk_aversion * params.wealth));
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
            CHECK(lhs < 0.0);
        }
    }
    CHECK(expected_utility_no_insurance(kPaper, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
    // Insured at the optimum, utility approaches 1 as the loss becomes certain.
    CHECK(expected_utility(kBench, 1.0 - 1e-6, optimal_indemnity(kBench, 1.0 - 1e-6)) > 0.999);
    CHECK_THROWS_AS(expected_utility_no_insurance(kPaper, 0.0), Error);
    CHECK_THROWS_AS(expected_utility(kPaper, 1.5, 1.0), Error);
}

TEST_CASE("optimal indemnity formula and monotonicity") {
    InsuranceParams half{0.5, 1.0, 50.0, 0.3};
    CHECK(optimal_indemnity(half, 0.5) == doctest::Approx(half.wealth).epsilon(1e-12));

    const double i_paper = optimal_indemnity(kPaper, 0.5);
    CHECK(i_paper == doctest::Approx(1000.0 - 0.1 * std::log(0.08 / 0.92)).epsilon(1e-12));
    CHECK(i_paper == doctest::Approx(1000.2442).epsilon(1e-6));

    // Stationary point of U(p, .): nearby indemnities do worse.
    const double u_star = expected_utility(kBench, 0.5, optimal_indemnity(kBench, 0.5));
    CHECK(u_star >= expected_utility(kBench, 0.5, optimal_indemnity(kBench, 0.5) + 1.0));
    CHECK(u_star >= expected_utility(kBench, 0.5, optimal_indemnity(kBench, 0.5) - 1.0));

    double prev = optimal_indemnity(kBench, 0.05);
    for (double p = 0.1; p < 1.0; p += 0.05) {
        const double cur = optimal_indemnity(kBench, p);
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("delta branches and signs") {
    const double p_hat = 1.0 / (1.0 + std::exp(-indemnity_zero_logit(kBench)));
    CHECK(p_hat == doctest::Approx(0.0548).epsilon(1e-2));
    CHECK(delta(kBench, 0.5 * p_hat) < 0.0);
    CHECK(delta(kBench, p_hat) < 0.0);
    CHECK(delta(kBench, 0.999) > 0.9);

    // Paper parameters: insurance dominates at every representable interior p.
    CHECK(delta(kPaper, 1e-6) > 0.0);
    CHECK(delta(kPaper, 0.334) == doctest::Approx(0.334).epsilon(1e-3));
}

TEST_CASE("threshold: calibrated parameters give an interior root") {
    const double p_star = threshold(kBench);
    CHECK(p_star > 0.34);
    CHECK(p_star < 0.36);
    CHECK(std::abs(delta(kBench, p_star)) <= 1e-10);
    CHECK(delta(kBench, p_star - 0.01) < 0.0);
    CHECK(delta(kBench, p_star + 0.01) > 0.0);
}

TEST_CASE("threshold: paper parameters have no representable root") {
    CHECK_THROWS_AS(threshold(kPaper), Error);
    try {
        threshold(kPaper);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ConvergenceFailure);
    }
}

TEST_CASE("threshold self-consistency over random calibrations") {
    std::mt19937_64 rng(1203);
    std::uniform_real_distribution<double> alpha(0.1, 0.6);
    std::uniform_real_distribution<double> z(0.3, 5.0);
    std::uniform_real_distribution<double> fee_frac(0.05, 0.6);
    std::uniform_real_distribution<double> wealth(10.0, 5000.0);
    int done = 0;
    while (done < 200) {
        InsuranceParams params;
        params.alpha = alpha(rng);
        params.wealth = wealth(rng);
        params.risk_aversion = z(rng) / params.wealth;
        params.fee = fee_frac(rng) * params.wealth;
        try {
            const double p_star = threshold(params);
            CHECK(std::abs(delta(params, p_star)) <= 1e-10);
            CHECK(p_star > 0.0);
            CHECK(p_star < 1.0);
            ++done;
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::ConvergenceFailure);
        }
    }
    // Doubling risk aversion moves the root but keeps delta(p*) ~ 0.
    InsuranceParams doubled = kBench;
    doubled.risk_aversion *= 2.0;
    CHECK(std::abs(delta(doubled, threshold(doubled))) <= 1e-10);
}

TEST_CASE("threshold decreases as the fee vanishes") {
    InsuranceParams params = kBench;
    double prev = threshold(params);
    for (double fee : {20.0, 12.0, 6.0, 3.0}) {
        params.fee = fee;
        const double cur = threshold(params);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("value function branches, kink, and convexity") {
    const double p_star = threshold(kBench);

    // Below the threshold the value is the uninsured straight line.
    for (double q : {0.1, 0.2, 0.3}) {
        CHECK(insurance_value(kBench, q) ==
              doctest::Approx(expected_utility_no_insurance(kBench, q)).epsilon(1e-14));
    }
    // Above it, the insured branch.
    for (double q : {0.45, 0.6, 0.8}) {
        CHECK(insurance_value(kBench, q) ==
              doctest::Approx(expected_utility(kBench, q, optimal_indemnity(kBench, q)))
                  .epsilon(1e-14));
    }

    // One-sided slopes differ at the kink.
    const double h = 1e-7;
    const double left = (insurance_value(kBench, p_star) - insurance_value(kBench, p_star - h)) / h;
    const double right = (insurance_value(kBench, p_star + h) - insurance_value(kBench, p_star)) / h;
    CHECK(right - left > 0.5);

    // Convexity: second differences nonnegative on a grid.
    const double step = 1e-3;
    for (double q = 0.01; q + 2 * step < 0.995; q += step) {
        const double second = insurance_value(kBench, q) -
                              2.0 * insurance_value(kBench, q + step) +
                              insurance_value(kBench, q + 2 * step);
        CHECK(second >= -1e-9);
    }

    // Twice differentiable above the threshold with positive curvature.
    CHECK(analytic_second_derivative(kBench, 0.6) > 0.0);
    CHECK_THROWS_AS(insurance_value(kBench, -0.1), Error);
}

TEST_CASE("numeric hessian matches the analytic insured curvature") {
    ScalarBody body = insurance_body(kBench);
    ValueFn fn = [&](const Belief& p) { return body.value(p[1]); };
    for (double q : {0.5, 0.6, 0.75}) {
        Matrix H = numeric_hessian(fn, belief2(q), 1e-3);
        const double exact = analytic_second_derivative(kBench, q);
        CHECK(H.at(0, 0) == doctest::Approx(exact).epsilon(1e-4));
        CHECK(exact > 0.0);
    }
}

TEST_CASE("voi_epsilon reproduces the three regimes") {
    const double p_star = threshold(kBench);
    const std::vector<double> eps = {1e-2, 1e-3, 1e-4, 1e-5};

    // Exactly zero below the threshold.
    for (double e : {1e-3, 1e-4, 1e-5})
        CHECK(voi_epsilon(kBench, p_star - 0.05, e) == 0.0);

    // Order epsilon at the kink.
    const double slope_kink = loglog_slope(kBench, p_star, eps);
    CHECK(slope_kink > 0.95);
    CHECK(slope_kink < 1.05);

    // Order epsilon^2 in the smooth region.
    const double slope_smooth = loglog_slope(kBench, p_star + 0.1, eps);
    CHECK(slope_smooth > 1.95);
    CHECK(slope_smooth < 2.05);

    CHECK_THROWS_AS(voi_epsilon(kBench, 0.01, 0.5), Error);
}

TEST_CASE("grid action set approximates the closed-form value function") {
    // This calibration's optimal indemnity reaches ~2.9x wealth near q = 0.95,
    // so the sampling grid extends to 4x wealth.
    std::vector<double> wide;
    for (int i = 0; i <= 4000; ++i) wide.push_back(4.0 * kBench.wealth * i / 4000.0);
    ActionSet grid_body = insurance_action_set(kBench, wide);
    double worst = 0.0;
    for (int i = 50; i <= 950; ++i) {
        const double q = static_cast<double>(i) / 1000.0;
        const double v_grid = value_function(grid_body, belief2(q));
        const double v_exact = insurance_value(kBench, q);
        worst = std::max(worst, std::abs(v_grid - v_exact));
        CHECK(v_grid <= v_exact + 1e-12);  // inner approximation
    }
    CHECK(worst <= 1e-3);

    // The {0} grid yields the two-point body: no insurance and the pure-fee point.
    ActionSet tiny = insurance_action_set(kBench, {0.0});
    CHECK(tiny.vertices.size() == 2);
    CHECK_THROWS_AS(insurance_action_set(kBench, {1.0, 2.0}), Error);
    CHECK_THROWS_AS(insurance_action_set(kBench, {0.0, 2.0, 2.0}), Error);
}

TEST_CASE("grid body classification and cross-module VoI agreement") {
    ActionSet grid_body = insurance_action_set(kBench, default_indemnity_grid(kBench));
    ClassifyOptions coarse;
    coarse.confident_radius = 1e-2;
    coarse.hessian_step = 1e-2;
    RegimeReport r = classify_prior(grid_body, Prior::from(belief2(0.6)), coarse);
    CHECK(r.regime == Regime::Flexible);

    Prior prior = Prior::from(belief2(0.6));
    InformationStructure q = symmetric_split2(0.6, 0.05);
    const double via_body = value_of_information(grid_body, prior, q);
    const double via_closed = voi_epsilon(kBench, 0.6, 0.05);
    CHECK(std::abs(via_body - via_closed) <= 1e-3);
}

TEST_CASE("log-domain evaluation never overflows on wide parameter draws") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> alpha(0.02, 0.95);
    std::uniform_real_distribution<double> logw(std::log(1.0), std::log(50000.0));
    std::uniform_real_distribution<double> logz(std::log(0.05), std::log(1e5));
    std::uniform_real_distribution<double> fee_frac(0.001, 0.5);
    std::uniform_real_distribution<double> prob(0.001, 0.999);
    for (int it = 0; it < 1000; ++it) {
        InsuranceParams params;
        params.alpha = alpha(rng);
        params.wealth = std::exp(logw(rng));
        params.risk_aversion = std::exp(logz(rng)) / params.wealth;  // R*wealth up to 1e5
        params.fee = std::max(1e-9, fee_frac(rng) * params.wealth);
        const double p = prob(rng);

        CHECK(std::isfinite(utility(params, params.wealth)));
        CHECK(std::isfinite(utility(params, -params.fee)));
        CHECK(std::isfinite(expected_utility_no_insurance(params, p)));
        const double ind = optimal_indemnity(params, p);
        CHECK(std::isfinite(ind));
        if (ind >= 0.0) CHECK(std::isfinite(expected_utility(params, p, ind)));
        CHECK(std::isfinite(delta(params, p)));
        const double v = insurance_value(params, p);
        CHECK(std::isfinite(v));
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        if (p > 0.01 && p < 0.99) CHECK(std::isfinite(voi_epsilon(params, p, 0.005)));
        try {
            const double p_star = threshold(params);
            CHECK(std::isfinite(p_star));
            CHECK(std::abs(delta(params, p_star)) <= 1e-8);
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::ConvergenceFailure);
        }
    }
}
