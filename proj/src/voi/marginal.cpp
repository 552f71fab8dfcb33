#include "voi/marginal.hpp"

#include <algorithm>
#include <cmath>

namespace voi {

void gauss_hermite(int n, Vec& nodes, Vec& weights) {
    if (n < 1) throw Error(ErrorKind::InvalidInput, "need at least one quadrature node");
    nodes.assign(static_cast<std::size_t>(n), 0.0);
    weights.assign(static_cast<std::size_t>(n), 0.0);
    const double pim4 = 0.7511255444649425;  // pi^(-1/4)
    const int m = (n + 1) / 2;
    double z = 0.0, pp = 0.0;
    for (int i = 0; i < m; ++i) {
        if (i == 0)
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
        else if (i == 1)
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        else if (i == 2)
            z = 1.86 * z - 0.86 * nodes[0];
        else if (i == 3)
            z = 1.91 * z - 0.91 * nodes[1];
        else
            z = 2.0 * z - nodes[static_cast<std::size_t>(i - 2)];
        for (int it = 0; it < 100; ++it) {
            double p1 = pim4, p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-14) break;
        }
        nodes[static_cast<std::size_t>(i)] = z;
        nodes[static_cast<std::size_t>(n - 1 - i)] = -z;
        weights[static_cast<std::size_t>(i)] = 2.0 / (pp * pp);
        weights[static_cast<std::size_t>(n - 1 - i)] = weights[static_cast<std::size_t>(i)];
    }
}

namespace {

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

struct ScalarAtom {
    double t;  // state-2 coordinate of the posterior
    double w;
};

// Shifts weights by w_i *= 1 + s (t_i - mean) so the posterior mean lands on
// the prior exactly; leaves the total mass untouched.
void bayes_correct(std::vector<ScalarAtom>& atoms, double target) {
    double wsum = 0.0;
    for (const auto& a : atoms) wsum += a.w;
    for (auto& a : atoms) a.w /= wsum;
    double mean = 0.0;
    for (const auto& a : atoms) mean += a.w * a.t;
    double var = 0.0;
    for (const auto& a : atoms) var += a.w * (a.t - mean) * (a.t - mean);
    const double shift = target - mean;
    if (shift == 0.0) return;
    if (var <= 1e-30)
        throw Error(ErrorKind::QuadratureResidual,
                    "degenerate posterior spread; cannot restore Bayes plausibility");
    const double s = shift / var;
    for (auto& a : atoms) {
        a.w *= 1.0 + s * (a.t - mean);
        if (!(a.w > 0.0))
            throw Error(ErrorKind::QuadratureResidual,
                        "Bayes correction produced a nonpositive weight");
    }
}

InformationStructure finish(std::vector<ScalarAtom> atoms, const Prior& prior) {
    bayes_correct(atoms, prior.belief()[1]);
    InformationStructure info;
    info.atoms.reserve(atoms.size());
    for (const auto& a : atoms) info.atoms.push_back({belief2(a.t), a.w});
    ValidationReport report = validate_information_structure(info, prior);
    if (!report.valid())
        throw Error(ErrorKind::QuadratureResidual,
                    "instantiated structure fails validation: " + report.issues.front().message);
    return info;
}

}  // namespace

InformationStructure instantiate(const InfoFamily& family, const Prior& prior, double theta) {
    if (prior.size() != 2)
        throw Error(ErrorKind::DimensionMismatch, "signal families are two-state only");
    if (!(theta > 0.0)) throw Error(ErrorKind::DomainError, "theta must be positive");
    const double mu = prior.belief()[1];

    switch (family.kind) {
        case FamilyKind::BinarySplit: {
            if (!(family.alpha > 0.0))
                throw Error(ErrorKind::InvalidInput, "binary split needs alpha > 0");
            const double s = std::pow(theta, family.alpha);
            if (!(s < std::min(mu, 1.0 - mu)))
                throw Error(ErrorKind::ThetaTooLarge,
                            "split theta^alpha reaches the simplex boundary");
            InformationStructure info;
            info.atoms.push_back({belief2(mu - s), 0.5});
            info.atoms.push_back({belief2(mu + s), 0.5});
            return info;
        }
        case FamilyKind::Poisson: {
            if (!(family.rho1 > family.rho0 && family.rho0 > 0.0))
                throw Error(ErrorKind::InvalidInput, "Poisson family needs rho1 > rho0 > 0");
            if (family.max_successes < 1)
                throw Error(ErrorKind::InvalidInput, "need at least one success count");
            const double lam0 = family.rho0 * theta;
            const double lam1 = family.rho1 * theta;
            std::vector<ScalarAtom> atoms;
            double lgamma_n1 = 0.0;  // log(n!)
            for (int n = 0; n <= family.max_successes; ++n) {
                if (n > 0) lgamma_n1 += std::log(static_cast<double>(n));
                const double lp0 = -lam0 + n * std::log(lam0) - lgamma_n1;
                const double lp1 = -lam1 + n * std::log(lam1) - lgamma_n1;
                const double m0 = (1.0 - mu) * std::exp(lp0);
                const double m1 = mu * std::exp(lp1);
                const double w = m0 + m1;
                if (!(w > 0.0)) continue;
                atoms.push_back({m1 / w, w});
            }
            return finish(std::move(atoms), prior);
        }
        case FamilyKind::Brownian: {
            Vec x, w;
            gauss_hermite(family.quad_nodes, x, w);
            const double root_pi = std::sqrt(M_PI);
            const double logit_mu = std::log(mu) - std::log1p(-mu);
            std::vector<ScalarAtom> atoms;
            atoms.reserve(2 * x.size());
            const double masses[2] = {1.0 - mu, mu};
            for (int state = 0; state < 2; ++state) {
                for (std::size_t i = 0; i < x.size(); ++i) {
                    const double z = state * theta + std::sqrt(2.0 * theta) * x[i];
                    const double t = sigmoid(logit_mu + z - 0.5 * theta);
                    atoms.push_back({t, masses[state] * w[i] / root_pi});
                }
            }
            return finish(std::move(atoms), prior);
        }
    }
    throw Error(ErrorKind::InvalidInput, "unknown family kind");
}

const char* marginal_class_name(MarginalClass c) {
    switch (c) {
        case MarginalClass::Zero: return "0";
        case MarginalClass::Finite: return "1";
        case MarginalClass::Infinite: return "inf";
    }
    return "?";
}

MarginalReport marginal_voi(const ActionSet& A, const Prior& prior, const InfoFamily& family,
                            const std::vector<double>& theta_grid, double band) {
    if (theta_grid.size() < 4)
        throw Error(ErrorKind::DegenerateGrid, "need at least four thetas");
    for (std::size_t i = 0; i < theta_grid.size(); ++i) {
        if (!(theta_grid[i] > 0.0))
            throw Error(ErrorKind::DegenerateGrid, "thetas must be positive");
        if (i > 0 && !(theta_grid[i] < theta_grid[i - 1]))
            throw Error(ErrorKind::DegenerateGrid, "thetas must decrease");
    }
    if (!(theta_grid.front() / theta_grid.back() >= 100.0))
        throw Error(ErrorKind::DegenerateGrid, "theta grid must span at least two decades");

    MarginalReport report;
    for (double theta : theta_grid) {
        try {
            InformationStructure q = instantiate(family, prior, theta);
            report.thetas.push_back(theta);
            report.voi_values.push_back(value_of_information(A, prior, q));
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::ThetaTooLarge) {
                ++report.skipped;
                continue;
            }
            throw;
        }
    }
    if (report.thetas.size() < 2)
        throw Error(ErrorKind::DegenerateGrid, "fewer than two thetas survive the precondition");

    constexpr double kZero = 1e-14;
    // V+ is a small-theta notion: exact zeros at the two smallest thetas
    // settle the classification outright.
    const std::size_t last = report.thetas.size() - 1;
    if (report.voi_values[last] <= kZero && report.voi_values[last - 1] <= kZero) {
        report.classification = MarginalClass::Zero;
        return report;
    }

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < report.thetas.size(); ++i) {
        if (report.voi_values[i] <= kZero) continue;
        const double lx = std::log(report.thetas[i]);
        const double ly = std::log(report.voi_values[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) {
        report.classification = MarginalClass::Zero;
        return report;
    }
    const double denom = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / denom;
    report.slope = slope;
    if (slope > 1.0 + band)
        report.classification = MarginalClass::Zero;
    else if (slope >= 1.0 - band)
        report.classification = MarginalClass::Finite;
    else
        report.classification = MarginalClass::Infinite;
    return report;
}

ActionSet quadratic_scoring_grid_body(std::size_t points) {
    std::vector<Action> rows;
    rows.reserve(points);
    for (std::size_t i = 0; i < points; ++i) {
        const double r = static_cast<double>(i) / static_cast<double>(points - 1);
        rows.push_back(Action{{1.0 - r * r, 1.0 - (1.0 - r) * (1.0 - r)}});
    }
    // Every sample of the strictly convex boundary arc is extreme.
    return ActionSet{std::move(rows), true};
}

std::vector<Table2Row> table2_harness(const Table2Options& opts) {
    const ActionSet table_body =
        hull_reduce({Action{{3.0, 0.0}}, Action{{2.0, 2.0}}, Action{{0.0, 2.5}}, Action{{0.0, 0.0}}});
    const ActionSet flexible_body = quadratic_scoring_grid_body();

    struct RegimeProblem {
        const ActionSet* body;
        Prior prior;
    };
    const RegimeProblem regimes[3] = {
        {&table_body, Prior::from(belief2(0.5))},        // confident
        {&table_body, Prior::from(belief2(1.0 / 3.0))},  // undecided
        {&flexible_body, Prior::from(belief2(0.5))},     // flexible
    };

    std::vector<std::pair<std::string, InfoFamily>> families;
    families.push_back({"brownian", InfoFamily{FamilyKind::Brownian}});
    // Poisson variants placing the one-success posterior outside/inside the
    // confident problem's confidence interval (upper endpoint 4/5).
    families.push_back({"poisson-reversal", InfoFamily{FamilyKind::Poisson, 1.0, 9.0}});
    families.push_back({"poisson-contained", InfoFamily{FamilyKind::Poisson, 1.0, 7.0 / 3.0}});
    for (double a : {0.25, 0.5, 0.75, 1.0, 2.0}) {
        InfoFamily f;
        f.kind = FamilyKind::BinarySplit;
        f.alpha = a;
        std::string name = "binary-alpha-" + std::to_string(a).substr(0, 4);
        families.push_back({name, f});
    }

    std::vector<Table2Row> rows;
    for (auto& [name, family] : families) {
        family.quad_nodes = opts.quad_nodes;
        family.max_successes = opts.max_successes;
        Table2Row row;
        row.family = name;
        for (int r = 0; r < 3; ++r) {
            MarginalReport rep = marginal_voi(*regimes[r].body, regimes[r].prior, family,
                                              opts.theta_grid, opts.band);
            row.cells[static_cast<std::size_t>(r)] = rep.classification;
            row.slopes[static_cast<std::size_t>(r)] = rep.slope;
            row.reports[static_cast<std::size_t>(r)] = std::move(rep);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace voi
